//! The multi-round container construction, its hypothesis checks and the
//! enumeration of all containers over the membership-answer tree.

use std::collections::HashMap;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::hypergraph::{Multihypergraph, Vertex, VertexSet};
use crate::measures::{alpha_schedule, alpha_star, norm_sq_t};
use crate::rational::{binom, int, pow, ratio, uint, Rational};
use crate::round::{run_round, Branch, MembershipOracle, RoundConfig, RoundTrace};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisCheck {
    pub name: String,
    #[serde(with = "crate::rational::as_string")]
    pub lhs: Rational,
    #[serde(with = "crate::rational::as_string")]
    pub rhs: Rational,
    /// `lhs <= rhs`.
    pub holds: bool,
}

impl HypothesisCheck {
    pub(crate) fn new(name: impl Into<String>, lhs: Rational, rhs: Rational) -> Self {
        let holds = lhs <= rhs;
        HypothesisCheck { name: name.into(), lhs, rhs, holds }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub holds: bool,
    pub checks: Vec<HypothesisCheck>,
}

impl HypothesisReport {
    pub(crate) fn from_checks(checks: Vec<HypothesisCheck>) -> Self {
        HypothesisReport { holds: checks.iter().all(|c| c.holds), checks }
    }

    pub fn failures(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.holds).map(|c| c.name.as_str()).collect()
    }
}

/// `300s⁴ Σ_t binom(s-1, t-1)(5000s³/p)^{t-1} ‖σ^(t)‖² ≤ 1/(δ·v) ≤ p/500`.
pub fn check_hypothesis_main(h: &Multihypergraph, p: &Rational, delta: &Rational) -> Result<HypothesisReport> {
    if h.is_empty() {
        return Err(Error::EmptyHypergraph);
    }
    if !p.is_positive() || !delta.is_positive() {
        return Err(invalid("p and delta must be positive"));
    }
    let s = h.uniformity() as u64;
    let gamma_p = int(5000 * s.pow(3)) / p;
    let mut sum = Rational::zero();
    for t in 1..=s {
        sum += uint(&binom(s - 1, t - 1)) * pow(&gamma_p, (t - 1) as u32) * norm_sq_t(h, t as usize)?;
    }
    let lhs = int(300 * s.pow(4)) * sum;
    let middle = int(1) / (delta * int(h.vertex_count() as u64));
    Ok(HypothesisReport::from_checks(vec![
        HypothesisCheck::new("weighted norms <= 1/(delta v)", lhs, middle.clone()),
        HypothesisCheck::new("1/(delta v) <= p/500", middle, p / int(500)),
    ]))
}

/// `q·v ≥ 10⁸s⁶K` and `Δ_t ≤ K(q/(10⁶s⁵))^{t-1}·e/v` for every `t`.
pub fn check_hypothesis_simple(h: &Multihypergraph, q: &Rational, k: &Rational) -> Result<HypothesisReport> {
    if h.is_empty() {
        return Err(Error::EmptyHypergraph);
    }
    let s = h.uniformity() as u64;
    let v = int(h.vertex_count() as u64);
    let mut checks = vec![HypothesisCheck::new("10^8 s^6 K <= q v", int(100_000_000u64 * s.pow(6)) * k, q * &v)];
    let base = q / int(1_000_000 * s.pow(5));
    let avg = uint(h.edge_count()) / &v;
    for t in 1..=s as usize {
        checks.push(HypothesisCheck::new(
            format!("Delta_{t} bound"),
            uint(&h.max_degree_t(t)?),
            k * pow(&base, t as u32 - 1) * &avg,
        ));
    }
    Ok(HypothesisReport::from_checks(checks))
}

/// `p = q/(30s²)` and `δ = 1/(10³s⁴K)`.
pub fn main_simple_params(s: usize, q: &Rational, k: &Rational) -> Result<(Rational, Rational)> {
    if !q.is_positive() || !k.is_positive() {
        return Err(invalid("q and K must be positive"));
    }
    let s = s as u64;
    Ok((q / int(30 * s * s), int(1) / (int(1000 * s.pow(4)) * k)))
}

/// `ε = 1/(10s)` for every round.
pub fn round_eps(s: usize) -> Rational {
    ratio(1, 10 * s as u64)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundRecord {
    /// Uniformity of the hypergraph the round builds.
    pub r: usize,
    pub fingerprint: VertexSet,
    /// Absent when the round's input hypergraph was empty and no query was made.
    pub trace: Option<RoundTrace>,
    /// `α^(r)* ≤ α^(r+1)` coordinatewise.
    pub alpha_induction: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FingerprintResult {
    pub g: VertexSet,
    pub f_star: VertexSet,
    pub rounds_used: usize,
    pub rounds: Vec<RoundRecord>,
    /// The `r` of the round that stopped with a container, if any.
    pub stopped_at: Option<usize>,
    #[serde(with = "crate::rational::as_string")]
    pub p: Rational,
    #[serde(with = "crate::rational::as_string")]
    pub delta: Rational,
    pub hypothesis: HypothesisReport,
    /// `|g| ≤ 30s²p·v` and `|f*| ≤ (1-δ)v`; only evaluated when the hypothesis holds.
    pub analytic_bounds: Option<bool>,
}

impl FingerprintResult {
    pub fn container(&self) -> VertexSet {
        self.g.union(&self.f_star)
    }
}

/// Records every answer and remembers what was asked.
struct Memo<'a, O: ?Sized> {
    inner: &'a mut O,
    answers: HashMap<Vertex, bool>,
}

impl<O: MembershipOracle + ?Sized> MembershipOracle for Memo<'_, O> {
    fn contains(&mut self, v: Vertex) -> bool {
        if let Some(&a) = self.answers.get(&v) {
            return a;
        }
        let a = self.inner.contains(v);
        self.answers.insert(v, a);
        a
    }
}

struct RoundsOutput {
    g: VertexSet,
    f_star: VertexSet,
    rounds: Vec<RoundRecord>,
    stopped_at: Option<usize>,
}

fn run_rounds<O: MembershipOracle + ?Sized>(h: &Multihypergraph, p: &Rational, oracle: &mut O, naive: bool) -> Result<RoundsOutput> {
    let s = h.uniformity();
    let n = h.vertex_count();
    let eps = round_eps(s);
    let mut memo = Memo { inner: oracle, answers: HashMap::new() };
    let mut current = h.clone();
    let mut g = VertexSet::empty();
    let mut rounds = Vec::new();
    for r in (1..s).rev() {
        let alpha = alpha_schedule(s, p, r)?;
        let alpha_induction = alpha_star(&alpha, &eps, p)?.le_coordinatewise(&alpha_schedule(s, p, r + 1)?);
        if current.is_empty() {
            rounds.push(RoundRecord { r, fingerprint: VertexSet::empty(), trace: None, alpha_induction });
            current = Multihypergraph::new(r, n)?;
            continue;
        }
        let mut cfg = RoundConfig::new(eps.clone(), p.clone(), alpha);
        cfg.naive = naive;
        let out = run_round(&current, &cfg, &mut memo)?;
        g = g.union(&out.fingerprint);
        rounds.push(RoundRecord { r, fingerprint: out.fingerprint, trace: Some(out.trace), alpha_induction });
        match out.branch {
            Branch::Pruned { container } => return Ok(RoundsOutput { g, f_star: container, rounds, stopped_at: Some(r) }),
            Branch::Reduced { f } => current = f,
        }
    }
    let f_star = (0..n as Vertex).filter(|&v| current.multiplicity(&[v]).is_zero()).collect();
    Ok(RoundsOutput { g, f_star, rounds, stopped_at: None })
}

fn analytic_bounds(h: &Multihypergraph, p: &Rational, delta: &Rational, g: &VertexSet, f_star: &VertexSet) -> bool {
    let s = h.uniformity() as u64;
    let v = int(h.vertex_count() as u64);
    int(g.len() as u64) <= int(30 * s * s) * p * &v && int(f_star.len() as u64) <= (int(1) - delta) * &v
}

/// Runs rounds `r = s-1, …, 1` with `ε = 1/(10s)` and `α^(r)` from the schedule. Without
/// `forced`, fails unless [`check_hypothesis_main`] passes.
pub fn build_fingerprint<O: MembershipOracle + ?Sized>(
    h: &Multihypergraph,
    p: &Rational,
    delta: &Rational,
    oracle: &mut O,
    forced: bool,
) -> Result<FingerprintResult> {
    build_fingerprint_with(h, p, delta, oracle, forced, false)
}

/// As [`build_fingerprint`]; `naive` selects the reference round implementation.
pub fn build_fingerprint_with<O: MembershipOracle + ?Sized>(
    h: &Multihypergraph,
    p: &Rational,
    delta: &Rational,
    oracle: &mut O,
    forced: bool,
    naive: bool,
) -> Result<FingerprintResult> {
    let hypothesis = check_hypothesis_main(h, p, delta)?;
    if !forced && !hypothesis.holds {
        return Err(Error::HypothesisFailed(format!("main hypothesis: {}", hypothesis.failures().join("; "))));
    }
    if !p.is_positive() || *p >= int(1) {
        return Err(invalid("p must lie in (0, 1)"));
    }
    let out = run_rounds(h, p, oracle, naive)?;
    let analytic = hypothesis.holds.then(|| analytic_bounds(h, p, delta, &out.g, &out.f_star));
    Ok(FingerprintResult {
        g: out.g,
        f_star: out.f_star,
        rounds_used: out.rounds.len(),
        rounds: out.rounds,
        stopped_at: out.stopped_at,
        p: p.clone(),
        delta: delta.clone(),
        hypothesis,
        analytic_bounds: analytic,
    })
}

/// The simple form: `p = q/(30s²)`, `δ = 1/(10³s⁴K)`. Without `forced`, both the
/// simple and the main hypothesis must hold.
pub fn main_simple<O: MembershipOracle + ?Sized>(
    h: &Multihypergraph,
    q: &Rational,
    k: &Rational,
    oracle: &mut O,
    forced: bool,
) -> Result<FingerprintResult> {
    if h.is_empty() {
        return Err(Error::EmptyHypergraph);
    }
    let simple = check_hypothesis_simple(h, q, k)?;
    if !forced && !simple.holds {
        return Err(Error::HypothesisFailed(format!("simple hypothesis: {}", simple.failures().join("; "))));
    }
    let (p, delta) = main_simple_params(h.uniformity(), q, k)?;
    build_fingerprint(h, &p, &delta, oracle, forced)
}

/// Per-`I` container `g(I) ∪ f*(I)` of the simple form.
pub fn container_for(h: &Multihypergraph, q: &Rational, k: &Rational, independent: &VertexSet, forced: bool) -> Result<FingerprintResult> {
    let mut oracle = independent.clone();
    main_simple(h, q, k, &mut oracle, forced)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumeratedContainer {
    pub fingerprint: VertexSet,
    pub container: VertexSet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContainerEnumeration {
    /// Sorted by fingerprint.
    pub leaves: Vec<EnumeratedContainer>,
    /// The leaf limit was reached before the answer tree was exhausted.
    pub partial: bool,
    pub simple_hypothesis: HypothesisReport,
    pub main_hypothesis: HypothesisReport,
}

impl ContainerEnumeration {
    pub fn containers(&self) -> Vec<VertexSet> {
        let mut out: Vec<VertexSet> = self.leaves.iter().map(|l| l.container.clone()).collect();
        out.sort();
        out.dedup();
        out
    }
}

/// Answers a fixed prefix of fresh queries, then "no"; records all fresh queries.
struct Scripted<'a> {
    script: &'a [bool],
    asked: Vec<Vertex>,
}

impl MembershipOracle for Scripted<'_> {
    fn contains(&mut self, v: Vertex) -> bool {
        let a = self.script.get(self.asked.len()).copied().unwrap_or(false);
        self.asked.push(v);
        a
    }
}

/// Would adding `v` to the independent set `yes` create an edge of `host`?
fn closes_edge(incident: &[Vec<usize>], edges: &[&[Vertex]], yes: &[bool], v: Vertex) -> bool {
    incident[v as usize].iter().any(|&i| edges[i].iter().all(|&u| u == v || yes[u as usize]))
}

/// Explores every answer sequence consistent with some independent set of `h`
/// (a "yes" is only tried if the "yes" answers stay independent) and returns one
/// container per leaf.
pub fn enumerate_containers(h: &Multihypergraph, q: &Rational, k: &Rational, forced: bool, limit: usize) -> Result<ContainerEnumeration> {
    enumerate_containers_in(h, h, q, k, forced, limit)
}

/// As [`enumerate_containers`], with independence judged in `host` (same vertex set, `h ⊆ host`).
pub fn enumerate_containers_in(
    h: &Multihypergraph,
    host: &Multihypergraph,
    q: &Rational,
    k: &Rational,
    forced: bool,
    limit: usize,
) -> Result<ContainerEnumeration> {
    if h.is_empty() {
        return Err(Error::EmptyHypergraph);
    }
    if host.vertex_count() != h.vertex_count() {
        return Err(Error::VertexCountMismatch(h.vertex_count(), host.vertex_count()));
    }
    let simple = check_hypothesis_simple(h, q, k)?;
    let (p, delta) = main_simple_params(h.uniformity(), q, k)?;
    let main = check_hypothesis_main(h, &p, &delta)?;
    if !forced && !simple.holds {
        return Err(Error::HypothesisFailed(format!("simple hypothesis: {}", simple.failures().join("; "))));
    }
    if !forced && !main.holds {
        return Err(Error::HypothesisFailed(format!("main hypothesis: {}", main.failures().join("; "))));
    }
    if !p.is_positive() || p >= int(1) {
        return Err(invalid("p = q/(30s^2) must lie in (0, 1)"));
    }
    let n = h.vertex_count();
    let host_edges: Vec<&[Vertex]> = host.edges().map(|(e, _)| e).collect();
    let mut incident = vec![Vec::new(); n];
    for (i, e) in host_edges.iter().enumerate() {
        for &v in e.iter() {
            incident[v as usize].push(i);
        }
    }
    let mut leaves = Vec::new();
    let mut partial = false;
    let mut stack: Vec<Vec<bool>> = vec![Vec::new()];
    while let Some(script) = stack.pop() {
        if leaves.len() == limit {
            partial = true;
            break;
        }
        let mut oracle = Scripted { script: &script, asked: Vec::new() };
        let out = run_rounds(h, &p, &mut oracle, false)?;
        let asked = oracle.asked;
        let mut yes = vec![false; n];
        for (i, &a) in script.iter().enumerate() {
            if a {
                yes[asked[i] as usize] = true;
            }
        }
        // push in reverse so that earlier branch points are explored first
        for j in (script.len()..asked.len()).rev() {
            if !closes_edge(&incident, &host_edges, &yes, asked[j]) {
                let mut next = script.clone();
                next.resize(j, false);
                next.push(true);
                stack.push(next);
            }
        }
        leaves.push(EnumeratedContainer { container: out.g.union(&out.f_star), fingerprint: out.g });
    }
    leaves.sort_by(|a, b| (&a.fingerprint, &a.container).cmp(&(&b.fingerprint, &b.container)));
    Ok(ContainerEnumeration { leaves, partial, simple_hypothesis: simple, main_hypothesis: main })
}
