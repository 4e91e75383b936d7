//! One fingerprint round: from an `(r+1)`-uniform `G` and membership answers for an
//! independent set `I`, produce the fingerprint `S_I` and either a container or an
//! `r`-uniform hypergraph `F` of controlled α-norm.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigUint;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::accumulator::{subset_increments, SeededAccumulator};
use crate::error::{invalid, Error, Result};
use crate::geometry::select_vertex;
use crate::hypergraph::{Multihypergraph, Vertex, VertexSet};
use crate::measures::{alpha_norm_sq, alpha_star, hat_delta, norm_sq_t, AlphaWeights};
use crate::prune::{peel, prune_max_degree, prune_min_degree};
use crate::rational::{binom, ceil_to_uint, int, ratio, uint, Rational};

/// Answers "is `v` in I?" for a fixed independent set `I`.
pub trait MembershipOracle {
    fn contains(&mut self, v: Vertex) -> bool;
}

impl MembershipOracle for VertexSet {
    fn contains(&mut self, v: Vertex) -> bool {
        VertexSet::contains(self, v)
    }
}

impl<O: MembershipOracle + ?Sized> MembershipOracle for &mut O {
    fn contains(&mut self, v: Vertex) -> bool {
        (**self).contains(v)
    }
}

/// Wraps a closure as an oracle.
pub struct FnOracle<F>(pub F);

impl<F: FnMut(Vertex) -> bool> MembershipOracle for FnOracle<F> {
    fn contains(&mut self, v: Vertex) -> bool {
        (self.0)(v)
    }
}

#[derive(Clone, Debug)]
pub struct RoundConfig {
    pub eps: Rational,
    pub p: Rational,
    pub alpha: AlphaWeights,
    /// Record `‖σ_α(G*^(j))‖²` after every step.
    pub record_norms: bool,
    /// Recompute every candidate from scratch instead of maintaining them incrementally.
    pub naive: bool,
}

impl RoundConfig {
    pub fn new(eps: Rational, p: Rational, alpha: AlphaWeights) -> Self {
        RoundConfig { eps, p, alpha, record_norms: false, naive: false }
    }

    pub fn validate(&self, r: usize) -> Result<()> {
        if self.alpha.r() != r {
            return Err(invalid(format!("alpha has {} coordinates, the round needs {r}", self.alpha.r())));
        }
        if !self.eps.is_positive() || self.eps >= ratio(1, 9 * r as u64) {
            return Err(invalid(format!("eps must lie in (0, 1/{})", 9 * r)));
        }
        if !self.p.is_positive() || self.p >= int(1) {
            return Err(invalid("p must lie in (0, 1)"));
        }
        Ok(())
    }

    /// `a = 25/ε²`.
    pub fn a(&self) -> Rational {
        int(25) / (&self.eps * &self.eps)
    }

    /// `b = ⌈2p|V|/ε⌉`.
    pub fn b(&self, vertex_count: usize) -> BigUint {
        fingerprint_bound(&self.p, &self.eps, vertex_count)
    }
}

pub fn fingerprint_bound(p: &Rational, eps: &Rational, vertex_count: usize) -> BigUint {
    ceil_to_uint(&(int(2) * p * int(vertex_count as u64) / eps))
}

/// `‖σ_G‖² ≤ ε³p/(50(r+1))`.
pub fn round_hypothesis(g: &Multihypergraph, eps: &Rational, p: &Rational) -> Result<bool> {
    let r1 = g.uniformity() as u64;
    Ok(norm_sq_t(g, 1)? <= eps * eps * eps * p / int(50 * r1))
}

/// Smallest scaling `k` for which `[a·k·Δ̂₁(G)/B, 2a·k·Δ̂₁(G)/B]` holds an integer
/// `m ≥ 1`, with `B = binom(|V|, r)`; returns `k` and the smallest such `m`.
pub fn choose_scaling(g: &Multihypergraph, a: &Rational) -> Result<(BigUint, BigUint)> {
    if g.is_empty() {
        return Err(Error::EmptyHypergraph);
    }
    if g.uniformity() < 2 {
        return Err(invalid("the round needs uniformity at least 2"));
    }
    if !a.is_positive() {
        return Err(invalid("a must be positive"));
    }
    let r = g.uniformity() as u64 - 1;
    let base = a * hat_delta(g, 1)? / uint(&binom(g.vertex_count() as u64, r));
    // below 1/(2·base) the interval lies under 1; from there on it always reaches an integer
    let k = ceil_to_uint(&(int(1) / (int(2) * &base))).max(BigUint::from(1u32));
    let m = ceil_to_uint(&(uint(&k) * &base));
    debug_assert!(uint(&m) <= int(2) * uint(&k) * &base);
    Ok((k, m))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    FingerprintFull,
    FewEdgesLeft,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Branch {
    Pruned { container: VertexSet },
    Reduced { f: Multihypergraph },
}

impl Branch {
    pub fn name(&self) -> &'static str {
        match self {
            Branch::Pruned { .. } => "pruned",
            Branch::Reduced { .. } => "reduced",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundTrace {
    pub queries: Vec<Vertex>,
    #[serde(rename = "L")]
    pub l: Vec<usize>,
    #[serde(rename = "J")]
    pub j: usize,
    pub branch: String,
    pub hypothesis: bool,
    pub stop: StopReason,
    /// Degree of each queried vertex in the peeled hypergraph at its step.
    #[serde(with = "biguint_vec")]
    pub link_sizes: Vec<BigUint>,
    #[serde(with = "crate::rational::biguint_number")]
    pub k: BigUint,
    #[serde(with = "crate::rational::biguint_number")]
    pub m: BigUint,
    #[serde(with = "crate::rational::biguint_number")]
    pub b: BigUint,
    #[serde(with = "crate::rational::as_string")]
    pub sigma_g_sq: Rational,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_rational_vec")]
    pub norm_history: Option<Vec<Rational>>,
}

mod biguint_vec {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(xs: &[BigUint], s: S) -> std::result::Result<S::Ok, S::Error> {
        let nums: Vec<serde_json::Number> = xs.iter().map(|x| x.to_string().parse().unwrap()).collect();
        nums.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<BigUint>, D::Error> {
        let nums = Vec::<serde_json::Number>::deserialize(d)?;
        nums.iter().map(|n| n.to_string().parse().map_err(serde::de::Error::custom)).collect()
    }
}

mod opt_rational_vec {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(xs: &Option<Vec<Rational>>, s: S) -> std::result::Result<S::Ok, S::Error> {
        let strs: Option<Vec<String>> = xs.as_ref().map(|v| v.iter().map(crate::rational::format).collect());
        strs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Vec<Rational>>, D::Error> {
        let raw = Option::<Vec<String>>::deserialize(d)?;
        raw.map(|v| v.iter().map(|x| crate::rational::parse(x).map_err(serde::de::Error::custom)).collect())
            .transpose()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundOutcome {
    /// `S_I`, sorted.
    pub fingerprint: VertexSet,
    pub branch: Branch,
    pub trace: RoundTrace,
}

impl RoundOutcome {
    pub fn queried(&self) -> VertexSet {
        VertexSet::new(self.trace.queries.clone())
    }

    pub fn trace_json(&self) -> serde_json::Value {
        serde_json::to_value(&self.trace).expect("trace serializes")
    }
}

/// Whether the inequality matching the taken branch holds:
/// pruned needs `J ≥ ε²/((r+1)²‖σ_G‖²)`, reduced needs `‖σ_α(F)‖² ≤ ‖σ_{α*}(G)‖²`.
pub fn analysis_inequality_holds(g: &Multihypergraph, cfg: &RoundConfig, outcome: &RoundOutcome) -> Result<bool> {
    match &outcome.branch {
        Branch::Pruned { .. } => Ok(many_queries(g.uniformity(), &cfg.eps, &outcome.trace.sigma_g_sq, outcome.trace.j)),
        Branch::Reduced { f } => {
            if f.is_empty() {
                return Ok(false);
            }
            let star = alpha_star(&cfg.alpha, &cfg.eps, &cfg.p)?;
            Ok(alpha_norm_sq(f, &cfg.alpha)? <= alpha_norm_sq(g, &star)?)
        }
    }
}

fn many_queries(r1: usize, eps: &Rational, sigma_sq: &Rational, j: usize) -> bool {
    int(j as u64) * int((r1 * r1) as u64) * sigma_sq >= eps * eps
}

struct Setup {
    r: usize,
    n: usize,
    k: BigUint,
    m: BigUint,
    b: BigUint,
    a0: Multihypergraph,
    stop_edges: Rational,
    offset: Rational,
    sigma_g_sq: Rational,
    hypothesis: bool,
}

fn setup(g: &Multihypergraph, cfg: &RoundConfig) -> Result<Setup> {
    if g.is_empty() {
        return Err(Error::EmptyHypergraph);
    }
    if g.uniformity() < 2 {
        return Err(invalid("the round needs uniformity at least 2"));
    }
    let r = g.uniformity() - 1;
    cfg.validate(r)?;
    let n = g.vertex_count();
    let (k, m) = choose_scaling(g, &cfg.a())?;
    let scaled = g.scale(&k)?;
    let a0 = prune_max_degree(&scaled, &(int(r as u64 + 1) / &cfg.eps))?;
    let one_minus_3 = int(1) - int(3) * &cfg.eps;
    let sigma2 = alpha_norm_sq(g, &cfg.alpha)? / (&one_minus_3 * &one_minus_3);
    Ok(Setup {
        r,
        n,
        b: cfg.b(n),
        stop_edges: (int(1) - int(2) * &cfg.eps) * uint(scaled.edge_count()),
        offset: (int(1) + &cfg.eps) * sigma2,
        sigma_g_sq: norm_sq_t(g, 1)?,
        hypothesis: round_hypothesis(g, &cfg.eps, &cfg.p)?,
        k,
        m,
        a0,
    })
}

fn finish(
    g: &Multihypergraph,
    cfg: &RoundConfig,
    st: Setup,
    acc: SeededAccumulator,
    queries: Vec<Vertex>,
    l: Vec<usize>,
    link_sizes: Vec<BigUint>,
    stop: StopReason,
    norm_history: Option<Vec<Rational>>,
) -> RoundOutcome {
    let j = queries.len();
    let fingerprint = VertexSet::new(l.iter().map(|&i| queries[i]).collect());
    let branch = if many_queries(g.uniformity(), &cfg.eps, &st.sigma_g_sq, j) {
        let queried = VertexSet::new(queries.clone());
        Branch::Pruned { container: VertexSet::full(st.n).difference(&queried) }
    } else {
        Branch::Reduced { f: acc.into_explicit() }
    };
    let trace = RoundTrace {
        queries,
        l,
        j,
        branch: branch.name().to_string(),
        hypothesis: st.hypothesis,
        stop,
        link_sizes,
        k: st.k,
        m: st.m,
        b: st.b,
        sigma_g_sq: st.sigma_g_sq,
        norm_history,
    };
    RoundOutcome { fingerprint, branch, trace }
}

/// Runs the round. `oracle` is consulted exactly once per queried vertex, in query order.
pub fn run_round<O: MembershipOracle + ?Sized>(g: &Multihypergraph, cfg: &RoundConfig, oracle: &mut O) -> Result<RoundOutcome> {
    if cfg.naive {
        run_round_naive(g, cfg, oracle)
    } else {
        run_round_incremental(g, cfg, oracle)
    }
}

/// Reference implementation: rebuilds the peeled hypergraph and rescans every candidate each step.
pub fn run_round_naive<O: MembershipOracle + ?Sized>(g: &Multihypergraph, cfg: &RoundConfig, oracle: &mut O) -> Result<RoundOutcome> {
    let st = setup(g, cfg)?;
    let mut acc = SeededAccumulator::new(st.n, st.r, st.m.clone())?;
    let mut a = st.a0.clone();
    let mut removed = vec![false; st.n];
    let (mut queries, mut l, mut link_sizes) = (Vec::new(), Vec::new(), Vec::new());
    let mut history = cfg.record_norms.then(|| vec![acc.alpha_norm_sq(&cfg.alpha)]);
    let stop = loop {
        if uint(&BigUint::from(l.len())) == uint(&st.b) {
            break StopReason::FingerprintFull;
        }
        if uint(a.edge_count()) < st.stop_edges {
            break StopReason::FewEdgesLeft;
        }
        let core = prune_min_degree(&a, &cfg.eps)?;
        let (v, _) = select_vertex(&core, &acc, &cfg.alpha, &st.offset)?;
        let link = core.link(v)?;
        queries.push(v);
        link_sizes.push(link.edge_count().clone());
        if oracle.contains(v) {
            l.push(queries.len() - 1);
            acc.add_link(&link)?;
        }
        removed[v as usize] = true;
        a = a.delete_vertices(&removed);
        if let Some(h) = history.as_mut() {
            h.push(acc.alpha_norm_sq(&cfg.alpha));
        }
    };
    Ok(finish(g, cfg, st, acc, queries, l, link_sizes, stop, history))
}

/// Incremental state for the query loop.
struct Engine<'a> {
    n: usize,
    r: usize,
    eps: &'a Rational,
    weights: Vec<Rational>,
    edges: Vec<Vec<Vertex>>,
    mults: Vec<BigUint>,
    incident: Vec<Vec<usize>>,
    in_a: Vec<bool>,
    in_core: Vec<bool>,
    a_total: BigUint,
    core_deg: Vec<BigUint>,
    tau: BigUint,
    cached: Vec<Option<(BigUint, Rational)>>,
    groups: BTreeMap<BigUint, BTreeSet<(Rational, Vertex)>>,
    dirty: Vec<bool>,
    dirty_list: Vec<Vertex>,
}

impl<'a> Engine<'a> {
    fn new(a0: &Multihypergraph, r: usize, eps: &'a Rational, alpha: &AlphaWeights) -> Self {
        let n = a0.vertex_count();
        let mut edges = Vec::with_capacity(a0.distinct_edges());
        let mut mults = Vec::with_capacity(a0.distinct_edges());
        let mut incident = vec![Vec::new(); n];
        for (i, (e, m)) in a0.edges().enumerate() {
            for &v in e {
                incident[v as usize].push(i);
            }
            edges.push(e.to_vec());
            mults.push(m.clone());
        }
        let weights = (1..=r)
            .map(|t| {
                let c = uint(&binom(r as u64, t as u64));
                alpha.get(t) / (&c * &c)
            })
            .collect();
        let count = edges.len();
        let mut eng = Engine {
            n,
            r,
            eps,
            weights,
            edges,
            mults,
            incident,
            in_a: vec![true; count],
            in_core: vec![false; count],
            a_total: a0.edge_count().clone(),
            core_deg: vec![BigUint::zero(); n],
            tau: BigUint::zero(),
            cached: vec![None; n],
            groups: BTreeMap::new(),
            dirty: vec![false; n],
            dirty_list: Vec::new(),
        };
        eng.tau = eng.threshold();
        eng.rebuild_core();
        for v in 0..n as Vertex {
            eng.mark(v);
        }
        eng
    }

    fn threshold(&self) -> BigUint {
        ceil_to_uint(&(self.eps * uint(&self.a_total) / int(self.n as u64)))
    }

    fn mark(&mut self, v: Vertex) {
        if !self.dirty[v as usize] {
            self.dirty[v as usize] = true;
            self.dirty_list.push(v);
        }
    }

    fn rebuild_core(&mut self) {
        let alive_ids: Vec<usize> = (0..self.edges.len()).filter(|&i| self.in_a[i]).collect();
        let view: Vec<(&[Vertex], &BigUint)> = alive_ids.iter().map(|&i| (self.edges[i].as_slice(), &self.mults[i])).collect();
        let keep = peel(self.n, &view, &self.tau);
        let mut target = vec![false; self.edges.len()];
        for (pos, &i) in alive_ids.iter().enumerate() {
            target[i] = keep[pos];
        }
        for (i, on) in target.into_iter().enumerate() {
            self.set_core(i, on);
        }
    }

    fn set_core(&mut self, i: usize, on: bool) {
        if self.in_core[i] == on {
            return;
        }
        self.in_core[i] = on;
        for idx in 0..self.edges[i].len() {
            let u = self.edges[i][idx];
            if on {
                self.core_deg[u as usize] += &self.mults[i];
            } else {
                self.core_deg[u as usize] -= &self.mults[i];
            }
            self.mark(u);
        }
    }

    fn below(&self, u: Vertex) -> bool {
        let d = &self.core_deg[u as usize];
        !d.is_zero() && *d < self.tau
    }

    /// Removes the edges at `v` from `A` and restores the peeled core.
    fn delete_vertex(&mut self, v: Vertex) {
        let mut queue = VecDeque::new();
        for pos in 0..self.incident[v as usize].len() {
            let i = self.incident[v as usize][pos];
            if !self.in_a[i] {
                continue;
            }
            self.in_a[i] = false;
            self.a_total -= &self.mults[i];
            if self.in_core[i] {
                self.set_core(i, false);
                queue.extend(self.edges[i].iter().copied());
            }
        }
        let tau = self.threshold();
        if tau != self.tau {
            self.tau = tau;
            self.rebuild_core();
            return;
        }
        while let Some(u) = queue.pop_front() {
            if !self.below(u) {
                continue;
            }
            for pos in 0..self.incident[u as usize].len() {
                let i = self.incident[u as usize][pos];
                if self.in_core[i] {
                    self.set_core(i, false);
                    queue.extend(self.edges[i].iter().copied());
                }
            }
        }
    }

    /// Link of `v` in the core, as sorted `r`-sets with multiplicities.
    fn core_link(&self, v: Vertex) -> Vec<(Vec<Vertex>, BigUint)> {
        self.incident[v as usize]
            .iter()
            .filter(|&&i| self.in_core[i])
            .map(|&i| (self.edges[i].iter().copied().filter(|&u| u != v).collect(), self.mults[i].clone()))
            .collect()
    }

    fn candidate_key(&self, acc: &SeededAccumulator, v: Vertex) -> Option<(BigUint, Rational)> {
        let delta = &self.core_deg[v as usize];
        if delta.is_zero() {
            return None;
        }
        let link = self.core_link(v);
        let inc = subset_increments(link.iter().map(|(e, m)| (e.as_slice(), m)), self.r);
        let gain = acc.square_sum_gain(&inc);
        let key: Rational = self.weights.iter().zip(&gain).filter(|(w, _)| !w.is_zero()).map(|(w, g)| w * uint(g)).sum();
        Some((delta.clone(), key))
    }

    fn refresh(&mut self, acc: &SeededAccumulator) {
        let list = std::mem::take(&mut self.dirty_list);
        #[cfg(feature = "parallel")]
        let keys: Vec<Option<(BigUint, Rational)>> = {
            let this = &*self;
            list.par_iter().map(|&v| this.candidate_key(acc, v)).collect()
        };
        #[cfg(not(feature = "parallel"))]
        let keys: Vec<Option<(BigUint, Rational)>> = list.iter().map(|&v| self.candidate_key(acc, v)).collect();
        for (&v, key) in list.iter().zip(keys) {
            self.dirty[v as usize] = false;
            if let Some((d, k)) = self.cached[v as usize].take() {
                let group = self.groups.get_mut(&d).expect("cached group");
                group.remove(&(k, v));
                if group.is_empty() {
                    self.groups.remove(&d);
                }
            }
            if let Some((d, k)) = key {
                self.groups.entry(d.clone()).or_default().insert((k.clone(), v));
                self.cached[v as usize] = Some((d, k));
            }
        }
    }

    /// The S2 choice: minimises `(W + K_v)/(e* + δ_v) − offset·(e* + δ_v)`.
    fn select(&self, acc: &SeededAccumulator, offset: &Rational) -> Option<Vertex> {
        let base: Rational =
            self.weights.iter().enumerate().filter(|(_, w)| !w.is_zero()).map(|(t, w)| w * uint(acc.square_sum(t + 1))).sum();
        let e_star = uint(acc.edge_count());
        let mut best: Option<(Rational, Vertex)> = None;
        for (delta, group) in &self.groups {
            let (key, v) = group.first().expect("groups are never empty");
            let e = &e_star + uint(delta);
            let f = (&base + key) / &e - offset * &e;
            let better = match &best {
                None => true,
                Some((bf, bv)) => f < *bf || (f == *bf && v < bv),
            };
            if better {
                best = Some((f, *v));
            }
        }
        best.map(|(_, v)| v)
    }
}

fn run_round_incremental<O: MembershipOracle + ?Sized>(g: &Multihypergraph, cfg: &RoundConfig, oracle: &mut O) -> Result<RoundOutcome> {
    let st = setup(g, cfg)?;
    let mut acc = SeededAccumulator::new(st.n, st.r, st.m.clone())?;
    let mut eng = Engine::new(&st.a0, st.r, &cfg.eps, &cfg.alpha);
    let (mut queries, mut l, mut link_sizes) = (Vec::new(), Vec::new(), Vec::new());
    let mut history = cfg.record_norms.then(|| vec![acc.alpha_norm_sq(&cfg.alpha)]);
    let b = uint(&st.b);
    let stop = loop {
        if uint(&BigUint::from(l.len())) == b {
            break StopReason::FingerprintFull;
        }
        if uint(&eng.a_total) < st.stop_edges {
            break StopReason::FewEdgesLeft;
        }
        eng.refresh(&acc);
        let v = eng.select(&acc, &st.offset).ok_or_else(|| Error::PreconditionFailed("no candidate vertex left".into()))?;
        queries.push(v);
        link_sizes.push(eng.core_deg[v as usize].clone());
        let mut touched = Vec::new();
        if oracle.contains(v) {
            l.push(queries.len() - 1);
            let link = eng.core_link(v);
            for (e, _) in &link {
                touched.extend_from_slice(e);
            }
            acc.add_edges(link);
        }
        eng.delete_vertex(v);
        touched.sort_unstable();
        touched.dedup();
        for u in touched {
            eng.mark(u);
            for pos in 0..eng.incident[u as usize].len() {
                let i = eng.incident[u as usize][pos];
                if eng.in_core[i] {
                    for idx in 0..eng.edges[i].len() {
                        let w = eng.edges[i][idx];
                        eng.mark(w);
                    }
                }
            }
        }
        if let Some(h) = history.as_mut() {
            h.push(acc.alpha_norm_sq(&cfg.alpha));
        }
    };
    Ok(finish(g, cfg, st, acc, queries, l, link_sizes, stop, history))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scaling_single_edge() {
        let g = Multihypergraph::from_edges(2, 2, [[0u32, 1]]).unwrap();
        let (k, m) = choose_scaling(&g, &int(25)).unwrap();
        assert_eq!(k, BigUint::from(1u32));
        assert_eq!(m, BigUint::from(13u32));
    }

    #[test]
    fn b_value() {
        let cfg = RoundConfig::new(ratio(1, 10), ratio(1, 20), AlphaWeights::ones(1));
        assert_eq!(cfg.b(100), BigUint::from(100u32));
    }

    #[test]
    fn empty_independent_set() {
        let g = Multihypergraph::from_edges(2, 6, (0..6u32).map(|i| [i, (i + 1) % 6])).unwrap();
        let cfg = RoundConfig::new(ratio(1, 10), ratio(1, 2), AlphaWeights::ones(1));
        let out = run_round(&g, &cfg, &mut VertexSet::empty()).unwrap();
        assert!(out.fingerprint.is_empty());
        assert!(out.trace.l.is_empty());
        assert_eq!(out.trace.stop, StopReason::FewEdgesLeft);
        assert_eq!(out.branch.name(), "pruned");
    }
}
