//! The recursive container tree: expand every node that is not a good container by
//! running the simple form on a max-degree-capped subhypergraph of `H[C]`.

use num_bigint::BigUint;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::engine::{enumerate_containers_in, HypothesisCheck, HypothesisReport};
use crate::error::{invalid, Error, Result};
use crate::hypergraph::{for_each_subset, Multihypergraph, Vertex, VertexSet};
use crate::prune::{supersaturate_or_witness, Supersaturation};
use crate::rational::{binom, int, pow, to_f64, uint, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PackagedParams {
    #[serde(with = "crate::rational::as_string")]
    pub alpha: Rational,
    #[serde(with = "crate::rational::as_string")]
    pub beta: Rational,
    #[serde(with = "crate::rational::as_string")]
    pub q: Rational,
    #[serde(rename = "E", with = "crate::rational::biguint_number")]
    pub big_e: BigUint,
    pub forced: bool,
    pub limits: PackagedLimits,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PackagedLimits {
    pub max_nodes: usize,
    /// Leaves explored per node expansion.
    pub enumeration_limit: usize,
    /// Subsets tried when searching for a witness `W` exhaustively.
    pub witness_search_limit: u64,
}

impl Default for PackagedLimits {
    fn default() -> Self {
        PackagedLimits { max_nodes: 100_000, enumeration_limit: 1_000_000, witness_search_limit: 1_000_000 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessSource {
    /// `|C| ≤ α·v(H)`.
    Small,
    WholeSet,
    Greedy,
    Exhaustive,
    /// Found when capped greedy admission could not reach `E` edges.
    Supersaturation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContainerNode {
    #[serde(rename = "C")]
    pub c: VertexSet,
    pub good: bool,
    #[serde(rename = "witness_W")]
    pub witness_w: Option<VertexSet>,
    pub witness_source: Option<WitnessSource>,
    /// A forced subcall returned the node itself, so expansion cannot make progress.
    pub stalled: bool,
    /// `children ≤ (e/q)^{q·v(H)}`, evaluated when the hypotheses hold.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub child_bound: Option<bool>,
    pub children: Vec<ContainerNode>,
}

impl ContainerNode {
    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    fn visit<'a>(&'a self, depth: usize, f: &mut impl FnMut(&'a ContainerNode, usize)) {
        f(self, depth);
        for ch in &self.children {
            ch.visit(depth + 1, f);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeStats {
    pub nodes: usize,
    pub leaves: usize,
    pub height: usize,
    pub stalled_leaves: usize,
    pub max_children: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContainerTree {
    pub params: PackagedParams,
    pub hypothesis: HypothesisReport,
    pub tree: ContainerNode,
    pub stats: TreeStats,
}

impl ContainerTree {
    /// Leaf sets in depth-first order.
    pub fn leaves(&self) -> Vec<VertexSet> {
        let mut out = Vec::new();
        self.tree.visit(0, &mut |n, _| {
            if n.is_leaf() {
                out.push(n.c.clone());
            }
        });
        out
    }

    pub fn nodes(&self) -> Vec<(&ContainerNode, usize)> {
        let mut out = Vec::new();
        self.tree.visit(0, &mut |n, d| out.push((n, d)));
        out
    }
}

/// `αβq·v ≥ 10⁹s⁷`, `10⁴s⁵q ≤ β` and `Δ_t ≤ (q/(10⁶s⁵))^{t-1}·E/v` for `t ≥ 2`.
pub fn check_hypothesis_packaged(h: &Multihypergraph, alpha: &Rational, beta: &Rational, q: &Rational, big_e: &BigUint) -> Result<HypothesisReport> {
    if h.is_empty() {
        return Err(Error::EmptyHypergraph);
    }
    let s = h.uniformity() as u64;
    let v = int(h.vertex_count() as u64);
    let mut checks = vec![
        HypothesisCheck::new("10^9 s^7 <= alpha beta q v", int(1_000_000_000u64) * pow(&int(s), 7), alpha * beta * q * &v),
        HypothesisCheck::new("10^4 s^5 q <= beta", int(10_000 * s.pow(5)) * q, beta.clone()),
    ];
    let base = q / int(1_000_000 * s.pow(5));
    for t in 2..=s as usize {
        checks.push(HypothesisCheck::new(
            format!("Delta_{t} bound"),
            uint(&h.max_degree_t(t)?),
            pow(&base, t as u32 - 1) * uint(big_e) / &v,
        ));
    }
    Ok(HypothesisReport::from_checks(checks))
}

fn validate(h: &Multihypergraph, p: &PackagedParams) -> Result<()> {
    if h.is_empty() {
        return Err(Error::EmptyHypergraph);
    }
    let unit = |x: &Rational| x.is_positive() && *x < int(1);
    if !unit(&p.alpha) || !unit(&p.beta) || !unit(&p.q) {
        return Err(invalid("alpha, beta and q must lie in (0, 1)"));
    }
    if p.big_e < BigUint::from(h.vertex_count()) {
        return Err(invalid(format!("E = {} is below v(H) = {}", p.big_e, h.vertex_count())));
    }
    Ok(())
}

struct EdgeIndex {
    edges: Vec<(Vec<Vertex>, BigUint)>,
}

impl EdgeIndex {
    fn inside(h: &Multihypergraph, c: &VertexSet) -> Self {
        EdgeIndex { edges: h.edges().filter(|(e, _)| e.iter().all(|&u| c.contains(u))).map(|(e, m)| (e.to_vec(), m.clone())).collect() }
    }

    fn count_avoiding(&self, removed: &[bool]) -> BigUint {
        self.edges.iter().filter(|(e, _)| !e.iter().any(|&u| removed[u as usize])).map(|(_, m)| m).sum()
    }
}

/// A witness that `C` is a good container, if one is found.
fn classify(h: &Multihypergraph, c: &VertexSet, p: &PackagedParams) -> Option<(WitnessSource, Option<VertexSet>)> {
    let n = h.vertex_count();
    if int(c.len() as u64) <= &p.alpha * int(n as u64) {
        return Some((WitnessSource::Small, None));
    }
    let idx = EdgeIndex::inside(h, c);
    let mut removed = vec![false; n];
    if idx.count_avoiding(&removed) < p.big_e {
        return Some((WitnessSource::WholeSet, Some(c.clone())));
    }
    // |W| ≥ (1-β)|C|  <=>  at most ⌊β|C|⌋ vertices removed
    let d = crate::rational::floor_to_uint(&(&p.beta * int(c.len() as u64))).to_usize().unwrap_or(usize::MAX).min(c.len());
    for _ in 0..d {
        let mut deg = vec![BigUint::zero(); n];
        for (e, m) in &idx.edges {
            if !e.iter().any(|&u| removed[u as usize]) {
                for &u in e {
                    deg[u as usize] += m;
                }
            }
        }
        let best = c.iter().filter(|&u| !removed[u as usize]).max_by(|&a, &b| deg[a as usize].cmp(&deg[b as usize]).then(b.cmp(&a)));
        match best {
            Some(u) if !deg[u as usize].is_zero() => removed[u as usize] = true,
            _ => break,
        }
        if idx.count_avoiding(&removed) < p.big_e {
            let w = c.iter().filter(|&u| !removed[u as usize]).collect();
            return Some((WitnessSource::Greedy, Some(w)));
        }
    }
    if d == 0 || binom(c.len() as u64, d as u64) > BigUint::from(p.witness_limit()) {
        return None;
    }
    let mut found = None;
    for_each_subset(c.as_slice(), d, |del| {
        if found.is_some() {
            return;
        }
        let mut rem = vec![false; n];
        for &u in del {
            rem[u as usize] = true;
        }
        if idx.count_avoiding(&rem) < p.big_e {
            found = Some(c.iter().filter(|&u| !rem[u as usize]).collect());
        }
    });
    found.map(|w| (WitnessSource::Exhaustive, Some(w)))
}

impl PackagedParams {
    fn witness_limit(&self) -> u64 {
        self.limits.witness_search_limit
    }
}

enum Expansion {
    Good(WitnessSource, Option<VertexSet>),
    Children(Vec<VertexSet>),
}

fn expand(h: &Multihypergraph, c: &VertexSet, p: &PackagedParams) -> Result<Expansion> {
    if let Some((src, w)) = classify(h, c, p) {
        return Ok(Expansion::Good(src, w));
    }
    let (hc, map) = h.induced_compact(c)?;
    let sub = match supersaturate_or_witness(&hc, &p.beta, &p.big_e)? {
        Supersaturation::Dense(sub) => sub,
        Supersaturation::Sparse { w, .. } => {
            let w = w.iter().map(|u| map[u as usize]).collect();
            return Ok(Expansion::Good(WitnessSource::Supersaturation, Some(w)));
        }
    };
    let k = int(2 * h.uniformity() as u64) / &p.beta;
    let en = enumerate_containers_in(&sub, &hc, &p.q, &k, p.forced, p.limits.enumeration_limit)?;
    if en.partial {
        return Err(Error::LimitExceeded(format!("node with {} vertices has more than {} fingerprints", c.len(), p.limits.enumeration_limit)));
    }
    let children = en.containers().into_iter().map(|d| d.iter().map(|u| map[u as usize]).collect()).collect();
    Ok(Expansion::Children(children))
}

struct Slot {
    c: VertexSet,
    good: bool,
    witness: Option<(WitnessSource, Option<VertexSet>)>,
    stalled: bool,
    child_bound: Option<bool>,
    children: Vec<usize>,
}

/// Builds the container tree breadth-first from the root `V(H)`; children are sorted
/// lexicographically and duplicates merged.
pub fn packaged_containers(h: &Multihypergraph, params: &PackagedParams) -> Result<ContainerTree> {
    validate(h, params)?;
    let hypothesis = check_hypothesis_packaged(h, &params.alpha, &params.beta, &params.q, &params.big_e)?;
    if !params.forced && !hypothesis.holds {
        return Err(Error::HypothesisFailed(format!("packaged hypothesis: {}", hypothesis.failures().join("; "))));
    }
    let n = h.vertex_count();
    // ln of (e/q)^{q·v}
    let log_child_bound = to_f64(&params.q) * n as f64 * (1.0 - to_f64(&params.q).ln());
    let mut slots = vec![Slot { c: VertexSet::full(n), good: false, witness: None, stalled: false, child_bound: None, children: Vec::new() }];
    let mut level = vec![0usize];
    while !level.is_empty() {
        let work: Vec<(usize, VertexSet)> = level.iter().filter(|&&i| !slots[i].stalled).map(|&i| (i, slots[i].c.clone())).collect();
        #[cfg(feature = "parallel")]
        let results: Vec<Result<Expansion>> = work.par_iter().map(|(_, c)| expand(h, c, params)).collect();
        #[cfg(not(feature = "parallel"))]
        let results: Vec<Result<Expansion>> = work.iter().map(|(_, c)| expand(h, c, params)).collect();
        let mut next = Vec::new();
        for ((i, c), res) in work.into_iter().zip(results) {
            match res? {
                Expansion::Good(src, w) => {
                    slots[i].good = true;
                    slots[i].witness = Some((src, w));
                }
                Expansion::Children(children) => {
                    if hypothesis.holds {
                        slots[i].child_bound = Some((children.len() as f64).ln() <= log_child_bound);
                    }
                    for ch in children {
                        if slots.len() >= params.limits.max_nodes {
                            return Err(Error::LimitExceeded(format!("container tree exceeds {} nodes", params.limits.max_nodes)));
                        }
                        let stalled = ch == c;
                        slots.push(Slot { c: ch, good: false, witness: None, stalled, child_bound: None, children: Vec::new() });
                        let id = slots.len() - 1;
                        slots[i].children.push(id);
                        next.push(id);
                    }
                }
            }
        }
        level = next;
    }
    let tree = assemble(&slots, 0);
    let mut stats = TreeStats { nodes: 0, leaves: 0, height: 0, stalled_leaves: 0, max_children: 0 };
    tree.visit(0, &mut |node, depth| {
        stats.nodes += 1;
        stats.height = stats.height.max(depth);
        stats.max_children = stats.max_children.max(node.children.len());
        if node.is_leaf() {
            stats.leaves += 1;
            if node.stalled {
                stats.stalled_leaves += 1;
            }
        }
    });
    Ok(ContainerTree { params: params.clone(), hypothesis, tree, stats })
}

fn assemble(slots: &[Slot], i: usize) -> ContainerNode {
    let s = &slots[i];
    let (witness_source, witness_w) = match &s.witness {
        Some((src, w)) => (Some(*src), w.clone()),
        None => (None, None),
    };
    ContainerNode {
        c: s.c.clone(),
        good: s.good,
        witness_w,
        witness_source,
        stalled: s.stalled,
        child_bound: s.child_bound,
        children: s.children.iter().map(|&j| assemble(slots, j)).collect(),
    }
}
