//! Brute-force ground truth for small instances. Everything here works on `u64`
//! bitmasks and shares no degree or subset logic with the rest of the crate.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::hypergraph::{Multihypergraph, Vertex, VertexSet};
use crate::rational::{int, pow, Rational};

const MAX_VERTICES: usize = 64;

fn mask_of(set: &[Vertex]) -> u64 {
    set.iter().fold(0, |m, &v| m | (1u64 << v))
}

fn set_of(mask: u64) -> VertexSet {
    VertexSet::new((0..64).filter(|&v| mask >> v & 1 == 1).collect())
}

/// Edge masks with every non-minimal one dropped.
fn minimal_edge_masks(h: &Multihypergraph) -> Result<Vec<u64>> {
    if h.vertex_count() > MAX_VERTICES {
        return Err(invalid(format!("oracles handle at most {MAX_VERTICES} vertices")));
    }
    let mut masks: Vec<u64> = h.edges().map(|(e, _)| mask_of(e)).collect();
    masks.sort_by_key(|m| m.count_ones());
    let mut out: Vec<u64> = Vec::new();
    for m in masks {
        if !out.iter().any(|&o| o & m == o) {
            out.push(m);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndependentSets {
    pub sets: Vec<VertexSet>,
    /// The cap was hit and `sets` is incomplete.
    pub partial: bool,
}

struct Enumerator {
    n: usize,
    /// `closing[v]`: edges whose largest vertex is `v`.
    closing: Vec<Vec<u64>>,
    blockers: Vec<Vec<u64>>,
    maximal_only: bool,
    cap: usize,
    out: Vec<u64>,
    partial: bool,
}

impl Enumerator {
    fn can_add(&self, cur: u64, v: usize) -> bool {
        self.blockers[v].iter().all(|&e| (e & !(1u64 << v)) & !cur != 0)
    }

    fn rec(&mut self, v: usize, cur: u64) {
        if self.partial {
            return;
        }
        if v == self.n {
            if self.maximal_only && (0..self.n).any(|u| cur >> u & 1 == 0 && self.can_add(cur, u)) {
                return;
            }
            if self.out.len() == self.cap {
                self.partial = true;
                return;
            }
            self.out.push(cur);
            return;
        }
        let with = cur | 1u64 << v;
        if self.closing[v].iter().all(|&e| e & with != e) {
            self.rec(v + 1, with);
        }
        // leaving out v is only useful for maximal sets if something could still block it
        if !self.maximal_only || !self.blockers[v].is_empty() {
            self.rec(v + 1, cur);
        }
    }
}

/// All independent sets (or only the inclusion-maximal ones), by branching over
/// vertices in index order and checking the minimal edges closed by each inclusion.
pub fn enumerate_independent_sets(h: &Multihypergraph, maximal_only: bool, cap: usize) -> Result<IndependentSets> {
    let edges = minimal_edge_masks(h)?;
    let n = h.vertex_count();
    let mut closing = vec![Vec::new(); n];
    let mut blockers = vec![Vec::new(); n];
    for &e in &edges {
        closing[63 - e.leading_zeros() as usize].push(e);
        for v in 0..n {
            if e >> v & 1 == 1 {
                blockers[v].push(e);
            }
        }
    }
    let mut en = Enumerator { n, closing, blockers, maximal_only, cap, out: Vec::new(), partial: false };
    en.rec(0, 0);
    Ok(IndependentSets { sets: en.out.into_iter().map(set_of).collect(), partial: en.partial })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverReport {
    pub total_maximal: usize,
    pub covered: usize,
    pub uncovered: Vec<VertexSet>,
    pub family_size: usize,
    /// False if enumeration hit its cap; the counts then refer to the enumerated part.
    pub complete: bool,
}

impl CoverReport {
    pub fn full_cover(&self) -> bool {
        self.complete && self.covered == self.total_maximal
    }
}

pub const UNCOVERED_SHOWN: usize = 20;

/// Checks that every maximal independent set of `H` lies in some container.
pub fn verify_cover(containers: &[VertexSet], h: &Multihypergraph, cap: usize) -> Result<CoverReport> {
    let all = enumerate_independent_sets(h, true, cap)?;
    let masks: Vec<u64> = containers
        .iter()
        .map(|c| {
            c.check_range(h.vertex_count())?;
            Ok(mask_of(c.as_slice()))
        })
        .collect::<Result<_>>()?;
    let mut covered = 0;
    let mut uncovered = Vec::new();
    for i in &all.sets {
        let m = mask_of(i.as_slice());
        if masks.iter().any(|&c| m & !c == 0) {
            covered += 1;
        } else if uncovered.len() < UNCOVERED_SHOWN {
            uncovered.push(i.clone());
        }
    }
    Ok(CoverReport { total_maximal: all.sets.len(), covered, uncovered, family_size: containers.len(), complete: !all.partial })
}

/// `(|c⁻¹(k+1)|, number of K_n copies monochromatic in a colour of 1..=k)` for a
/// colouring of `E(K_N)` with colours `1..=k+1`, keyed by pairs `(i, j)`, `i < j`.
pub fn count_mono_cliques(big_n: u32, colouring: &BTreeMap<(u32, u32), u32>, n: u32, k: u32) -> Result<(u64, u64)> {
    if n < 2 || n > big_n || big_n as usize > MAX_VERTICES {
        return Err(invalid("need 2 <= n <= N <= 64"));
    }
    let mut colour = vec![vec![0u32; big_n as usize]; big_n as usize];
    for a in 0..big_n {
        for b in a + 1..big_n {
            let c = *colouring.get(&(a, b)).ok_or_else(|| invalid(format!("pair ({a}, {b}) has no colour")))?;
            if c == 0 || c > k + 1 {
                return Err(invalid(format!("colour {c} outside 1..={}", k + 1)));
            }
            colour[a as usize][b as usize] = c;
            colour[b as usize][a as usize] = c;
        }
    }
    if colouring.len() as u64 != big_n as u64 * (big_n as u64 - 1) / 2 {
        return Err(invalid("colouring has entries outside E(K_N)"));
    }
    let extra = colouring.values().filter(|&&c| c == k + 1).count() as u64;
    let mut mono = 0u64;
    let mut stack = Vec::with_capacity(n as usize);
    fn rec(colour: &[Vec<u32>], n: usize, start: usize, stack: &mut Vec<usize>, c: u32, mono: &mut u64) {
        if stack.len() == n {
            *mono += 1;
            return;
        }
        for v in start..colour.len() {
            if stack.iter().all(|&u| colour[u][v] == c) {
                stack.push(v);
                rec(colour, n, v + 1, stack, c, mono);
                stack.pop();
            }
        }
    }
    for c in 1..=k {
        rec(&colour, n as usize, 0, &mut stack, c, &mut mono);
    }
    Ok((extra, mono))
}

fn binom_small(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `binom(N, R) ≤ |c⁻¹(k+1)| · binom(N-2, R-2) + M · binom(N-n, R-n)` for the given counts.
pub fn supersaturation_ramsey_inequality(big_n: u64, big_r: u64, n: u64, extra: u64, mono: u64) -> Result<bool> {
    if big_r < n || big_r < 2 || big_n < big_r {
        return Err(invalid("need N >= R >= max(n, 2)"));
    }
    Ok(binom_small(big_n, big_r) <= binom_small(big_n - 2, big_r - 2) * extra + binom_small(big_n - n, big_r - n) * mono)
}

/// Either `|c⁻¹(k+1)| ≥ (N/R)²/2` or `M ≥ (N/R)ⁿ/2`.
pub fn supersaturation_ramsey_conclusion(big_n: u64, big_r: u64, n: u32, extra: u64, mono: u64) -> bool {
    let q = int(big_n) / int(big_r);
    let half = Rational::new(1.into(), 2.into());
    int(extra) >= &half * pow(&q, 2) || int(mono) >= &half * pow(&q, n)
}

/// One point set together with its ranges, reduced to bitmasks over qualifying ranges.
fn qualifying(x: &[Vertex], ranges: &[Vec<Vertex>], eps: &Rational) -> Vec<Vec<usize>> {
    let pos: BTreeMap<Vertex, usize> = x.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let threshold = eps * int(x.len() as u64);
    let mut out: Vec<Vec<usize>> = Vec::new();
    for a in ranges {
        let mut inside: Vec<usize> = a.iter().filter_map(|v| pos.get(v).copied()).collect();
        inside.sort_unstable();
        inside.dedup();
        if int(inside.len() as u64) >= threshold && !out.contains(&inside) {
            out.push(inside);
        }
    }
    out
}

/// Smallest `N ⊆ X` meeting every range `A` with `|A ∩ X| ≥ ε|X|`; returns its size and a witness.
pub fn min_eps_net(x: &[Vertex], ranges: &[Vec<Vertex>], eps: &Rational) -> Result<(usize, VertexSet)> {
    let mut xs = x.to_vec();
    xs.sort_unstable();
    xs.dedup();
    let q = qualifying(&xs, ranges, eps);
    if q.is_empty() {
        return Ok((0, VertexSet::empty()));
    }
    if q.iter().any(|a| a.is_empty()) {
        return Err(invalid("a range with no points qualifies; eps must be positive"));
    }
    if xs.len() > 30 && q.len() > 20 {
        return Err(Error::LimitExceeded(format!("|X| = {} and {} qualifying ranges", xs.len(), q.len())));
    }
    // group points by the set of qualifying ranges they hit
    let mut by_signature: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for p in 0..xs.len() {
        let sig: Vec<usize> = (0..q.len()).filter(|&r| q[r].binary_search(&p).is_ok()).collect();
        if !sig.is_empty() {
            by_signature.entry(sig).or_insert(p);
        }
    }
    let classes: Vec<(Vec<usize>, usize)> = by_signature.into_iter().collect();
    let mut hits_of_range: Vec<Vec<usize>> = vec![Vec::new(); q.len()];
    for (c, (sig, _)) in classes.iter().enumerate() {
        for &r in sig {
            hits_of_range[r].push(c);
        }
    }
    let mut best: Vec<usize> = (0..classes.len()).collect();
    let mut chosen = Vec::new();
    let mut hit = vec![0u32; q.len()];
    hitting_rec(&classes, &hits_of_range, &mut hit, &mut chosen, &mut best);
    let net: VertexSet = best.iter().map(|&c| xs[classes[c].1]).collect();
    Ok((best.len(), net))
}

fn hitting_rec(classes: &[(Vec<usize>, usize)], hits_of_range: &[Vec<usize>], hit: &mut [u32], chosen: &mut Vec<usize>, best: &mut Vec<usize>) {
    let unhit: Vec<usize> = (0..hit.len()).filter(|&r| hit[r] == 0).collect();
    if unhit.is_empty() {
        if chosen.len() < best.len() {
            *best = chosen.clone();
        }
        return;
    }
    // pairwise class-disjoint unhit ranges each need their own point
    let mut used = vec![false; classes.len()];
    let mut bound = 0;
    for &r in &unhit {
        if hits_of_range[r].iter().all(|&c| !used[c]) {
            bound += 1;
            for &c in &hits_of_range[r] {
                used[c] = true;
            }
        }
    }
    if chosen.len() + bound >= best.len() {
        return;
    }
    let r = *unhit.iter().min_by_key(|&&r| hits_of_range[r].len()).expect("unhit is nonempty");
    for &c in &hits_of_range[r] {
        chosen.push(c);
        for &rr in &classes[c].0 {
            hit[rr] += 1;
        }
        hitting_rec(classes, hits_of_range, hit, chosen, best);
        for &rr in &classes[c].0 {
            hit[rr] -= 1;
        }
        chosen.pop();
    }
}
