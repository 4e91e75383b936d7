//! Hypergraph constructions: cliques in `K_n`, collinear grid points, coloured
//! clique copies, and seeded random instances.
//!
//! Indexing conventions (stable across runs):
//! * pair `{i, j}` of `[n]` with `i < j` (0-based) has index
//!   `i·n − i(i+1)/2 + (j − i − 1)`, i.e. pairs are numbered lexicographically;
//! * grid point `(x, y) ∈ [n]²` (1-based) has index `(x − 1)·n + (y − 1)`;
//! * Folkman vertex `(pair, i)` with colour `i ∈ 1..=k` has index `pair·k + (i − 1)`;
//! * induced-Ramsey vertex `(pair, c)` with colour `c ∈ 0..=k` has index `pair·(k + 1) + c`.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Error, Result};
use crate::hypergraph::{for_each_subset, Multihypergraph, Vertex, VertexSet};
use crate::rational::binom;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn pair_index(i: u32, j: u32, n: u32) -> u32 {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

pub fn pair_from_index(mut idx: u32, n: u32) -> (u32, u32) {
    let mut i = 0;
    while idx >= n - i - 1 {
        idx -= n - i - 1;
        i += 1;
    }
    (i, i + 1 + idx)
}

fn clique_pairs(vertices: &[u32], n: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(vertices.len() * (vertices.len().saturating_sub(1)) / 2);
    for a in 0..vertices.len() {
        for b in a + 1..vertices.len() {
            out.push(pair_index(vertices[a], vertices[b], n));
        }
    }
    out.sort_unstable();
    out
}

/// Vertex set `E(K_n)`; one edge per copy of `K_{r+1}`, namely its `binom(r+1, 2)` pairs.
pub fn clique_hypergraph(n: u32, r: u32) -> Result<Multihypergraph> {
    if r < 2 {
        return Err(invalid("clique hypergraph needs r >= 2"));
    }
    if n < r + 1 {
        return Err(invalid(format!("need n >= r + 1, got n = {n}, r = {r}")));
    }
    let s = ((r + 1) * r / 2) as usize;
    let mut h = Multihypergraph::new(s, (n * (n - 1) / 2) as usize)?;
    let all: Vec<u32> = (0..n).collect();
    for_each_subset(&all, r as usize + 1, |c| h.push_unchecked(clique_pairs(c, n), BigUint::from(1u32)));
    Ok(h)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridLineFamily {
    pub m: u32,
    pub big_m: u32,
    pub n: u32,
    pub h_max: u32,
    /// `lines[h - 1]` holds `L_h`; each line is its sorted list of point indices.
    pub lines: Vec<Vec<Vec<Vertex>>>,
}

impl GridLineFamily {
    pub fn point_index(&self, x: u32, y: u32) -> Vertex {
        (x - 1) * self.n + (y - 1)
    }

    pub fn point(&self, v: Vertex) -> (u32, u32) {
        (v / self.n + 1, v % self.n + 1)
    }

    pub fn all_lines(&self) -> impl Iterator<Item = &Vec<Vertex>> + '_ {
        self.lines.iter().flatten()
    }

    pub fn line_count(&self) -> usize {
        self.lines.iter().map(Vec::len).sum()
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// The grid `[n]²` with `n = mM` and the lines of slope `M/h`, `h ∈ 1..=h_max`;
/// edges are the `s`-subsets of each line's `m` points.
pub fn grid_lines_hypergraph(m: u32, big_m: u32, s: u32, h_max_override: Option<u32>) -> Result<(GridLineFamily, Multihypergraph)> {
    if !is_prime(big_m as u64) {
        return Err(invalid(format!("M = {big_m} is not prime")));
    }
    if s < 2 || s > m {
        return Err(invalid(format!("need 2 <= s <= m, got s = {s}, m = {m}")));
    }
    let n = m.checked_mul(big_m).ok_or_else(|| invalid("grid too large"))?;
    n.checked_mul(n).ok_or_else(|| invalid("grid too large"))?;
    let h_max = h_max_override.unwrap_or(n / (10 * m));
    if h_max == 0 {
        return Err(invalid("h_max is zero; pass an explicit h_max"));
    }
    if h_max > big_m - 1 {
        return Err(invalid(format!("h_max = {h_max} exceeds M - 1 = {}", big_m - 1)));
    }
    let mut lines = Vec::with_capacity(h_max as usize);
    for h in 1..=h_max {
        let mut lh = Vec::new();
        for x0 in 1..=n {
            if x0 + (m - 1) * h > n {
                break;
            }
            for y0 in 1..=big_m {
                let mut pts: Vec<Vertex> = (0..m).map(|t| (x0 + t * h - 1) * n + (y0 + t * big_m - 1)).collect();
                pts.sort_unstable();
                lh.push(pts);
            }
        }
        lines.push(lh);
    }
    let fam = GridLineFamily { m, big_m, n, h_max, lines };
    let mut hg = Multihypergraph::new(s as usize, (n * n) as usize)?;
    for line in fam.all_lines() {
        for_each_subset(line, s as usize, |e| hg.push_unchecked(e.to_vec(), BigUint::from(1u32)));
    }
    Ok((fam, hg))
}

fn for_each_injection(n: u32, big_n: u32, mut f: impl FnMut(&[u32])) {
    fn rec(n: usize, big_n: u32, cur: &mut Vec<u32>, used: &mut Vec<bool>, f: &mut dyn FnMut(&[u32])) {
        if cur.len() == n {
            f(cur);
            return;
        }
        for v in 0..big_n {
            if !used[v as usize] {
                used[v as usize] = true;
                cur.push(v);
                rec(n, big_n, cur, used, f);
                cur.pop();
                used[v as usize] = false;
            }
        }
    }
    rec(n as usize, big_n, &mut Vec::new(), &mut vec![false; big_n as usize], &mut f);
}

/// Vertex set `E(K_N) × [k]`; edges `φ(E(K_n)) × {i}`.
pub fn folkman_hypergraph(big_n: u32, n: u32, k: u32) -> Result<Multihypergraph> {
    if n < 2 || big_n < n || k < 1 {
        return Err(invalid("need N >= n >= 2 and k >= 1"));
    }
    let pairs = big_n * (big_n - 1) / 2;
    let mut h = Multihypergraph::new((n * (n - 1) / 2) as usize, (pairs * k) as usize)?;
    let all: Vec<u32> = (0..big_n).collect();
    for_each_subset(&all, n as usize, |c| {
        let ps = clique_pairs(c, big_n);
        for i in 0..k {
            let mut e: Vec<Vertex> = ps.iter().map(|&p| p * k + i).collect();
            e.sort_unstable();
            h.push_unchecked(e, BigUint::from(1u32));
        }
    });
    Ok(h)
}

/// Vertex set `E(K_N) × {0..k}`; edges `(φ(E(G)) × {i}) ∪ (φ(E(K_n) ∖ E(G)) × {0})`
/// over injections `φ` and colours `i ∈ 1..=k`. Coinciding edge sets are merged into
/// one unless `keep_multiplicity` is set.
pub fn induced_ramsey_hypergraph(big_n: u32, graph: &Multihypergraph, k: u32, keep_multiplicity: bool) -> Result<Multihypergraph> {
    if graph.uniformity() != 2 {
        return Err(Error::UniformityMismatch { expected: 2, found: graph.uniformity() });
    }
    let n = graph.vertex_count() as u32;
    if n < 2 || big_n < n || k < 1 {
        return Err(invalid("need N >= v(G) >= 2 and k >= 1"));
    }
    let in_graph: Vec<(u32, u32, bool)> = {
        let mut v = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                v.push((a, b, !graph.multiplicity(&[a, b]).bits().eq(&0)));
            }
        }
        v
    };
    let pairs = big_n * (big_n - 1) / 2;
    let mut h = Multihypergraph::new((n * (n - 1) / 2) as usize, (pairs * (k + 1)) as usize)?;
    let mut seen = BTreeSet::new();
    for_each_injection(n, big_n, |phi| {
        for i in 1..=k {
            let mut e: Vec<Vertex> = in_graph
                .iter()
                .map(|&(a, b, present)| pair_index(phi[a as usize], phi[b as usize], big_n) * (k + 1) + if present { i } else { 0 })
                .collect();
            e.sort_unstable();
            if keep_multiplicity || seen.insert(e.clone()) {
                h.push_unchecked(e, BigUint::from(1u32));
            }
        }
    });
    Ok(h)
}

/// `edge_count` distinct uniformly random `s`-sets of `[v]`, deterministic in `seed`.
pub fn random_hypergraph(v: u32, s: u32, edge_count: usize, seed: u64) -> Result<Multihypergraph> {
    if s == 0 || s > v {
        return Err(invalid("need 1 <= s <= v"));
    }
    let total = binom(v as u64, s as u64);
    if BigUint::from(edge_count) > total {
        return Err(invalid(format!("only {total} distinct {s}-sets on {v} vertices")));
    }
    let mut h = Multihypergraph::new(s as usize, v as usize)?;
    let mut rng = rng(seed);
    match total.to_usize() {
        Some(t) if t <= 1 << 20 => {
            let mut all = Vec::with_capacity(t);
            let verts: Vec<Vertex> = (0..v).collect();
            for_each_subset(&verts, s as usize, |e| all.push(e.to_vec()));
            let mut picked = index::sample(&mut rng, t, edge_count).into_vec();
            picked.sort_unstable();
            for i in picked {
                h.push_unchecked(std::mem::take(&mut all[i]), BigUint::from(1u32));
            }
        }
        _ => {
            let mut chosen = BTreeSet::new();
            while chosen.len() < edge_count {
                let mut e: Vec<Vertex> = index::sample(&mut rng, v as usize, s as usize).into_iter().map(|x| x as Vertex).collect();
                e.sort_unstable();
                chosen.insert(e);
            }
            for e in chosen {
                h.push_unchecked(e, BigUint::from(1u32));
            }
        }
    }
    Ok(h)
}

/// A uniformly random simple `d`-regular graph by the configuration model with restarts.
pub fn random_regular_graph(n: u32, d: u32, seed: u64) -> Result<Multihypergraph> {
    if d == 0 || d >= n || (n as u64 * d as u64) % 2 == 1 {
        return Err(invalid("need 0 < d < n and n·d even"));
    }
    let mut rng = rng(seed);
    let mut points: Vec<u32> = (0..n).flat_map(|v| std::iter::repeat_n(v, d as usize)).collect();
    for _ in 0..10_000 {
        points.shuffle(&mut rng);
        let mut edges: Vec<(u32, u32)> = points
            .chunks(2)
            .map(|c| if c[0] < c[1] { (c[0], c[1]) } else { (c[1], c[0]) })
            .collect();
        if edges.iter().any(|(a, b)| a == b) {
            continue;
        }
        edges.sort_unstable();
        if edges.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        let mut h = Multihypergraph::new(2, n as usize)?;
        for (a, b) in edges {
            h.push_unchecked(vec![a, b], BigUint::from(1u32));
        }
        return Ok(h);
    }
    Err(Error::LimitExceeded("configuration model kept producing loops or repeated edges".into()))
}

/// Greedy maximal independent set along a random vertex order.
pub fn random_maximal_independent_set(h: &Multihypergraph, seed: u64) -> VertexSet {
    let mut rng = rng(seed);
    let n = h.vertex_count();
    let mut order: Vec<Vertex> = (0..n as Vertex).collect();
    order.shuffle(&mut rng);
    greedy_independent_extension(h, &VertexSet::empty(), &order)
}

/// Extends the independent set `start` greedily along `order`.
pub fn greedy_independent_extension(h: &Multihypergraph, start: &VertexSet, order: &[Vertex]) -> VertexSet {
    let n = h.vertex_count();
    let edges: Vec<&[Vertex]> = h.edges().map(|(e, _)| e).collect();
    let mut incident = vec![Vec::new(); n];
    for (i, e) in edges.iter().enumerate() {
        for &v in e.iter() {
            incident[v as usize].push(i);
        }
    }
    let mut inside = vec![false; n];
    for v in start.iter() {
        inside[v as usize] = true;
    }
    for &v in order {
        if inside[v as usize] {
            continue;
        }
        let blocked = incident[v as usize].iter().any(|&i| edges[i].iter().all(|&u| u == v || inside[u as usize]));
        if !blocked {
            inside[v as usize] = true;
        }
    }
    (0..n as Vertex).filter(|&v| inside[v as usize]).collect()
}

/// A random subset where each vertex is kept with probability `num/den`.
pub fn random_subset(n: usize, num: u32, den: u32, seed: u64) -> VertexSet {
    let mut rng = rng(seed);
    (0..n as Vertex).filter(|_| rng.gen_range(0..den) < num).collect()
}
