//! The three edge-deletion subroutines: high-degree pruning, low-degree peeling
//! and capped greedy admission.

use std::collections::VecDeque;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{invalid, Error, Result};
use crate::hypergraph::{Multihypergraph, Vertex, VertexSet};
use crate::rational::{ceil_to_uint, int, uint, Rational};

/// Removes every edge meeting a vertex of degree above `R · Δ̂₁(H)`.
pub fn prune_max_degree(h: &Multihypergraph, big_r: &Rational) -> Result<Multihypergraph> {
    if h.is_empty() {
        return Err(Error::EmptyHypergraph);
    }
    let s = h.uniformity();
    if *big_r < int(s as u64) {
        return Err(invalid(format!("R must be at least the uniformity {s}")));
    }
    let deg = h.vertex_degrees();
    let square_sum: BigUint = deg.iter().map(|d| d * d).sum();
    // deg v > R·S₁/(s·e)  <=>  deg v · s · e > R · S₁
    let se = uint(h.edge_count()) * int(s as u64);
    let rhs = big_r * uint(&square_sum);
    let removed: Vec<bool> = deg.iter().map(|d| uint(d) * &se > rhs).collect();
    Ok(h.delete_vertices(&removed))
}

/// Iteratively deletes the edges at vertices whose degree is below `β · e(H)/|V|`,
/// the threshold being fixed by the input.
pub fn prune_min_degree(h: &Multihypergraph, beta: &Rational) -> Result<Multihypergraph> {
    if h.is_empty() {
        return Err(Error::EmptyHypergraph);
    }
    if *beta <= Rational::zero() || *beta > int(1) {
        return Err(invalid("beta must lie in (0, 1]"));
    }
    let theta = beta * uint(h.edge_count()) / int(h.vertex_count() as u64);
    let tau = ceil_to_uint(&theta);
    let edges: Vec<(&[Vertex], &BigUint)> = h.edges().collect();
    let alive = peel(h.vertex_count(), &edges, &tau);
    let mut out = Multihypergraph::new(h.uniformity(), h.vertex_count())?;
    for (i, (e, m)) in edges.iter().enumerate() {
        if alive[i] {
            out.push_unchecked(e.to_vec(), (*m).clone());
        }
    }
    Ok(out)
}

/// Largest set of edges in which every covered vertex has degree at least `tau`.
pub(crate) fn peel(vertex_count: usize, edges: &[(&[Vertex], &BigUint)], tau: &BigUint) -> Vec<bool> {
    let mut deg = vec![BigUint::zero(); vertex_count];
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); vertex_count];
    for (i, (e, m)) in edges.iter().enumerate() {
        for &v in e.iter() {
            deg[v as usize] += *m;
            incident[v as usize].push(i);
        }
    }
    let mut alive = vec![true; edges.len()];
    let mut queued = vec![false; vertex_count];
    let mut queue = VecDeque::new();
    for v in 0..vertex_count {
        if !deg[v].is_zero() && deg[v] < *tau {
            queued[v] = true;
            queue.push_back(v);
        }
    }
    while let Some(v) = queue.pop_front() {
        for &i in &incident[v] {
            if !alive[i] {
                continue;
            }
            alive[i] = false;
            let (e, m) = edges[i];
            for &u in e.iter() {
                let u = u as usize;
                deg[u] -= m;
                if !queued[u] && !deg[u].is_zero() && deg[u] < *tau {
                    queued[u] = true;
                    queue.push_back(u);
                }
            }
        }
    }
    alive
}

/// Greedy subhypergraph with maximum degree at most `⌈sM/(β·v(H))⌉`.
///
/// Edges are admitted in lexicographic order, one unit of multiplicity at a time.
/// Fails with [`Error::PreconditionFailed`] if fewer than `M` edges fit, which
/// certifies that `H` has a set `W` of at least `(1-β)v(H)` vertices with `e(H[W]) < M`.
pub fn delta1_supersaturate(h: &Multihypergraph, beta: &Rational, big_m: &BigUint) -> Result<Multihypergraph> {
    match supersaturate_or_witness(h, beta, big_m)? {
        Supersaturation::Dense(out) => Ok(out),
        Supersaturation::Sparse { kept, cap, w } => Err(Error::PreconditionFailed(format!(
            "only {kept} edges fit under the degree cap {cap}, fewer than M = {big_m}; {} vertices span fewer than M edges",
            w.len()
        ))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Supersaturation {
    Dense(Multihypergraph),
    /// Fewer than `M` edges fit; `w` is the set of unsaturated vertices, which has
    /// `|w| ≥ (1-β)v(H)` and `e(H[w]) < M`.
    Sparse { kept: BigUint, cap: BigUint, w: VertexSet },
}

/// As [`delta1_supersaturate`], returning the sparse set instead of failing.
pub fn supersaturate_or_witness(h: &Multihypergraph, beta: &Rational, big_m: &BigUint) -> Result<Supersaturation> {
    if *beta <= Rational::zero() {
        return Err(invalid("beta must be positive"));
    }
    if big_m.is_zero() {
        return Err(invalid("M must be positive"));
    }
    let s = h.uniformity();
    let v = h.vertex_count();
    let cap = ceil_to_uint(&(int(s as u64) * uint(big_m) / (beta * int(v as u64))));
    let mut deg = vec![BigUint::zero(); v];
    let mut out = Multihypergraph::new(s, v)?;
    for (e, m) in h.edges() {
        let room = e.iter().map(|&u| &cap - (&deg[u as usize]).min(&cap)).min().unwrap_or_default();
        let take = room.min(m.clone());
        if take.is_zero() {
            continue;
        }
        for &u in e {
            deg[u as usize] += &take;
        }
        out.push_unchecked(e.to_vec(), take);
    }
    if out.edge_count() >= big_m {
        return Ok(Supersaturation::Dense(out));
    }
    // every edge avoiding the saturated vertices was admitted in full
    let w = (0..v as Vertex).filter(|&u| deg[u as usize] < cap).collect();
    Ok(Supersaturation::Sparse { kept: out.edge_count().clone(), cap, w })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn star_matching() -> Multihypergraph {
        let mut edges = Vec::new();
        for leaf in 1..=10u32 {
            edges.push([0, leaf]);
        }
        for i in 0..10u32 {
            edges.push([11 + 2 * i, 12 + 2 * i]);
        }
        Multihypergraph::from_edges(2, 31, edges).unwrap()
    }

    #[test]
    fn star_matching_loses_the_center() {
        let h = star_matching();
        let pruned = prune_max_degree(&h, &int(2)).unwrap();
        assert_eq!(pruned.edge_count(), &BigUint::from(10u32));
        assert!(pruned.degree(&[0]).unwrap().is_zero());
        assert!(prune_max_degree(&h, &int(1)).is_err());
    }

    #[test]
    fn regular_is_untouched() {
        let cycle = Multihypergraph::from_edges(2, 5, (0..5u32).map(|i| [i, (i + 1) % 5])).unwrap();
        assert_eq!(prune_max_degree(&cycle, &int(2)).unwrap(), cycle);
        assert_eq!(prune_min_degree(&cycle, &int(1)).unwrap(), cycle);
    }

    #[test]
    fn path_survives_min_degree() {
        let path = Multihypergraph::from_edges(2, 3, [[0u32, 1], [1, 2]]).unwrap();
        assert_eq!(prune_min_degree(&path, &ratio(3, 5)).unwrap(), path);
    }

    #[test]
    fn peeling_cascades() {
        // a triangle with a pendant path; threshold 2 strips the path edge by edge
        let h = Multihypergraph::from_edges(2, 6, [[0u32, 1], [1, 2], [0, 2], [2, 3], [3, 4], [4, 5]]).unwrap();
        let alive_edges: Vec<(&[Vertex], &BigUint)> = h.edges().collect();
        let alive = peel(6, &alive_edges, &BigUint::from(2u32));
        let kept: Vec<&[Vertex]> = alive_edges.iter().zip(&alive).filter(|(_, a)| **a).map(|(e, _)| e.0).collect();
        assert_eq!(kept, vec![&[0u32, 1][..], &[0, 2], &[1, 2]]);
    }

    #[test]
    fn supersaturate_single_edge_fails() {
        let h = Multihypergraph::from_edges(2, 2, [[0u32, 1]]).unwrap();
        assert!(matches!(
            delta1_supersaturate(&h, &ratio(1, 2), &BigUint::from(2u32)),
            Err(Error::PreconditionFailed(_))
        ));
        assert_eq!(delta1_supersaturate(&h, &ratio(1, 2), &BigUint::from(1u32)).unwrap(), h);
        match supersaturate_or_witness(&h, &ratio(1, 2), &BigUint::from(2u32)).unwrap() {
            Supersaturation::Sparse { w, .. } => assert!(w.len() >= 1 && h.restrict(&w).unwrap().edge_count() < &BigUint::from(2u32)),
            other => panic!("expected a sparse set, got {other:?}"),
        }
    }
}
