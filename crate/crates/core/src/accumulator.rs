//! The seeded accumulator `G* = m·K_n^(r) ∪ (explicit part)` with the complete
//! seed kept implicit.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::hypergraph::{for_each_subset, Multihypergraph, Vertex};
use crate::measures::AlphaWeights;
use crate::rational::{binom, Rational};

/// For each `t` in `1..=r`, the map `T ↦ Σ mult` over the given `r`-sets containing `T`.
pub type SubsetIncrements = Vec<HashMap<Vec<Vertex>, BigUint>>;

pub fn subset_increments<'a>(edges: impl IntoIterator<Item = (&'a [Vertex], &'a BigUint)>, r: usize) -> SubsetIncrements {
    let mut out: SubsetIncrements = vec![HashMap::new(); r];
    for (e, m) in edges {
        for t in 1..=r {
            for_each_subset(e, t, |sub| {
                if let Some(c) = out[t - 1].get_mut(sub) {
                    *c += m;
                } else {
                    out[t - 1].insert(sub.to_vec(), m.clone());
                }
            });
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct SeededAccumulator {
    vertex_count: usize,
    r: usize,
    m: BigUint,
    explicit: Multihypergraph,
    explicit_degrees: Vec<HashMap<Vec<Vertex>, BigUint>>,
    seed_degree: Vec<BigUint>,
    square_sums: Vec<BigUint>,
    total: BigUint,
    binom_r: Vec<BigUint>,
}

impl SeededAccumulator {
    pub fn new(vertex_count: usize, r: usize, m: BigUint) -> Result<Self> {
        if r == 0 || r > vertex_count {
            return Err(crate::error::invalid(format!("accumulator uniformity {r} invalid for {vertex_count} vertices")));
        }
        if m.is_zero() {
            return Err(crate::error::invalid("seed multiplicity must be positive"));
        }
        let n = vertex_count as u64;
        let seed_degree: Vec<BigUint> = (1..=r as u64).map(|t| &m * binom(n - t, r as u64 - t)).collect();
        let square_sums = (1..=r as u64).map(|t| binom(n, t) * &seed_degree[t as usize - 1] * &seed_degree[t as usize - 1]).collect();
        Ok(SeededAccumulator {
            vertex_count,
            r,
            total: &m * binom(n, r as u64),
            m,
            explicit: Multihypergraph::new(r, vertex_count)?,
            explicit_degrees: vec![HashMap::new(); r],
            seed_degree,
            square_sums,
            binom_r: (0..=r as u64).map(|t| binom(r as u64, t)).collect(),
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn uniformity(&self) -> usize {
        self.r
    }

    pub fn seed_multiplicity(&self) -> &BigUint {
        &self.m
    }

    pub fn edge_count(&self) -> &BigUint {
        &self.total
    }

    pub fn seed_edge_count(&self) -> BigUint {
        &self.m * binom(self.vertex_count as u64, self.r as u64)
    }

    /// The accumulated links, without the seed.
    pub fn explicit(&self) -> &Multihypergraph {
        &self.explicit
    }

    pub fn into_explicit(self) -> Multihypergraph {
        self.explicit
    }

    /// Degree of a `t`-set with `1 <= t <= r` (sorted).
    pub fn degree(&self, set: &[Vertex]) -> BigUint {
        let t = set.len();
        debug_assert!(t >= 1 && t <= self.r);
        let base = &self.seed_degree[t - 1];
        match self.explicit_degrees[t - 1].get(set) {
            Some(d) => base + d,
            None => base.clone(),
        }
    }

    /// `Σ_T deg(T)²` over all `t`-sets.
    pub fn square_sum(&self, t: usize) -> &BigUint {
        &self.square_sums[t - 1]
    }

    pub fn binom_r(&self, t: usize) -> &BigUint {
        &self.binom_r[t]
    }

    pub fn norm_sq_t(&self, t: usize) -> Rational {
        let den = &self.binom_r[t] * &self.total;
        Rational::new(self.square_sums[t - 1].clone().into(), (&den * &den).into())
    }

    pub fn alpha_norm_sq(&self, alpha: &AlphaWeights) -> Rational {
        let mut acc = Rational::zero();
        for t in 1..=alpha.r().min(self.r) {
            if !alpha.get(t).is_zero() {
                acc += alpha.get(t) * self.norm_sq_t(t);
            }
        }
        acc
    }

    /// Increase of each square sum if the increments were added.
    pub fn square_sum_gain(&self, inc: &SubsetIncrements) -> Vec<BigUint> {
        (1..=self.r)
            .map(|t| {
                let mut g = BigUint::zero();
                for (set, c) in &inc[t - 1] {
                    let d = self.degree(set);
                    g += (d * 2u32 + c) * c;
                }
                g
            })
            .collect()
    }

    fn check_link(&self, link: &Multihypergraph) -> Result<()> {
        if link.uniformity() != self.r {
            return Err(Error::UniformityMismatch { expected: self.r, found: link.uniformity() });
        }
        if link.vertex_count() != self.vertex_count {
            return Err(Error::VertexCountMismatch(self.vertex_count, link.vertex_count()));
        }
        Ok(())
    }

    /// `‖σ_α(G* ∪ link)‖²` without modifying the accumulator.
    pub fn alpha_norm_sq_with(&self, link: &Multihypergraph, alpha: &AlphaWeights) -> Result<Rational> {
        self.check_link(link)?;
        let inc = subset_increments(link.edges(), self.r);
        let gain = self.square_sum_gain(&inc);
        let e = &self.total + link.edge_count();
        let mut acc = Rational::zero();
        for t in 1..=alpha.r().min(self.r) {
            if alpha.get(t).is_zero() {
                continue;
            }
            let den = &self.binom_r[t] * &e;
            let num = &self.square_sums[t - 1] + &gain[t - 1];
            acc += alpha.get(t) * Rational::new(num.into(), (&den * &den).into());
        }
        Ok(acc)
    }

    pub fn add_link(&mut self, link: &Multihypergraph) -> Result<()> {
        self.check_link(link)?;
        let edges: Vec<(Vec<Vertex>, BigUint)> = link.edges().map(|(e, m)| (e.to_vec(), m.clone())).collect();
        self.add_edges(edges);
        Ok(())
    }

    /// Adds validated, sorted `r`-sets.
    pub(crate) fn add_edges(&mut self, edges: Vec<(Vec<Vertex>, BigUint)>) {
        let inc = subset_increments(edges.iter().map(|(e, m)| (e.as_slice(), m)), self.r);
        for t in 1..=self.r {
            for (set, c) in &inc[t - 1] {
                let d = self.degree(set);
                self.square_sums[t - 1] += (d * 2u32 + c) * c;
                *self.explicit_degrees[t - 1].entry(set.clone()).or_default() += c;
            }
        }
        for (e, m) in edges {
            self.total += &m;
            self.explicit.push_unchecked(e, m);
        }
    }

    /// The full hypergraph with the seed materialised; only for tiny cases.
    pub fn materialize(&self) -> Multihypergraph {
        let mut h = self.explicit.clone();
        let all: Vec<Vertex> = (0..self.vertex_count as Vertex).collect();
        for_each_subset(&all, self.r, |e| h.push_unchecked(e.to_vec(), self.m.clone()));
        h
    }
}

impl crate::geometry::NormOracle for SeededAccumulator {
    fn edge_total(&self) -> BigUint {
        self.total.clone()
    }

    fn alpha_norm_sq(&self, alpha: &AlphaWeights) -> Rational {
        SeededAccumulator::alpha_norm_sq(self, alpha)
    }

    fn alpha_norm_sq_with(&self, link: &Multihypergraph, alpha: &AlphaWeights) -> Rational {
        SeededAccumulator::alpha_norm_sq_with(self, link, alpha).expect("link shape checked by caller")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{alpha_norm_sq, norm_sq_t};

    #[test]
    fn matches_materialised_union() {
        let mut acc = SeededAccumulator::new(6, 2, BigUint::from(3u32)).unwrap();
        let link = Multihypergraph::from_edges(2, 6, [[0u32, 1], [1, 2], [0, 1]]).unwrap();
        let alpha = AlphaWeights::new(vec![crate::rational::ratio(2, 3), crate::rational::int(5)]).unwrap();
        let predicted = acc.alpha_norm_sq_with(&link, &alpha).unwrap();
        acc.add_link(&link).unwrap();
        let full = acc.materialize();
        assert_eq!(acc.edge_count(), full.edge_count());
        for t in 1..=2 {
            assert_eq!(acc.norm_sq_t(t), norm_sq_t(&full, t).unwrap());
        }
        assert_eq!(predicted, alpha_norm_sq(&full, &alpha).unwrap());
        assert_eq!(acc.alpha_norm_sq(&alpha), predicted);
        assert_eq!(acc.degree(&[1]), BigUint::from(3u32 * 5 + 3));
    }

    #[test]
    fn seed_is_uniform() {
        let acc = SeededAccumulator::new(7, 3, BigUint::from(2u32)).unwrap();
        assert_eq!(acc.norm_sq_t(1), crate::rational::ratio(1, 7));
        assert_eq!(acc.norm_sq_t(2), crate::rational::ratio(1, 21));
        assert_eq!(acc.edge_count(), &BigUint::from(70u32));
    }
}
