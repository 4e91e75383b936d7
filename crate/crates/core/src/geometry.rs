//! Convex selection: a good direction among weighted vectors, and the induced choice of a query vertex.

use num_bigint::BigUint;
use num_traits::{Signed, Zero};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::hypergraph::{Multihypergraph, Vertex};
use crate::measures::{alpha_norm_sq, hat_delta, hat_delta_alpha, AlphaWeights};
use crate::rational::{int, le_plus_sqrt, uint, Rational};

/// Source of `e(G*)`, `‖σ_α(G*)‖²` and `‖σ_α(G* ∪ L)‖²` for an `r`-uniform `G*`.
pub trait NormOracle: Sync {
    fn edge_total(&self) -> BigUint;
    fn alpha_norm_sq(&self, alpha: &AlphaWeights) -> Rational;
    fn alpha_norm_sq_with(&self, link: &Multihypergraph, alpha: &AlphaWeights) -> Rational;
}

impl NormOracle for Multihypergraph {
    fn edge_total(&self) -> BigUint {
        self.edge_count().clone()
    }

    fn alpha_norm_sq(&self, alpha: &AlphaWeights) -> Rational {
        alpha_norm_sq(self, alpha).expect("nonempty accumulator")
    }

    fn alpha_norm_sq_with(&self, link: &Multihypergraph, alpha: &AlphaWeights) -> Rational {
        let u = Multihypergraph::union_scale(self, link, 1, 1).expect("matching shapes");
        alpha_norm_sq(&u, alpha).expect("nonempty union")
    }
}

#[derive(Clone, Debug)]
pub struct WeightedVectors {
    pub vectors: Vec<Vec<Rational>>,
    pub lambda: Vec<Rational>,
    pub mu: Vec<Rational>,
    pub x: Rational,
    pub xs: Vec<Rational>,
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn sq(a: &[Rational]) -> Rational {
    dot(a, a)
}

impl WeightedVectors {
    pub fn validate(&self) -> Result<()> {
        let k = self.vectors.len();
        let d = self.mu.len();
        if k == 0 || self.lambda.len() != k || self.xs.len() != k {
            return Err(invalid("vectors, lambda and xs must have the same positive length"));
        }
        if self.vectors.iter().any(|v| v.len() != d) {
            return Err(invalid("all vectors need the dimension of mu"));
        }
        let nonneg = |v: &[Rational]| v.iter().all(|x| !x.is_negative());
        if !nonneg(&self.mu) || !nonneg(&self.lambda) || self.vectors.iter().any(|v| !nonneg(v)) {
            return Err(invalid("coordinates must be nonnegative"));
        }
        if self.lambda.iter().sum::<Rational>() != int(1) {
            return Err(invalid("lambda must sum to one"));
        }
        if !self.x.is_positive() || self.xs.iter().any(|xi| !xi.is_positive() || *xi > self.x) {
            return Err(invalid("need 0 < x_i <= x"));
        }
        Ok(())
    }

    pub fn nu(&self) -> Vec<Rational> {
        let mut nu = vec![Rational::zero(); self.mu.len()];
        for (l, v) in self.lambda.iter().zip(&self.vectors) {
            for (acc, c) in nu.iter_mut().zip(v) {
                *acc += l * c;
            }
        }
        nu
    }

    /// `μ_i = (1 - x_iλ_i)μ + x_iλ_iν_i`.
    pub fn mu_i(&self, i: usize) -> Vec<Rational> {
        let w = &self.xs[i] * &self.lambda[i];
        let keep = int(1) - &w;
        self.mu.iter().zip(&self.vectors[i]).map(|(m, v)| &keep * m + &w * v).collect()
    }

    fn weighted_tail(&self) -> Rational {
        self.lambda.iter().zip(&self.vectors).map(|(l, v)| l * l * sq(v)).sum()
    }

    /// Whether index `i` satisfies the direction inequality, decided exactly.
    pub fn inequality_holds(&self, i: usize) -> bool {
        let mu2 = sq(&self.mu);
        let nu2 = sq(&self.nu());
        let lam2 = sq(&self.lambda);
        let lx = &self.lambda[i] * &self.xs[i];
        let lhs = sq(&self.mu_i(i));
        // RHS = ‖μ‖² + λx((x‖λ‖² − 2)‖μ‖² + xΣλ²‖ν‖²) + 2λx·√(‖ν‖²‖μ‖²)
        let base = &mu2 + &lx * ((&self.x * &lam2 - int(2)) * &mu2 + &self.x * self.weighted_tail());
        le_plus_sqrt(&lhs, &base, &(int(2) * &lx), &(nu2 * &mu2))
    }

    /// `Σ_i (‖μ_i‖² − ‖μ‖²)/x_i ≤ 2(‖ν‖‖μ‖ − ‖μ‖²) + x(‖λ‖²‖μ‖² + Σ λ_i²‖ν_i‖²)`.
    pub fn averaging_bound_holds(&self) -> bool {
        let mu2 = sq(&self.mu);
        let lhs: Rational = (0..self.vectors.len()).map(|i| (sq(&self.mu_i(i)) - &mu2) / &self.xs[i]).sum();
        let base = int(-2) * &mu2 + &self.x * (sq(&self.lambda) * &mu2 + self.weighted_tail());
        le_plus_sqrt(&lhs, &base, &int(2), &(sq(&self.nu()) * &mu2))
    }

    /// `(‖μ_i‖² − ‖μ‖²)/(λ_i x_i)` for `λ_i > 0`.
    pub fn ratio(&self, i: usize) -> Option<Rational> {
        if !self.lambda[i].is_positive() {
            return None;
        }
        Some((sq(&self.mu_i(i)) - sq(&self.mu)) / (&self.lambda[i] * &self.xs[i]))
    }
}

/// The index with `λ_i > 0` minimising `(‖μ_i‖² − ‖μ‖²)/(λ_i x_i)`, smallest index on ties.
pub fn select_direction(w: &WeightedVectors) -> Result<usize> {
    w.validate()?;
    let mut best: Option<(Rational, usize)> = None;
    for i in 0..w.vectors.len() {
        if let Some(r) = w.ratio(i) {
            if best.as_ref().is_none_or(|(b, _)| r < *b) {
                best = Some((r, i));
            }
        }
    }
    best.map(|(_, i)| i).ok_or_else(|| invalid("every lambda_i is zero"))
}

/// Objective `e(G*ᵛ) · (‖σ_α(G*ᵛ)‖² − offset)` with `G*ᵛ = G* ∪ A_v`.
pub fn vertex_objective<O: NormOracle + ?Sized>(
    a: &Multihypergraph,
    gstar: &O,
    alpha: &AlphaWeights,
    offset: &Rational,
    v: Vertex,
) -> Result<Rational> {
    let link = a.link(v)?;
    let e = uint(&(gstar.edge_total() + link.edge_count()));
    Ok(e * (gstar.alpha_norm_sq_with(&link, alpha) - offset))
}

fn positive_degree_vertices(a: &Multihypergraph) -> Vec<Vertex> {
    a.vertex_degrees().iter().enumerate().filter(|(_, d)| !d.is_zero()).map(|(v, _)| v as Vertex).collect()
}

/// Minimiser of [`vertex_objective`] over vertices of positive degree in `A`, smallest index on ties.
pub fn select_vertex<O: NormOracle + ?Sized>(
    a: &Multihypergraph,
    gstar: &O,
    alpha: &AlphaWeights,
    offset: &Rational,
) -> Result<(Vertex, Rational)> {
    if a.is_empty() {
        return Err(Error::EmptyHypergraph);
    }
    if a.uniformity() != alpha.r() + 1 {
        return Err(Error::UniformityMismatch { expected: alpha.r() + 1, found: a.uniformity() });
    }
    let candidates = positive_degree_vertices(a);
    let eval = |&v: &Vertex| vertex_objective(a, gstar, alpha, offset, v).map(|f| (f, v));
    #[cfg(feature = "parallel")]
    let scored: Vec<(Rational, Vertex)> = candidates.par_iter().map(eval).collect::<Result<_>>()?;
    #[cfg(not(feature = "parallel"))]
    let scored: Vec<(Rational, Vertex)> = candidates.iter().map(eval).collect::<Result<_>>()?;
    let (f, v) = scored.into_iter().min().expect("nonempty hypergraph has a vertex of positive degree");
    Ok((v, f))
}

/// Whether vertex `v` satisfies the norm-change bound for adding `A_v` to `G*`.
pub fn vertex_bound_holds<O: NormOracle + ?Sized>(
    a: &Multihypergraph,
    gstar: &O,
    alpha: &AlphaWeights,
    v: Vertex,
) -> Result<bool> {
    let link = a.link(v)?;
    let deg = uint(link.edge_count());
    let e_star = uint(&gstar.edge_total());
    let e_v = &e_star + &deg;
    let n = gstar.alpha_norm_sq(alpha);
    let lhs = gstar.alpha_norm_sq_with(&link, alpha);
    let a_norm = alpha_norm_sq(a, alpha)?;
    let d1 = hat_delta(a, 1)?;
    let da = hat_delta_alpha(a, alpha)?;
    let step = &deg / &e_v;
    let base = &n + &step * ((d1 / &e_star - int(2)) * &n + da / &e_star);
    Ok(le_plus_sqrt(&lhs, &base, &(int(2) * step), &(a_norm * n)))
}

/// All positive-degree vertices of `A` satisfying [`vertex_bound_holds`].
pub fn vertex_bound_witnesses<O: NormOracle + ?Sized>(
    a: &Multihypergraph,
    gstar: &O,
    alpha: &AlphaWeights,
) -> Result<Vec<Vertex>> {
    let mut out = Vec::new();
    for v in positive_degree_vertices(a) {
        if vertex_bound_holds(a, gstar, alpha, v)? {
            out.push(v);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn single_direction() {
        let w = WeightedVectors {
            vectors: vec![vec![int(1), int(2)]],
            lambda: vec![int(1)],
            mu: vec![int(1), int(2)],
            x: int(1),
            xs: vec![ratio(1, 2)],
        };
        assert_eq!(select_direction(&w).unwrap(), 0);
        assert!(w.inequality_holds(0));
        assert!(w.averaging_bound_holds());
    }

    #[test]
    fn zero_weight_index_skipped() {
        let w = WeightedVectors {
            vectors: vec![vec![int(0)], vec![int(5)]],
            lambda: vec![int(0), int(1)],
            mu: vec![int(1)],
            x: int(2),
            xs: vec![int(1), int(1)],
        };
        assert_eq!(select_direction(&w).unwrap(), 1);
        let bad = WeightedVectors { lambda: vec![ratio(1, 2), ratio(1, 3)], ..w };
        assert!(select_direction(&bad).is_err());
    }

    #[test]
    fn tie_goes_to_smallest_index() {
        let a = Multihypergraph::from_edges(2, 4, [[1u32, 2]]).unwrap();
        let g = Multihypergraph::from_edges(1, 4, [[0u32], [1], [2], [3]]).unwrap();
        let (v, _) = select_vertex(&a, &g, &AlphaWeights::ones(1), &int(0)).unwrap();
        assert_eq!(v, 1);
    }
}
