//! Degree measures, their norms, robust degrees and the α-weight vectors.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::hypergraph::{Multihypergraph, Vertex};
use crate::rational::{binom, int, pow, ratio, uint, Rational};

/// The `t`-degree measure: `T ↦ deg T / (binom(s, t) · e(H))`, zero entries omitted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeMeasure {
    pub t: usize,
    pub host_uniformity: usize,
    pub entries: BTreeMap<Vec<Vertex>, Rational>,
}

impl DegreeMeasure {
    pub fn get(&self, set: &[Vertex]) -> Rational {
        self.entries.get(set).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn total(&self) -> Rational {
        self.entries.values().sum()
    }
}

fn check_t(h: &Multihypergraph, t: usize) -> Result<()> {
    if h.is_empty() {
        return Err(Error::EmptyHypergraph);
    }
    if t == 0 || t > h.uniformity() {
        return Err(invalid(format!("t = {t} outside 1..={}", h.uniformity())));
    }
    Ok(())
}

fn normaliser(h: &Multihypergraph, t: usize) -> BigUint {
    binom(h.uniformity() as u64, t as u64) * h.edge_count()
}

pub fn sigma_t(h: &Multihypergraph, t: usize) -> Result<DegreeMeasure> {
    check_t(h, t)?;
    let den = uint(&normaliser(h, t));
    let entries = h.t_degrees(t).into_iter().map(|(k, d)| (k, uint(&d) / &den)).collect();
    Ok(DegreeMeasure { t, host_uniformity: h.uniformity(), entries })
}

pub fn norm_sq(mu: &DegreeMeasure) -> Rational {
    mu.entries.values().map(|x| x * x).sum()
}

/// `‖σ^(t)‖²`, computed from the integer square sum of `t`-degrees.
pub fn norm_sq_t(h: &Multihypergraph, t: usize) -> Result<Rational> {
    check_t(h, t)?;
    let den = normaliser(h, t);
    Ok(Rational::new(h.t_degree_square_sum(t).into(), (&den * &den).into()))
}

/// Robust degree `Δ̂_t(H) = (s/t) · e(H) · ‖σ^(t)‖²`.
pub fn hat_delta(h: &Multihypergraph, t: usize) -> Result<Rational> {
    let n = norm_sq_t(h, t)?;
    Ok(ratio(h.uniformity() as u64, t as u64) * uint(h.edge_count()) * n)
}

/// Nonnegative weights `α₁, …, α_r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaWeights {
    #[serde(with = "crate::rational::vec_as_string")]
    weights: Vec<Rational>,
}

impl AlphaWeights {
    pub fn new(weights: Vec<Rational>) -> Result<Self> {
        if weights.is_empty() {
            return Err(invalid("alpha needs at least one coordinate"));
        }
        if weights.iter().any(|w| w.is_negative()) {
            return Err(invalid("alpha coordinates must be nonnegative"));
        }
        Ok(AlphaWeights { weights })
    }

    pub fn ones(r: usize) -> Self {
        AlphaWeights { weights: vec![int(1); r] }
    }

    pub fn zeros(r: usize) -> Self {
        AlphaWeights { weights: vec![Rational::zero(); r] }
    }

    pub fn r(&self) -> usize {
        self.weights.len()
    }

    /// `α_t` for `t` in `1..=r`.
    pub fn get(&self, t: usize) -> &Rational {
        &self.weights[t - 1]
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.weights
    }

    /// Exact square roots of the coordinates, if they are all rational squares.
    pub fn sqrt_weights(&self) -> Option<Vec<Rational>> {
        self.weights
            .iter()
            .map(|w| {
                let n = w.numer().to_biguint()?;
                let d = w.denom().to_biguint()?;
                let (rn, rd) = (n.sqrt(), d.sqrt());
                (&rn * &rn == n && &rd * &rd == d).then(|| Rational::new(rn.into(), rd.into()))
            })
            .collect()
    }

    pub fn le_coordinatewise(&self, other: &AlphaWeights) -> bool {
        self.r() == other.r() && self.weights.iter().zip(&other.weights).all(|(a, b)| a <= b)
    }
}

/// `‖σ_α(H)‖² = Σ α_t ‖σ^(t)‖²`.
pub fn alpha_norm_sq(h: &Multihypergraph, alpha: &AlphaWeights) -> Result<Rational> {
    if h.is_empty() {
        return Err(Error::EmptyHypergraph);
    }
    if alpha.r() > h.uniformity() {
        return Err(invalid(format!("alpha has {} coordinates but H is {}-uniform", alpha.r(), h.uniformity())));
    }
    let mut acc = Rational::zero();
    for t in 1..=alpha.r() {
        if !alpha.get(t).is_zero() {
            acc += alpha.get(t) * norm_sq_t(h, t)?;
        }
    }
    Ok(acc)
}

/// `Δ̂_α(A) = Σ_t α_t Δ̂_{t+1}(A)` for an `(r+1)`-uniform `A`.
pub fn hat_delta_alpha(a: &Multihypergraph, alpha: &AlphaWeights) -> Result<Rational> {
    if a.uniformity() != alpha.r() + 1 {
        return Err(Error::UniformityMismatch { expected: alpha.r() + 1, found: a.uniformity() });
    }
    if a.is_empty() {
        return Err(Error::EmptyHypergraph);
    }
    let mut acc = Rational::zero();
    for t in 1..=alpha.r() {
        if !alpha.get(t).is_zero() {
            acc += alpha.get(t) * hat_delta(a, t + 1)?;
        }
    }
    Ok(acc)
}

/// The concatenated vector `(√α₁ σ^(1), …, √α_r σ^(r))`, keyed by `(t, T)`.
/// Needs every `α_t` to be a rational square.
pub fn sigma_alpha_vector(h: &Multihypergraph, alpha: &AlphaWeights) -> Result<BTreeMap<(usize, Vec<Vertex>), Rational>> {
    let roots = alpha.sqrt_weights().ok_or_else(|| invalid("alpha coordinates are not rational squares"))?;
    if alpha.r() > h.uniformity() {
        return Err(invalid("alpha longer than the uniformity"));
    }
    let mut out = BTreeMap::new();
    for t in 1..=alpha.r() {
        if roots[t - 1].is_zero() {
            continue;
        }
        for (k, x) in sigma_t(h, t)?.entries {
            out.insert((t, k), &roots[t - 1] * x);
        }
    }
    Ok(out)
}

fn check_eps_p(eps: &Rational, p: &Rational, r: usize) -> Result<()> {
    if !eps.is_positive() || *eps >= ratio(1, 9 * r as u64) {
        return Err(invalid(format!("eps must lie in (0, 1/{})", 9 * r)));
    }
    if !p.is_positive() || *p >= int(1) {
        return Err(invalid("p must lie in (0, 1)"));
    }
    Ok(())
}

/// `α* = (1+ε)^10 · (α, 0) + 50(r+1)/(ε²p) · (0, α)`.
pub fn alpha_star(alpha: &AlphaWeights, eps: &Rational, p: &Rational) -> Result<AlphaWeights> {
    let r = alpha.r();
    check_eps_p(eps, p, r)?;
    let grow = pow(&(int(1) + eps), 10);
    let shift = int(50 * (r as u64 + 1)) / (eps * eps * p);
    let mut w = vec![Rational::zero(); r + 1];
    for (t, a) in alpha.as_slice().iter().enumerate() {
        w[t] += &grow * a;
        w[t + 1] += &shift * a;
    }
    Ok(AlphaWeights { weights: w })
}

/// `α^(r)_t = binom(r-1, t-1) · (1+ε)^{10(r-t)} · (Γ/p)^{t-1}` with `ε = 1/(10s)`, `Γ = 5000s³`.
pub fn alpha_schedule(s: usize, p: &Rational, r: usize) -> Result<AlphaWeights> {
    if r == 0 || r > s {
        return Err(invalid(format!("r = {r} outside 1..={s}")));
    }
    if !p.is_positive() || *p >= int(1) {
        return Err(invalid("p must lie in (0, 1)"));
    }
    let one_eps = int(1) + ratio(1, 10 * s as u64);
    let gamma_p = int(5000 * (s as u64).pow(3)) / p;
    let weights = (1..=r)
        .map(|t| {
            uint(&binom(r as u64 - 1, t as u64 - 1))
                * pow(&one_eps, 10 * (r - t) as u32)
                * pow(&gamma_p, (t - 1) as u32)
        })
        .collect();
    Ok(AlphaWeights { weights })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k4_triangles() -> Multihypergraph {
        Multihypergraph::from_edges(3, 6, [[0u32, 1, 3], [0, 2, 4], [1, 2, 5], [3, 4, 5]]).unwrap()
    }

    #[test]
    fn single_edge() {
        let h = Multihypergraph::from_edges(2, 2, [[0u32, 1]]).unwrap();
        let s = sigma_t(&h, 1).unwrap();
        assert_eq!(s.get(&[0]), ratio(1, 2));
        assert_eq!(norm_sq(&s), ratio(1, 2));
        assert_eq!(hat_delta(&h, 1).unwrap(), int(1));
    }

    #[test]
    fn clique_measures() {
        let h = k4_triangles();
        let s = sigma_t(&h, 1).unwrap();
        assert!(s.entries.values().all(|x| *x == ratio(1, 6)));
        assert_eq!(norm_sq(&s), ratio(1, 6));
        assert_eq!(norm_sq_t(&h, 1).unwrap(), ratio(1, 6));
        // every K4-edge pair in a common triangle has degree 1: 12 such pairs, each 1/12
        assert_eq!(norm_sq_t(&h, 2).unwrap(), ratio(12, 144));
        let both = alpha_norm_sq(&h, &AlphaWeights::ones(2)).unwrap();
        assert_eq!(both, ratio(1, 6) + ratio(1, 12));
        let hd2 = hat_delta_alpha(&h, &AlphaWeights::new(vec![int(1), int(0)]).unwrap()).unwrap();
        assert_eq!(hd2, ratio(3, 2) * int(4) * ratio(1, 12));
        assert!(hat_delta_alpha(&h, &AlphaWeights::ones(1)).is_err());
    }

    #[test]
    fn empty_is_rejected() {
        let h = Multihypergraph::new(2, 3).unwrap();
        assert!(matches!(sigma_t(&h, 1), Err(Error::EmptyHypergraph)));
        assert!(norm_sq_t(&k4_triangles(), 4).is_err());
    }

    #[test]
    fn schedule_values() {
        assert_eq!(alpha_schedule(3, &ratio(1, 2), 1).unwrap().as_slice(), &[int(1)]);
        let a = alpha_schedule(2, &ratio(1, 2), 2).unwrap();
        assert_eq!(a.as_slice(), &[pow(&ratio(21, 20), 10), int(80000)]);
        let one = AlphaWeights::ones(1);
        let eps = ratio(1, 20);
        let p = ratio(1, 2);
        let star = alpha_star(&one, &eps, &p).unwrap();
        assert_eq!(star.as_slice(), &[pow(&ratio(21, 20), 10), int(100) / (&eps * &eps * &p)]);
        assert!(alpha_star(&one, &ratio(1, 9), &p).is_err());
    }

    #[test]
    fn square_roots() {
        let a = AlphaWeights::new(vec![ratio(4, 9), int(0), int(25)]).unwrap();
        assert_eq!(a.sqrt_weights().unwrap(), vec![ratio(2, 3), int(0), int(5)]);
        assert!(AlphaWeights::new(vec![int(2)]).unwrap().sqrt_weights().is_none());
    }
}
