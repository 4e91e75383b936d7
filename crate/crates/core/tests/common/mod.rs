#![allow(dead_code)]

use std::sync::atomic::{AtomicBool, Ordering};

use hcl_core::generators::rng;
use hcl_core::hypergraph::{Multihypergraph, Vertex, VertexSet};
use hcl_core::rational::{ratio, Rational};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    rng(seed)
}

/// Random `s`-uniform multihypergraph with `edges` insertions of multiplicity 1..=3.
pub fn random_multi(r: &mut ChaCha8Rng, s: usize, v: usize, edges: usize) -> Multihypergraph {
    let mut h = Multihypergraph::new(s, v).unwrap();
    let all: Vec<Vertex> = (0..v as Vertex).collect();
    for _ in 0..edges.max(1) {
        let e: Vec<Vertex> = all.choose_multiple(r, s).copied().collect();
        let m: u32 = if r.gen_bool(0.2) { r.gen_range(2..=3) } else { 1 };
        h.add_edge(&e, m).unwrap();
    }
    h
}

/// Random simple `s`-uniform hypergraph.
pub fn random_simple(r: &mut ChaCha8Rng, s: usize, v: usize, edges: usize) -> Multihypergraph {
    let mut h = Multihypergraph::new(s, v).unwrap();
    let all: Vec<Vertex> = (0..v as Vertex).collect();
    for _ in 0..edges.max(1) {
        let e: Vec<Vertex> = all.choose_multiple(r, s).copied().collect();
        if h.multiplicity(&e) == 0u32.into() {
            h.add_edge(&e, 1u32).unwrap();
        }
    }
    h
}

pub fn random_rational(r: &mut ChaCha8Rng, max_num: i64, max_den: i64) -> Rational {
    ratio(r.gen_range(0..=max_num), r.gen_range(1..=max_den))
}

pub fn random_set(r: &mut ChaCha8Rng, n: usize, keep: f64) -> VertexSet {
    (0..n as Vertex).filter(|_| r.gen_bool(keep)).collect()
}

/// Every `t`-subset of `0..n` as a sorted vector.
pub fn subsets_of_size(n: usize, t: usize) -> Vec<Vec<Vertex>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, t: usize, cur: &mut Vec<Vertex>, out: &mut Vec<Vec<Vertex>>) {
        if cur.len() == t {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            cur.push(v as Vertex);
            rec(v + 1, n, t, cur, out);
            cur.pop();
        }
    }
    rec(0, n, t, &mut cur, &mut out);
    out
}

/// Set once a criterion has printed its line.
pub static REPORTED: AtomicBool = AtomicBool::new(false);

pub fn report(label: &str, failures: &[String], summary: &str) {
    REPORTED.store(true, Ordering::SeqCst);
    if failures.is_empty() {
        println!("{label} PASS {summary}");
    } else {
        println!("{label} FAIL {summary}: {} failures, first: {}", failures.len(), failures[0]);
    }
    assert!(failures.is_empty(), "{label}: {:?}", &failures[..failures.len().min(5)]);
}
