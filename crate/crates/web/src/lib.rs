//! Browser bindings for three small demos. Every export takes plain numbers or
//! `"num/den"` strings and returns a JSON string; the `*_json` functions are the
//! same operations for native callers.

use hcl_core::engine::round_eps;
use hcl_core::generators::{clique_hypergraph, grid_lines_hypergraph, pair_from_index, random_hypergraph, random_maximal_independent_set};
use hcl_core::oracle::verify_cover;
use hcl_core::packaged::{packaged_containers, PackagedLimits, PackagedParams};
use hcl_core::rational::{parse, to_f64};
use hcl_core::round::{run_round, Branch, RoundConfig};
use hcl_core::{AlphaWeights, Error, Result};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

const MAX_CLIQUE_N: u32 = 6;
const MAX_ROUND_VERTICES: u32 = 2000;

fn pairs(set: impl Iterator<Item = u32>, n: u32) -> Vec<[u32; 2]> {
    set.map(|v| {
        let (a, b) = pair_from_index(v, n);
        [a, b]
    })
    .collect()
}

/// Forced packaged tree on the triangle hypergraph of `K_n`, with every leaf as a
/// list of `K_n` edges and the brute-force cover check.
pub fn clique_containers_json(n: u32, alpha: &str, beta: &str, q: &str, big_e: u32) -> Result<Value> {
    if n > MAX_CLIQUE_N {
        return Err(Error::InvalidParameter(format!("n is capped at {MAX_CLIQUE_N} in the browser")));
    }
    let h = clique_hypergraph(n, 2)?;
    let params = PackagedParams {
        alpha: parse(alpha)?,
        beta: parse(beta)?,
        q: parse(q)?,
        big_e: big_e.into(),
        forced: true,
        limits: PackagedLimits { max_nodes: 2000, enumeration_limit: 20_000, witness_search_limit: 100_000 },
    };
    let tree = packaged_containers(&h, &params)?;
    let leaves = tree.leaves();
    let report = verify_cover(&leaves, &h, 1 << 20)?;
    let nodes: Vec<Value> = tree
        .nodes()
        .into_iter()
        .map(|(node, depth)| {
            json!({
                "depth": depth,
                "size": node.c.len(),
                "good": node.good,
                "stalled": node.stalled,
                "source": node.witness_source,
                "children": node.children.len(),
            })
        })
        .collect();
    Ok(json!({
        "n": n,
        "vertices": h.vertex_count(),
        "edges": h.distinct_edges(),
        "stats": tree.stats,
        "hypothesis_holds": tree.hypothesis.holds,
        "nodes": nodes,
        "leaves": leaves.iter().map(|c| pairs(c.iter(), n)).collect::<Vec<_>>(),
        "cover": report,
    }))
}

/// One fingerprint round on a random `s`-uniform hypergraph against a random
/// maximal independent set, with the norm after every step.
pub fn round_trajectory_json(v: u32, s: u32, edges: usize, seed: u64, p: &str) -> Result<Value> {
    if v > MAX_ROUND_VERTICES {
        return Err(Error::InvalidParameter(format!("v is capped at {MAX_ROUND_VERTICES} in the browser")));
    }
    if !(2..=4).contains(&s) {
        return Err(Error::InvalidParameter("s must be 2, 3 or 4".into()));
    }
    let h = random_hypergraph(v, s, edges, seed)?;
    let independent = random_maximal_independent_set(&h, seed.wrapping_add(1));
    let mut cfg = RoundConfig::new(round_eps(s as usize), parse(p)?, AlphaWeights::ones(s as usize - 1));
    cfg.record_norms = true;
    let mut oracle = independent.clone();
    let out = run_round(&h, &cfg, &mut oracle)?;
    let norms: Vec<f64> = out.trace.norm_history.iter().flatten().map(to_f64).collect();
    let branch = match &out.branch {
        Branch::Pruned { container } => json!({ "kind": "pruned", "container_size": container.len() }),
        Branch::Reduced { f } => json!({ "kind": "reduced", "edges": f.distinct_edges(), "uniformity": f.uniformity() }),
    };
    Ok(json!({
        "vertices": v,
        "edges": h.distinct_edges(),
        "independent_size": independent.len(),
        "fingerprint": out.fingerprint,
        "branch": branch,
        "norms": norms,
        "trace": out.trace_json(),
    }))
}

/// The grid `[mM]²` with its line families, as coordinates for drawing.
pub fn grid_lines_json(m: u32, big_m: u32, s: u32, h_max: u32) -> Result<Value> {
    if m * big_m > 60 {
        return Err(Error::InvalidParameter("grid side mM is capped at 60 in the browser".into()));
    }
    let (fam, h) = grid_lines_hypergraph(m, big_m, s, Some(h_max))?;
    let lines: Vec<Value> = fam
        .lines
        .iter()
        .enumerate()
        .map(|(i, lh)| {
            json!({
                "h": i + 1,
                "lines": lh.iter().map(|l| l.iter().map(|&p| fam.point(p)).collect::<Vec<_>>()).collect::<Vec<_>>(),
            })
        })
        .collect();
    Ok(json!({ "n": fam.n, "line_count": fam.line_count(), "edges": h.distinct_edges(), "families": lines }))
}

fn to_js(r: Result<Value>) -> std::result::Result<String, JsValue> {
    r.map(|v| v.to_string()).map_err(|e| JsValue::from_str(&e.to_string()))
}

#[wasm_bindgen]
pub fn clique_containers(n: u32, alpha: &str, beta: &str, q: &str, big_e: u32) -> std::result::Result<String, JsValue> {
    to_js(clique_containers_json(n, alpha, beta, q, big_e))
}

#[wasm_bindgen]
pub fn round_trajectory(v: u32, s: u32, edges: u32, seed: u32, p: &str) -> std::result::Result<String, JsValue> {
    to_js(round_trajectory_json(v, s, edges as usize, seed as u64, p))
}

#[wasm_bindgen]
pub fn grid_lines(m: u32, big_m: u32, s: u32, h_max: u32) -> std::result::Result<String, JsValue> {
    to_js(grid_lines_json(m, big_m, s, h_max))
}
