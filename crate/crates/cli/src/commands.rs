use std::fmt;
use std::path::Path;

use anyhow::{Context, Result};
use hcl_core::engine::{check_hypothesis_main, check_hypothesis_simple, container_for, enumerate_containers, main_simple_params};
use hcl_core::generators::{clique_hypergraph, folkman_hypergraph, grid_lines_hypergraph, induced_ramsey_hypergraph, random_hypergraph};
use hcl_core::io::{containers_from_json, hypergraph_from_json, hypergraph_to_json, to_pretty};
use hcl_core::measures::{hat_delta, norm_sq, sigma_t};
use hcl_core::oracle::verify_cover;
use hcl_core::packaged::{check_hypothesis_packaged, packaged_containers, PackagedLimits, PackagedParams};
use hcl_core::rational::{format as fmt_rational, parse as parse_rational, to_f64, Rational};
use hcl_core::{Multihypergraph, VertexSet};
use num_bigint::BigUint;
use serde_json::{json, Value};

use crate::args::{ContainArgs, Family, GenArgs, MeasureArgs, Mode, VerifyArgs};
use crate::manifest::Recorder;

/// An error carrying the process exit code.
#[derive(Debug)]
pub struct Exit {
    pub code: u8,
    pub message: String,
}

impl fmt::Display for Exit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for Exit {}

pub const INVALID: u8 = 2;
pub const HYPOTHESIS: u8 = 3;
pub const LIMITS: u8 = 4;
pub const UNCOVERED: u8 = 5;

fn exit(code: u8, message: impl Into<String>) -> anyhow::Error {
    Exit { code, message: message.into() }.into()
}

fn need<T>(v: Option<T>, flag: &str, family: &str) -> Result<T> {
    v.ok_or_else(|| exit(INVALID, format!("--{flag} is required for {family}")))
}

fn rational(text: &str, name: &str) -> Result<Rational> {
    parse_rational(text).with_context(|| format!("--{name}"))
}

fn read_hypergraph(path: &Path) -> Result<Multihypergraph> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    hypergraph_from_json(&text).with_context(|| format!("parsing {}", path.display()))
}

fn human_checks(report: &hcl_core::engine::HypothesisReport) {
    for c in &report.checks {
        eprintln!("  {}: {:.6e} <= {:.6e} {}", c.name, to_f64(&c.lhs), to_f64(&c.rhs), if c.holds { "ok" } else { "FAILS" });
    }
}

pub fn gen(a: &GenArgs, rec: &mut Recorder) -> Result<()> {
    let fam = format!("{:?}", a.family).to_lowercase();
    rec.param("family", &fam);
    let h = match a.family {
        Family::Clique => {
            let n = need(a.n, "n", &fam)?;
            let r = need(a.r, "r", &fam)?;
            rec.param("n", n);
            rec.param("r", r);
            clique_hypergraph(n, r)?
        }
        Family::Gridlines => {
            let m = need(a.m, "m", &fam)?;
            let big_m = need(a.big_m, "big-m", &fam)?;
            let s = need(a.s, "s", &fam)?;
            rec.param("m", m);
            rec.param("M", big_m);
            rec.param("s", s);
            if let Some(h) = a.h_max {
                rec.param("h_max", h);
            }
            grid_lines_hypergraph(m, big_m, s, a.h_max)?.1
        }
        Family::Folkman => {
            let big_n = need(a.big_n, "big-n", &fam)?;
            let n = need(a.n, "n", &fam)?;
            let k = need(a.k, "k", &fam)?;
            rec.param("N", big_n);
            rec.param("n", n);
            rec.param("k", k);
            folkman_hypergraph(big_n, n, k)?
        }
        Family::Induced => {
            let big_n = need(a.big_n, "big-n", &fam)?;
            let k = need(a.k, "k", &fam)?;
            let pattern = need(a.pattern.as_ref(), "pattern", &fam)?;
            rec.param("N", big_n);
            rec.param("k", k);
            rec.param("keep_multiplicity", a.keep_multiplicity);
            rec.input(pattern);
            let g = read_hypergraph(pattern)?;
            induced_ramsey_hypergraph(big_n, &g, k, a.keep_multiplicity)?
        }
        Family::Random => {
            let v = need(a.v, "v", &fam)?;
            let s = need(a.s, "s", &fam)?;
            let edges = need(a.edges, "edges", &fam)?;
            let seed = need(a.seed, "seed", &fam)?;
            rec.param("v", v);
            rec.param("s", s);
            rec.param("edges", edges);
            rec.manifest.seed = Some(seed);
            random_hypergraph(v, s, edges, seed)?
        }
    };
    rec.output(&a.out, hypergraph_to_json(&h).as_bytes())
}

pub fn contain(a: &ContainArgs, rec: &mut Recorder, human: bool) -> Result<()> {
    rec.input(&a.input);
    let h = read_hypergraph(&a.input)?;
    let q = rational(&a.q, "q")?;
    rec.param("mode", format!("{:?}", a.mode).to_lowercase());
    rec.param("q", fmt_rational(&q));
    rec.param("forced", a.force);
    match a.mode {
        Mode::Simple => contain_simple(a, &h, &q, rec, human),
        Mode::Packaged => contain_packaged(a, &h, &q, rec, human),
    }
}

fn contain_simple(a: &ContainArgs, h: &Multihypergraph, q: &Rational, rec: &mut Recorder, human: bool) -> Result<()> {
    let k = rational(&a.big_k, "K")?;
    rec.param("K", fmt_rational(&k));
    let simple = check_hypothesis_simple(h, q, &k)?;
    let (p, delta) = main_simple_params(h.uniformity(), q, &k)?;
    let main = check_hypothesis_main(h, &p, &delta)?;
    rec.param("p", fmt_rational(&p));
    rec.param("delta", fmt_rational(&delta));
    rec.manifest.hypothesis = Some(json!({ "holds": simple.holds && main.holds, "simple": simple, "main": main }));
    if human {
        eprintln!("simple hypothesis:");
        human_checks(&simple);
        eprintln!("main hypothesis:");
        human_checks(&main);
    }
    if !a.force && !(simple.holds && main.holds) {
        let mut failed = simple.failures();
        failed.extend(main.failures());
        return Err(exit(HYPOTHESIS, format!("hypothesis fails ({}); pass --force to run anyway", failed.join("; "))));
    }
    if let Some(path) = &a.independent {
        rec.input(path);
        let raw: Vec<hcl_core::Vertex> = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        let i = VertexSet::new(raw);
        i.check_range(h.vertex_count())?;
        let res = container_for(h, q, &k, &i, a.force)?;
        let mut v = serde_json::to_value(&res)?;
        v["container"] = serde_json::to_value(res.container())?;
        return rec.output(&a.out, to_pretty(&v).as_bytes());
    }
    rec.param("limit", a.limit);
    let en = enumerate_containers(h, q, &k, a.force, a.limit)?;
    let mut v = serde_json::to_value(&en)?;
    v["containers"] = serde_json::to_value(en.containers())?;
    rec.output(&a.out, to_pretty(&v).as_bytes())?;
    if en.partial {
        return Err(exit(LIMITS, format!("enumeration stopped after {} leaves; output is partial", a.limit)));
    }
    Ok(())
}

fn contain_packaged(a: &ContainArgs, h: &Multihypergraph, q: &Rational, rec: &mut Recorder, human: bool) -> Result<()> {
    let alpha = rational(need(a.alpha.as_deref(), "alpha", "packaged mode")?, "alpha")?;
    let beta = rational(need(a.beta.as_deref(), "beta", "packaged mode")?, "beta")?;
    let e_text = need(a.big_e.as_deref(), "E", "packaged mode")?;
    let big_e: BigUint = e_text.trim().parse().map_err(|_| exit(INVALID, format!("--E: not a nonnegative integer: {e_text:?}")))?;
    rec.param("alpha", fmt_rational(&alpha));
    rec.param("beta", fmt_rational(&beta));
    rec.param("E", &big_e);
    rec.param("max_nodes", a.max_nodes);
    rec.param("enumeration_limit", a.limit);
    rec.param("witness_search_limit", a.witness_limit);
    let hyp = check_hypothesis_packaged(h, &alpha, &beta, q, &big_e)?;
    rec.manifest.hypothesis = Some(serde_json::to_value(&hyp)?);
    if human {
        eprintln!("packaged hypothesis:");
        human_checks(&hyp);
    }
    if !a.force && !hyp.holds {
        return Err(exit(HYPOTHESIS, format!("hypothesis fails ({}); pass --force to run anyway", hyp.failures().join("; "))));
    }
    let params = PackagedParams {
        alpha,
        beta,
        q: q.clone(),
        big_e,
        forced: a.force,
        limits: PackagedLimits { max_nodes: a.max_nodes, enumeration_limit: a.limit, witness_search_limit: a.witness_limit },
    };
    let tree = packaged_containers(h, &params)?;
    if human {
        let s = &tree.stats;
        eprintln!("tree: {} nodes, {} leaves ({} stalled), height {}", s.nodes, s.leaves, s.stalled_leaves, s.height);
    }
    rec.output(&a.out, to_pretty(&serde_json::to_value(&tree)?).as_bytes())
}

/// Returns the report text and the exit code it implies.
pub fn verify(a: &VerifyArgs, rec: &mut Recorder) -> Result<(String, u8)> {
    rec.input(&a.hypergraph);
    rec.input(&a.containers);
    rec.param("cap", a.cap);
    let h = read_hypergraph(&a.hypergraph)?;
    let text = std::fs::read_to_string(&a.containers).with_context(|| format!("reading {}", a.containers.display()))?;
    let containers = containers_from_json(&text).with_context(|| format!("parsing {}", a.containers.display()))?;
    let report = verify_cover(&containers, &h, a.cap)?;
    let out = to_pretty(&serde_json::to_value(&report)?);
    if let Some(path) = &a.out {
        rec.output(path, out.as_bytes())?;
    }
    let code = if !report.complete {
        eprintln!("enumeration cap {} reached; report is partial", a.cap);
        LIMITS
    } else if !report.full_cover() {
        eprintln!("{} of {} maximal independent sets uncovered", report.total_maximal - report.covered, report.total_maximal);
        UNCOVERED
    } else {
        0
    };
    Ok((out, code))
}

pub fn measure(a: &MeasureArgs, rec: &mut Recorder, human: bool) -> Result<String> {
    rec.input(&a.input);
    rec.param("t", a.t);
    let h = read_hypergraph(&a.input)?;
    let mu = sigma_t(&h, a.t)?;
    let norm = norm_sq(&mu);
    let hat = hat_delta(&h, a.t)?;
    let max_deg = h.max_degree_t(a.t)?;
    let support: Vec<Value> = mu.entries.iter().map(|(set, x)| json!({ "set": set, "value": fmt_rational(x) })).collect();
    if human {
        eprintln!("norm_sq ~ {:.6e}, hat_delta ~ {:.6e}, max degree {}", to_f64(&norm), to_f64(&hat), max_deg);
    }
    let v = json!({
        "t": a.t,
        "uniformity": h.uniformity(),
        "vertex_count": h.vertex_count(),
        "edge_count": h.edge_count().to_string(),
        "support": support,
        "norm_sq": fmt_rational(&norm),
        "max_degree": max_deg.to_string(),
        "hat_delta": fmt_rational(&hat),
    });
    let out = to_pretty(&v);
    if let Some(path) = &a.out {
        rec.output(path, out.as_bytes())?;
    }
    Ok(out)
}
