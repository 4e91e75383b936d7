//! JSON file formats for hypergraphs and container families.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::hypergraph::{Multihypergraph, Vertex, VertexSet};

#[derive(Serialize, Deserialize)]
struct EdgeRecord {
    set: Vec<Vertex>,
    #[serde(with = "crate::rational::biguint_number")]
    mult: BigUint,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HypergraphRecord {
    uniformity: usize,
    vertex_count: usize,
    edges: Vec<EdgeRecord>,
}

pub fn hypergraph_to_value(h: &Multihypergraph) -> Value {
    let rec = HypergraphRecord {
        uniformity: h.uniformity(),
        vertex_count: h.vertex_count(),
        edges: h.edges().map(|(e, m)| EdgeRecord { set: e.to_vec(), mult: m.clone() }).collect(),
    };
    serde_json::to_value(rec).expect("hypergraph serializes")
}

pub fn hypergraph_to_json(h: &Multihypergraph) -> String {
    to_pretty(&hypergraph_to_value(h))
}

/// Pretty JSON with a trailing newline.
pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

/// Parses a hypergraph file; sets must be sorted and distinct.
pub fn hypergraph_from_json(text: &str) -> Result<Multihypergraph> {
    let rec: HypergraphRecord = serde_json::from_str(text)?;
    let mut h = Multihypergraph::new(rec.uniformity, rec.vertex_count)?;
    for e in rec.edges {
        h.insert_new_edge(&e.set, e.mult)?;
    }
    Ok(h)
}

/// Reads a container family: a bare list of sets, an object with `containers`
/// (sets, or objects with a `container` field), or a container tree (its leaves).
pub fn containers_from_json(text: &str) -> Result<Vec<VertexSet>> {
    let v: Value = serde_json::from_str(text)?;
    containers_from_value(&v)
}

pub fn containers_from_value(v: &Value) -> Result<Vec<VertexSet>> {
    let set = |x: &Value| -> Result<VertexSet> {
        let raw: Vec<Vertex> = serde_json::from_value(x.clone())?;
        VertexSet::from_sorted(raw)
    };
    match v {
        Value::Array(items) => items.iter().map(set).collect(),
        Value::Object(map) => {
            if let Some(Value::Array(items)) = map.get("containers") {
                return items
                    .iter()
                    .map(|it| match it.get("container") {
                        Some(c) => set(c),
                        None => set(it),
                    })
                    .collect();
            }
            if let Some(tree) = map.get("tree") {
                let mut out = Vec::new();
                collect_leaves(tree, &mut out)?;
                return Ok(out);
            }
            Err(Error::Format("expected a list of sets, a \"containers\" list or a \"tree\"".into()))
        }
        _ => Err(Error::Format("container file must be a JSON array or object".into())),
    }
}

fn collect_leaves(node: &Value, out: &mut Vec<VertexSet>) -> Result<()> {
    let children = node.get("children").and_then(Value::as_array).ok_or_else(|| Error::Format("tree node without children".into()))?;
    if children.is_empty() {
        let c = node.get("C").ok_or_else(|| Error::Format("tree node without C".into()))?;
        let raw: Vec<Vertex> = serde_json::from_value(c.clone())?;
        out.push(VertexSet::from_sorted(raw)?);
    }
    for ch in children {
        collect_leaves(ch, out)?;
    }
    Ok(())
}
