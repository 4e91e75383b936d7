//! Uniform multihypergraphs.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

pub type Vertex = u32;

/// Sorted, duplicate-free list of vertices.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexSet(Vec<Vertex>);

impl VertexSet {
    pub fn new(mut vertices: Vec<Vertex>) -> Self {
        vertices.sort_unstable();
        vertices.dedup();
        VertexSet(vertices)
    }

    pub fn empty() -> Self {
        VertexSet(Vec::new())
    }

    pub fn full(vertex_count: usize) -> Self {
        VertexSet((0..vertex_count as Vertex).collect())
    }

    /// Fails unless `vertices` is strictly increasing.
    pub fn from_sorted(vertices: Vec<Vertex>) -> Result<Self> {
        if vertices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid(format!("vertex list {vertices:?} is not strictly increasing")));
        }
        Ok(VertexSet(vertices))
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Vertex> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.0.iter().copied()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        is_sorted_subset(&self.0, &other.0)
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => {
                    out.push(self.0[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(other.0[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push(self.0[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        VertexSet(out)
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.0.iter().copied().filter(|v| !other.contains(*v)).collect())
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.0.iter().copied().filter(|v| other.contains(*v)).collect())
    }

    pub fn check_range(&self, vertex_count: usize) -> Result<()> {
        match self.0.last() {
            Some(&v) if v as usize >= vertex_count => Err(Error::VertexOutOfRange { vertex: v, vertex_count }),
            _ => Ok(()),
        }
    }
}

impl From<Vec<Vertex>> for VertexSet {
    fn from(v: Vec<Vertex>) -> Self {
        VertexSet::new(v)
    }
}

impl FromIterator<Vertex> for VertexSet {
    fn from_iter<I: IntoIterator<Item = Vertex>>(iter: I) -> Self {
        VertexSet::new(iter.into_iter().collect())
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

pub(crate) fn is_sorted_subset(small: &[Vertex], big: &[Vertex]) -> bool {
    let mut j = 0;
    for &x in small {
        while j < big.len() && big[j] < x {
            j += 1;
        }
        if j == big.len() || big[j] != x {
            return false;
        }
        j += 1;
    }
    true
}

/// Calls `f` on every `t`-element subset of the sorted slice `items`, in lexicographic order.
pub fn for_each_subset(items: &[Vertex], t: usize, mut f: impl FnMut(&[Vertex])) {
    if t > items.len() {
        return;
    }
    let n = items.len();
    let mut idx: Vec<usize> = (0..t).collect();
    let mut buf: Vec<Vertex> = idx.iter().map(|&i| items[i]).collect();
    loop {
        f(&buf);
        let mut i = t;
        while i > 0 && idx[i - 1] == n - t + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        let i = i - 1;
        idx[i] += 1;
        buf[i] = items[idx[i]];
        for k in i + 1..t {
            idx[k] = idx[k - 1] + 1;
            buf[k] = items[idx[k]];
        }
    }
}

/// An `s`-uniform hypergraph on vertices `0..vertex_count` whose edges carry
/// positive integer multiplicities.
///
/// Edges are keyed by their sorted vertex set, so iteration is lexicographic and
/// adding an existing set increases its multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multihypergraph {
    uniformity: usize,
    vertex_count: usize,
    edges: BTreeMap<Vec<Vertex>, BigUint>,
    total: BigUint,
}

impl Multihypergraph {
    pub fn new(uniformity: usize, vertex_count: usize) -> Result<Self> {
        if uniformity == 0 {
            return Err(invalid("uniformity must be positive"));
        }
        if vertex_count == 0 {
            return Err(invalid("vertex count must be positive"));
        }
        if vertex_count > Vertex::MAX as usize {
            return Err(invalid(format!("vertex count {vertex_count} exceeds the index type")));
        }
        Ok(Multihypergraph { uniformity, vertex_count, edges: BTreeMap::new(), total: BigUint::zero() })
    }

    pub fn from_edges<I, S>(uniformity: usize, vertex_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[Vertex]>,
    {
        let mut h = Self::new(uniformity, vertex_count)?;
        for e in edges {
            h.add_edge(e.as_ref(), 1u32)?;
        }
        Ok(h)
    }

    pub fn uniformity(&self) -> usize {
        self.uniformity
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Validates and sorts an edge, without inserting it.
    pub fn canonical_edge(&self, set: &[Vertex]) -> Result<Vec<Vertex>> {
        let mut sorted = set.to_vec();
        sorted.sort_unstable();
        if sorted.len() != self.uniformity {
            return Err(Error::MalformedEdge {
                set: set.to_vec(),
                reason: format!("expected {} vertices", self.uniformity),
            });
        }
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::MalformedEdge { set: set.to_vec(), reason: "repeated vertex".into() });
        }
        if let Some(&v) = sorted.last() {
            if v as usize >= self.vertex_count {
                return Err(Error::VertexOutOfRange { vertex: v, vertex_count: self.vertex_count });
            }
        }
        Ok(sorted)
    }

    pub fn add_edge(&mut self, set: &[Vertex], mult: impl Into<BigUint>) -> Result<()> {
        let mult = mult.into();
        if mult.is_zero() {
            return Err(Error::MalformedEdge { set: set.to_vec(), reason: "multiplicity must be positive".into() });
        }
        let key = self.canonical_edge(set)?;
        self.total += &mult;
        *self.edges.entry(key).or_default() += mult;
        Ok(())
    }

    /// Inserts a new edge set; fails if the set is already present.
    pub fn insert_new_edge(&mut self, set: &[Vertex], mult: BigUint) -> Result<()> {
        let key = self.canonical_edge(set)?;
        if key.as_slice() != set {
            return Err(Error::MalformedEdge { set: set.to_vec(), reason: "vertices not sorted ascending".into() });
        }
        if self.edges.contains_key(&key) {
            return Err(Error::DuplicateEdge(key));
        }
        if mult.is_zero() {
            return Err(Error::MalformedEdge { set: key, reason: "multiplicity must be positive".into() });
        }
        self.total += &mult;
        self.edges.insert(key, mult);
        Ok(())
    }

    /// Inserts a sorted, validated edge without checks.
    pub(crate) fn push_unchecked(&mut self, key: Vec<Vertex>, mult: BigUint) {
        self.total += &mult;
        *self.edges.entry(key).or_default() += mult;
    }

    /// e(H), counting multiplicities.
    pub fn edge_count(&self) -> &BigUint {
        &self.total
    }

    /// Number of distinct edge sets.
    pub fn distinct_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> impl Iterator<Item = (&[Vertex], &BigUint)> + '_ {
        self.edges.iter().map(|(k, m)| (k.as_slice(), m))
    }

    pub fn multiplicity(&self, set: &[Vertex]) -> BigUint {
        let mut key = set.to_vec();
        key.sort_unstable();
        self.edges.get(&key).cloned().unwrap_or_default()
    }

    fn check_vertices(&self, t: &[Vertex]) -> Result<()> {
        for &v in t {
            if v as usize >= self.vertex_count {
                return Err(Error::VertexOutOfRange { vertex: v, vertex_count: self.vertex_count });
            }
        }
        Ok(())
    }

    /// Sum of multiplicities of the edges containing `t`.
    pub fn degree(&self, t: &[Vertex]) -> Result<BigUint> {
        self.check_vertices(t)?;
        let mut key = t.to_vec();
        key.sort_unstable();
        key.dedup();
        if key.len() > self.uniformity {
            return Ok(BigUint::zero());
        }
        let mut d = BigUint::zero();
        for (e, m) in &self.edges {
            if is_sorted_subset(&key, e) {
                d += m;
            }
        }
        Ok(d)
    }

    /// Vertex degrees, indexed by vertex.
    pub fn vertex_degrees(&self) -> Vec<BigUint> {
        let mut deg = vec![BigUint::zero(); self.vertex_count];
        for (e, m) in &self.edges {
            for &v in e {
                deg[v as usize] += m;
            }
        }
        deg
    }

    /// Degrees of all `t`-sets of positive degree.
    pub fn t_degrees(&self, t: usize) -> BTreeMap<Vec<Vertex>, BigUint> {
        let mut out: BTreeMap<Vec<Vertex>, BigUint> = BTreeMap::new();
        for (e, m) in &self.edges {
            for_each_subset(e, t, |sub| {
                if let Some(d) = out.get_mut(sub) {
                    *d += m;
                } else {
                    out.insert(sub.to_vec(), m.clone());
                }
            });
        }
        out
    }

    /// Σ deg(T)² over all `t`-sets.
    pub fn t_degree_square_sum(&self, t: usize) -> BigUint {
        if t == 1 {
            return self.vertex_degrees().iter().map(|d| d * d).sum();
        }
        self.t_degrees(t).values().map(|d| d * d).sum()
    }

    pub fn max_degree_t(&self, t: usize) -> Result<BigUint> {
        if t == 0 || t > self.uniformity {
            return Err(invalid(format!("t = {t} outside 1..={}", self.uniformity)));
        }
        if self.is_empty() {
            return Err(Error::EmptyHypergraph);
        }
        Ok(self.t_degrees(t).into_values().max().unwrap_or_default())
    }

    pub fn link(&self, v: Vertex) -> Result<Multihypergraph> {
        self.check_vertices(&[v])?;
        if self.uniformity < 2 {
            return Err(invalid("link needs uniformity at least 2"));
        }
        let mut out = Multihypergraph::new(self.uniformity - 1, self.vertex_count)?;
        for (e, m) in &self.edges {
            if e.binary_search(&v).is_ok() {
                let rest: Vec<Vertex> = e.iter().copied().filter(|&u| u != v).collect();
                out.push_unchecked(rest, m.clone());
            }
        }
        Ok(out)
    }

    /// H[W] on the same vertex universe.
    pub fn restrict(&self, w: &VertexSet) -> Result<Multihypergraph> {
        w.check_range(self.vertex_count)?;
        let mut out = Multihypergraph::new(self.uniformity, self.vertex_count)?;
        for (e, m) in &self.edges {
            if e.iter().all(|&u| w.contains(u)) {
                out.push_unchecked(e.clone(), m.clone());
            }
        }
        Ok(out)
    }

    /// H[C] relabelled onto `0..|C|`; returns the hypergraph and the map from new to old labels.
    pub fn induced_compact(&self, c: &VertexSet) -> Result<(Multihypergraph, Vec<Vertex>)> {
        c.check_range(self.vertex_count)?;
        if c.is_empty() {
            return Err(invalid("cannot compact onto an empty vertex set"));
        }
        let mut pos = vec![u32::MAX; self.vertex_count];
        for (i, v) in c.iter().enumerate() {
            pos[v as usize] = i as u32;
        }
        let mut out = Multihypergraph::new(self.uniformity, c.len())?;
        for (e, m) in &self.edges {
            if e.iter().all(|&u| pos[u as usize] != u32::MAX) {
                out.push_unchecked(e.iter().map(|&u| pos[u as usize]).collect(), m.clone());
            }
        }
        Ok((out, c.as_slice().to_vec()))
    }

    /// k1·H1 + k2·H2, edge set by edge set.
    pub fn union_scale(h1: &Multihypergraph, h2: &Multihypergraph, k1: u64, k2: u64) -> Result<Multihypergraph> {
        if h1.uniformity != h2.uniformity {
            return Err(Error::UniformityMismatch { expected: h1.uniformity, found: h2.uniformity });
        }
        if h1.vertex_count != h2.vertex_count {
            return Err(Error::VertexCountMismatch(h1.vertex_count, h2.vertex_count));
        }
        if k1 == 0 || k2 == 0 {
            return Err(invalid("scaling factors must be positive"));
        }
        let mut out = Multihypergraph::new(h1.uniformity, h1.vertex_count)?;
        for (e, m) in &h1.edges {
            out.push_unchecked(e.clone(), m * k1);
        }
        for (e, m) in &h2.edges {
            out.push_unchecked(e.clone(), m * k2);
        }
        Ok(out)
    }

    pub fn scale(&self, k: &BigUint) -> Result<Multihypergraph> {
        if k.is_zero() {
            return Err(invalid("scaling factor must be positive"));
        }
        let mut out = self.clone();
        for m in out.edges.values_mut() {
            *m *= k;
        }
        out.total *= k;
        Ok(out)
    }

    /// True iff no edge lies inside `set`.
    pub fn is_independent(&self, set: &VertexSet) -> Result<bool> {
        set.check_range(self.vertex_count)?;
        if set.len() < self.uniformity {
            return Ok(true);
        }
        Ok(!self.edges.keys().any(|e| is_sorted_subset(e, set.as_slice())))
    }

    /// H minus the edges meeting `removed`.
    pub fn delete_vertices(&self, removed: &[bool]) -> Multihypergraph {
        let mut out = Multihypergraph::new(self.uniformity, self.vertex_count).unwrap();
        for (e, m) in &self.edges {
            if !e.iter().any(|&u| removed[u as usize]) {
                out.push_unchecked(e.clone(), m.clone());
            }
        }
        out
    }

    pub fn max_multiplicity(&self) -> BigUint {
        self.edges.values().max().cloned().unwrap_or_else(BigUint::one)
    }
}
