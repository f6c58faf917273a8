//! The host graph: an immutable simple digraph with attribute columns.
//!
//! Vertex identifiers are opaque strings. Internally every vertex gets a dense
//! [`VertexIndex`] equal to its rank in the lexicographic order of
//! identifiers, so index order and identifier order always agree. That keeps
//! exports, enumeration order and round-trips independent of input row order.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::attr::{AttrType, AttributeValue};

pub type VertexIndex = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex identifiers must be non-empty")]
    EmptyVertexId,
    #[error("self-loop on vertex {0:?}")]
    SelfLoop(String),
    #[error("attribute for unknown vertex {0:?}")]
    AttributeForUnknownVertex(String),
    #[error("attribute for unknown edge {0:?} -> {1:?}")]
    AttributeForUnknownEdge(String, String),
    #[error("attribute {key:?} mixes {expected} and {found} values")]
    AttributeTypeConflict {
        key: String,
        expected: AttrType,
        found: AttrType,
    },
    #[error("graph has more vertices than fit a 32-bit index")]
    TooManyVertices,
}

/// One attribute key over all vertices (or all edges), with a single type.
#[derive(Debug, Clone, PartialEq)]
pub struct AttrColumn {
    pub ty: AttrType,
    pub values: Vec<Option<AttributeValue>>,
}

impl AttrColumn {
    pub fn get(&self, i: usize) -> Option<&AttributeValue> {
        self.values.get(i).and_then(Option::as_ref)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyDigraph {
    ids: Vec<String>,
    index: HashMap<String, VertexIndex>,
    // Sorted by (src, dst).
    edges: Vec<(VertexIndex, VertexIndex)>,
    out_adj: Vec<Vec<VertexIndex>>,
    in_adj: Vec<Vec<VertexIndex>>,
    vertex_attrs: BTreeMap<String, AttrColumn>,
    // Aligned with `edges`.
    edge_attrs: BTreeMap<String, AttrColumn>,
}

impl PropertyDigraph {
    pub fn empty() -> Self {
        GraphBuilder::new().build().expect("empty graph is valid")
    }

    pub fn vertex_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl ExactSizeIterator<Item = VertexIndex> {
        0..self.ids.len() as VertexIndex
    }

    pub fn id(&self, v: VertexIndex) -> &str {
        &self.ids[v as usize]
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn index_of(&self, id: &str) -> Option<VertexIndex> {
        self.index.get(id).copied()
    }

    /// Edges in (src, dst) order.
    pub fn edges(&self) -> &[(VertexIndex, VertexIndex)] {
        &self.edges
    }

    pub fn out_neighbors(&self, v: VertexIndex) -> &[VertexIndex] {
        &self.out_adj[v as usize]
    }

    pub fn in_neighbors(&self, v: VertexIndex) -> &[VertexIndex] {
        &self.in_adj[v as usize]
    }

    pub fn out_degree(&self, v: VertexIndex) -> usize {
        self.out_adj[v as usize].len()
    }

    pub fn in_degree(&self, v: VertexIndex) -> usize {
        self.in_adj[v as usize].len()
    }

    pub fn has_edge(&self, src: VertexIndex, dst: VertexIndex) -> bool {
        let out = &self.out_adj[src as usize];
        let inc = &self.in_adj[dst as usize];
        if out.len() <= inc.len() {
            out.binary_search(&dst).is_ok()
        } else {
            inc.binary_search(&src).is_ok()
        }
    }

    /// Position of the edge in [`edges`](Self::edges), if present.
    pub fn edge_position(&self, src: VertexIndex, dst: VertexIndex) -> Option<usize> {
        self.edges.binary_search(&(src, dst)).ok()
    }

    pub fn vertex_attrs(&self) -> &BTreeMap<String, AttrColumn> {
        &self.vertex_attrs
    }

    pub fn edge_attrs(&self) -> &BTreeMap<String, AttrColumn> {
        &self.edge_attrs
    }

    pub fn vertex_attr(&self, v: VertexIndex, key: &str) -> Option<&AttributeValue> {
        self.vertex_attrs.get(key)?.get(v as usize)
    }

    pub fn edge_attr(&self, edge: usize, key: &str) -> Option<&AttributeValue> {
        self.edge_attrs.get(key)?.get(edge)
    }

    /// In- and out-degree of every vertex, keyed by identifier.
    pub fn degree_sequences(&self) -> (BTreeMap<String, usize>, BTreeMap<String, usize>) {
        let ins = self
            .vertices()
            .map(|v| (self.id(v).to_string(), self.in_degree(v)))
            .collect();
        let outs = self
            .vertices()
            .map(|v| (self.id(v).to_string(), self.out_degree(v)))
            .collect();
        (ins, outs)
    }

    /// Same vertices and vertex attributes, new edge list. `edge_attrs` values
    /// must be aligned with `edges`; the result re-sorts both together.
    pub fn with_edges(
        &self,
        edges: Vec<(VertexIndex, VertexIndex)>,
        edge_attrs: BTreeMap<String, AttrColumn>,
    ) -> Result<Self, GraphError> {
        let n = self.ids.len();
        let mut order: Vec<usize> = (0..edges.len()).collect();
        order.sort_unstable_by_key(|&i| edges[i]);
        let sorted: Vec<_> = order.iter().map(|&i| edges[i]).collect();
        for (i, &(s, d)) in sorted.iter().enumerate() {
            if s == d {
                return Err(GraphError::SelfLoop(self.ids[s as usize].clone()));
            }
            assert!((s as usize) < n && (d as usize) < n, "edge endpoint out of range");
            assert!(i == 0 || sorted[i - 1] != (s, d), "duplicate edge");
        }
        let edge_attrs = edge_attrs
            .into_iter()
            .map(|(k, col)| {
                let values = order.iter().map(|&i| col.values[i].clone()).collect();
                (k, AttrColumn { ty: col.ty, values })
            })
            .collect();
        Ok(Self::assemble(
            self.ids.clone(),
            self.index.clone(),
            sorted,
            self.vertex_attrs.clone(),
            edge_attrs,
        ))
    }

    fn assemble(
        ids: Vec<String>,
        index: HashMap<String, VertexIndex>,
        edges: Vec<(VertexIndex, VertexIndex)>,
        vertex_attrs: BTreeMap<String, AttrColumn>,
        edge_attrs: BTreeMap<String, AttrColumn>,
    ) -> Self {
        let n = ids.len();
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        for &(s, d) in &edges {
            out_adj[s as usize].push(d);
            in_adj[d as usize].push(s);
        }
        // Edges are sorted by (src, dst) so out lists are already sorted.
        for list in &mut in_adj {
            list.sort_unstable();
        }
        PropertyDigraph {
            ids,
            index,
            edges,
            out_adj,
            in_adj,
            vertex_attrs,
            edge_attrs,
        }
    }
}

/// Incremental construction by identifier. Duplicate edges are collapsed
/// (the first attribute values win) and counted.
#[derive(Debug, Default)]
pub struct GraphBuilder {
    vertices: BTreeMap<String, ()>,
    edges: HashMap<(String, String), usize>,
    edge_list: Vec<(String, String)>,
    vertex_attrs: BTreeMap<String, (AttrType, HashMap<String, AttributeValue>)>,
    edge_attrs: BTreeMap<String, (AttrType, HashMap<usize, AttributeValue>)>,
    duplicates: usize,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, id: &str) -> Result<(), GraphError> {
        if id.is_empty() {
            return Err(GraphError::EmptyVertexId);
        }
        self.vertices.entry(id.to_string()).or_default();
        Ok(())
    }

    /// Adds `src -> dst`. Returns `false` if the edge already existed.
    pub fn add_edge(&mut self, src: &str, dst: &str) -> Result<bool, GraphError> {
        if src == dst {
            return Err(GraphError::SelfLoop(src.to_string()));
        }
        self.add_vertex(src)?;
        self.add_vertex(dst)?;
        let key = (src.to_string(), dst.to_string());
        if self.edges.contains_key(&key) {
            self.duplicates += 1;
            return Ok(false);
        }
        self.edges.insert(key.clone(), self.edge_list.len());
        self.edge_list.push(key);
        Ok(true)
    }

    pub fn set_vertex_attr(
        &mut self,
        id: &str,
        key: &str,
        value: AttributeValue,
    ) -> Result<(), GraphError> {
        if !self.vertices.contains_key(id) {
            return Err(GraphError::AttributeForUnknownVertex(id.to_string()));
        }
        let col = self
            .vertex_attrs
            .entry(key.to_string())
            .or_insert_with(|| (value.attr_type(), HashMap::new()));
        check_type(key, col.0, &value)?;
        col.1.insert(id.to_string(), value);
        Ok(())
    }

    /// Sets an edge attribute unless the edge already carries one for `key`.
    pub fn set_edge_attr(
        &mut self,
        src: &str,
        dst: &str,
        key: &str,
        value: AttributeValue,
    ) -> Result<(), GraphError> {
        let pos = *self
            .edges
            .get(&(src.to_string(), dst.to_string()))
            .ok_or_else(|| GraphError::AttributeForUnknownEdge(src.into(), dst.into()))?;
        let col = self
            .edge_attrs
            .entry(key.to_string())
            .or_insert_with(|| (value.attr_type(), HashMap::new()));
        check_type(key, col.0, &value)?;
        col.1.entry(pos).or_insert(value);
        Ok(())
    }

    /// Registers an attribute column with a fixed type even if it has no values.
    pub fn declare_vertex_attr(&mut self, key: &str, ty: AttrType) {
        self.vertex_attrs
            .entry(key.to_string())
            .or_insert_with(|| (ty, HashMap::new()));
    }

    pub fn declare_edge_attr(&mut self, key: &str, ty: AttrType) {
        self.edge_attrs
            .entry(key.to_string())
            .or_insert_with(|| (ty, HashMap::new()));
    }

    pub fn has_vertex(&self, id: &str) -> bool {
        self.vertices.contains_key(id)
    }

    pub fn duplicate_count(&self) -> usize {
        self.duplicates
    }

    pub fn build(self) -> Result<PropertyDigraph, GraphError> {
        if self.vertices.len() > VertexIndex::MAX as usize {
            return Err(GraphError::TooManyVertices);
        }
        let ids: Vec<String> = self.vertices.into_keys().collect();
        let index: HashMap<String, VertexIndex> = ids
            .iter()
            .enumerate()
            .map(|(i, id)| (id.clone(), i as VertexIndex))
            .collect();
        let raw: Vec<(VertexIndex, VertexIndex)> = self
            .edge_list
            .iter()
            .map(|(s, d)| (index[s], index[d]))
            .collect();
        let mut order: Vec<usize> = (0..raw.len()).collect();
        order.sort_unstable_by_key(|&i| raw[i]);
        let edges: Vec<_> = order.iter().map(|&i| raw[i]).collect();

        let vertex_attrs = self
            .vertex_attrs
            .into_iter()
            .map(|(key, (ty, mut vals))| {
                let values = ids.iter().map(|id| vals.remove(id)).collect();
                (key, AttrColumn { ty, values })
            })
            .collect();
        let edge_attrs = self
            .edge_attrs
            .into_iter()
            .map(|(key, (ty, mut vals))| {
                let values = order.iter().map(|i| vals.remove(i)).collect();
                (key, AttrColumn { ty, values })
            })
            .collect();
        Ok(PropertyDigraph::assemble(
            ids,
            index,
            edges,
            vertex_attrs,
            edge_attrs,
        ))
    }
}

fn check_type(key: &str, expected: AttrType, value: &AttributeValue) -> Result<(), GraphError> {
    let found = value.attr_type();
    if found != expected {
        return Err(GraphError::AttributeTypeConflict {
            key: key.to_string(),
            expected,
            found,
        });
    }
    Ok(())
}

/// Builds a graph from identifier pairs; convenient in tests and generators.
pub fn graph_from_edges<S: AsRef<str>>(edges: &[(S, S)]) -> Result<PropertyDigraph, GraphError> {
    let mut b = GraphBuilder::new();
    for (s, d) in edges {
        b.add_edge(s.as_ref(), d.as_ref())?;
    }
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_sequences_of_path() {
        let g = graph_from_edges(&[("1", "2"), ("2", "3")]).unwrap();
        let (ins, outs) = g.degree_sequences();
        let m = |pairs: &[(&str, usize)]| {
            pairs
                .iter()
                .map(|(k, v)| (k.to_string(), *v))
                .collect::<BTreeMap<_, _>>()
        };
        assert_eq!(ins, m(&[("1", 0), ("2", 1), ("3", 1)]));
        assert_eq!(outs, m(&[("1", 1), ("2", 1), ("3", 0)]));
    }

    #[test]
    fn degree_sequences_of_empty_graph() {
        let (ins, outs) = PropertyDigraph::empty().degree_sequences();
        assert!(ins.is_empty() && outs.is_empty());
    }

    #[test]
    fn degree_sequences_of_cycle() {
        let g = graph_from_edges(&[("1", "2"), ("2", "3"), ("3", "1")]).unwrap();
        let (ins, outs) = g.degree_sequences();
        assert!(ins.values().chain(outs.values()).all(|&d| d == 1));
    }

    #[test]
    fn builder_rejects_self_loops_and_collapses_duplicates() {
        let mut b = GraphBuilder::new();
        assert!(b.add_edge("a", "b").unwrap());
        assert!(!b.add_edge("a", "b").unwrap());
        assert_eq!(b.add_edge("c", "c"), Err(GraphError::SelfLoop("c".into())));
        assert_eq!(b.duplicate_count(), 1);
        let g = b.build().unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn index_order_follows_identifier_order() {
        let g = graph_from_edges(&[("b", "a"), ("10", "2")]).unwrap();
        assert_eq!(g.ids(), ["10", "2", "a", "b"]);
        assert_eq!(g.edges(), &[(0, 1), (3, 2)]);
        assert!(g.has_edge(3, 2));
        assert!(!g.has_edge(2, 3));
    }

    #[test]
    fn attribute_type_conflicts_are_rejected() {
        let mut b = GraphBuilder::new();
        b.add_edge("a", "b").unwrap();
        b.set_vertex_attr("a", "t", "x".into()).unwrap();
        assert!(matches!(
            b.set_vertex_attr("b", "t", 3.into()),
            Err(GraphError::AttributeTypeConflict { .. })
        ));
        assert_eq!(
            b.set_vertex_attr("zz", "t", "x".into()),
            Err(GraphError::AttributeForUnknownVertex("zz".into()))
        );
    }
}
