//! Motif queries and their textual form.
//!
//! A motif file holds one statement per line (or several separated by `;`):
//!
//! ```text
//! # feed-forward loop with a typed source
//! A -> B
//! B -> C
//! A -> C
//! C !> A
//! A.type = "KC"
//! ```
//!
//! `X -> Y` requires a host edge X→Y, `X - Y` requires an edge in at least
//! one direction, `X !> Y` forbids X→Y. `X.key OP value` constrains a vertex
//! attribute, with OP one of `=`, `!=`, `<`, `<=`, `>`, `>=` and values written
//! as double-quoted strings, integers, floats or `true`/`false`.

mod canon;
mod parser;

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::attr::AttributeValue;

pub use canon::{automorphism_count, canonical_form, symmetry_count, CanonicalLabel};
pub use parser::parse_motif;

/// Largest supported motif.
pub const MAX_MOTIF_SIZE: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MotifError {
    #[error("syntax error at line {line}, column {column}: expected {expected}")]
    Syntax {
        line: usize,
        column: usize,
        expected: String,
    },
    #[error("contradictory edge constraints between {0} and {1}")]
    ContradictoryEdges(String, String),
    #[error("motif is not weakly connected")]
    DisconnectedMotif,
    #[error("predicate refers to vertex {0} which has no edge constraint")]
    UnknownVertexInPredicate(String),
    #[error("motif has {0} vertices; at most {MAX_MOTIF_SIZE} are supported")]
    MotifTooLarge(usize),
    #[error("motif has no edge constraints")]
    EmptyMotif,
    #[error("edge constraint from {0} to itself")]
    SelfEdge(String),
    #[error("ordering comparison on {vertex}.{key} needs a numeric value")]
    NonNumericOrdering { vertex: String, key: String },
    #[error("invalid vertex name {0:?}")]
    InvalidName(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EdgeKind {
    Directed,
    Undirected,
    Forbidden,
}

impl EdgeKind {
    pub fn symbol(self) -> &'static str {
        match self {
            EdgeKind::Directed => "->",
            EdgeKind::Undirected => "-",
            EdgeKind::Forbidden => "!>",
        }
    }
}

/// An edge constraint between two template vertices, by position in
/// [`MotifQuery::vertices`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EdgeConstraint {
    pub src: usize,
    pub dst: usize,
    pub kind: EdgeKind,
}

impl EdgeConstraint {
    pub fn new(src: usize, dst: usize, kind: EdgeKind) -> Self {
        EdgeConstraint { src, dst, kind }
    }

    /// Directed and undirected constraints demand an edge; forbidden ones don't.
    pub fn is_structural(&self) -> bool {
        self.kind != EdgeKind::Forbidden
    }

    fn same_as(&self, other: &EdgeConstraint) -> bool {
        self.kind == other.kind
            && ((self.src, self.dst) == (other.src, other.dst)
                || (self.kind == EdgeKind::Undirected
                    && (self.src, self.dst) == (other.dst, other.src)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }

    pub fn is_ordering(self) -> bool {
        !matches!(self, CmpOp::Eq | CmpOp::Ne)
    }

    /// Evaluates `host OP value`. Ordering across incomparable types is false;
    /// callers validate column types up front.
    pub fn eval(self, host: &AttributeValue, value: &AttributeValue) -> bool {
        use std::cmp::Ordering::*;
        match self {
            CmpOp::Eq => host.matches_eq(value),
            CmpOp::Ne => !host.matches_eq(value),
            _ => match host.try_compare(value) {
                Ok(ord) => match self {
                    CmpOp::Lt => ord == Less,
                    CmpOp::Le => ord != Greater,
                    CmpOp::Gt => ord == Greater,
                    CmpOp::Ge => ord != Less,
                    CmpOp::Eq | CmpOp::Ne => unreachable!(),
                },
                Err(_) => false,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AttributePredicate {
    pub vertex: usize,
    pub key: String,
    pub op: CmpOp,
    pub value: AttributeValue,
}

/// A validated motif: template vertices, edge constraints, vertex predicates
/// and the induced-matching flag.
#[derive(Debug, Clone, PartialEq)]
pub struct MotifQuery {
    vertices: Vec<String>,
    edges: Vec<EdgeConstraint>,
    predicates: Vec<AttributePredicate>,
    induced: bool,
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl MotifQuery {
    /// Validates and normalises a query. Exact duplicate constraints and
    /// predicates are dropped; every other invariant violation is an error.
    pub fn new(
        vertices: Vec<String>,
        edges: Vec<EdgeConstraint>,
        predicates: Vec<AttributePredicate>,
        induced: bool,
    ) -> Result<Self, MotifError> {
        let n = vertices.len();
        if edges.is_empty() || n == 0 {
            return Err(MotifError::EmptyMotif);
        }
        if n > MAX_MOTIF_SIZE {
            return Err(MotifError::MotifTooLarge(n));
        }
        let mut seen = HashSet::new();
        for v in &vertices {
            if !is_identifier(v) || !seen.insert(v.as_str()) {
                return Err(MotifError::InvalidName(v.clone()));
            }
        }

        let mut kept: Vec<EdgeConstraint> = Vec::with_capacity(edges.len());
        for e in edges {
            assert!(e.src < n && e.dst < n, "edge constraint index out of range");
            if e.src == e.dst {
                return Err(MotifError::SelfEdge(vertices[e.src].clone()));
            }
            if kept.iter().any(|k| k.same_as(&e)) {
                continue;
            }
            let has = |kind: EdgeKind, s: usize, d: usize| {
                kept.iter()
                    .any(|k| k.kind == kind && k.src == s && k.dst == d)
            };
            let undirected = |a: usize, b: usize| {
                has(EdgeKind::Undirected, a, b) || has(EdgeKind::Undirected, b, a)
            };
            let (a, b) = (e.src, e.dst);
            let clash = match e.kind {
                EdgeKind::Directed => has(EdgeKind::Forbidden, a, b) || undirected(a, b),
                EdgeKind::Undirected => {
                    has(EdgeKind::Directed, a, b)
                        || has(EdgeKind::Directed, b, a)
                        || (has(EdgeKind::Forbidden, a, b) && has(EdgeKind::Forbidden, b, a))
                }
                EdgeKind::Forbidden => {
                    has(EdgeKind::Directed, a, b) || (undirected(a, b) && has(EdgeKind::Forbidden, b, a))
                }
            };
            if clash {
                return Err(MotifError::ContradictoryEdges(
                    vertices[a].clone(),
                    vertices[b].clone(),
                ));
            }
            kept.push(e);
        }

        let mut preds: Vec<AttributePredicate> = Vec::with_capacity(predicates.len());
        for p in predicates {
            assert!(p.vertex < n, "predicate index out of range");
            if p.op.is_ordering() && !p.value.attr_type().is_numeric() {
                return Err(MotifError::NonNumericOrdering {
                    vertex: vertices[p.vertex].clone(),
                    key: p.key,
                });
            }
            if !preds.contains(&p) {
                preds.push(p);
            }
        }

        let q = MotifQuery {
            vertices,
            edges: kept,
            predicates: preds,
            induced,
        };
        if !q.is_connected() {
            return Err(MotifError::DisconnectedMotif);
        }
        Ok(q)
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn size(&self) -> usize {
        self.vertices.len()
    }

    pub fn edges(&self) -> &[EdgeConstraint] {
        &self.edges
    }

    pub fn predicates(&self) -> &[AttributePredicate] {
        &self.predicates
    }

    pub fn induced(&self) -> bool {
        self.induced
    }

    pub fn with_induced(mut self, induced: bool) -> Self {
        self.induced = induced;
        self
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn has_undirected(&self) -> bool {
        self.edges.iter().any(|e| e.kind == EdgeKind::Undirected)
    }

    /// Structural constraints (directed or undirected) touching `v`.
    pub fn constraint_degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .filter(|e| e.is_structural() && (e.src == v || e.dst == v))
            .count()
    }

    /// Number of structural constraints.
    pub fn structural_edge_count(&self) -> usize {
        self.edges.iter().filter(|e| e.is_structural()).count()
    }

    pub fn has_constraint(&self, src: usize, dst: usize, kind: EdgeKind) -> bool {
        self.edges.iter().any(|e| {
            e.kind == kind
                && ((e.src, e.dst) == (src, dst)
                    || (kind == EdgeKind::Undirected && (e.dst, e.src) == (src, dst)))
        })
    }

    /// True when the two vertices share any structural constraint.
    pub fn linked(&self, a: usize, b: usize) -> bool {
        self.edges.iter().any(|e| {
            e.is_structural() && ((e.src, e.dst) == (a, b) || (e.src, e.dst) == (b, a))
        })
    }

    fn is_connected(&self) -> bool {
        let n = self.vertices.len();
        let mut reached = vec![false; n];
        let mut stack = vec![0];
        reached[0] = true;
        while let Some(v) = stack.pop() {
            for e in self.edges.iter().filter(|e| e.is_structural()) {
                let other = if e.src == v {
                    e.dst
                } else if e.dst == v {
                    e.src
                } else {
                    continue;
                };
                if !reached[other] {
                    reached[other] = true;
                    stack.push(other);
                }
            }
        }
        reached.into_iter().all(|r| r)
    }

    /// The source text, one statement per line, edges before predicates.
    pub fn to_source(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for MotifQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.edges {
            writeln!(
                f,
                "{} {} {}",
                self.vertices[e.src],
                e.kind.symbol(),
                self.vertices[e.dst]
            )?;
        }
        for p in &self.predicates {
            writeln!(
                f,
                "{}.{} {} {}",
                self.vertices[p.vertex],
                p.key,
                p.op.symbol(),
                p.value
            )?;
        }
        Ok(())
    }
}

/// Names used for generated motifs: `A`, `B`, ... .
pub fn vertex_name(i: usize) -> String {
    assert!(i < 26, "generated motifs use single-letter names");
    char::from(b'A' + i as u8).to_string()
}
