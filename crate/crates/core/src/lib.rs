//! Discovery of over-represented subgraph motifs in directed, attributed
//! graphs such as neuron-synapse connectomes.
//!
//! The pieces, bottom-up:
//!
//! - [`graph`] / [`io`]: the host graph and its CSV formats.
//! - [`dsl`]: motif queries, their text form and canonical labels.
//! - [`engine`]: parallel monomorphism counting and enumeration.
//! - [`nullmodel`]: degree-preserving edge-swap randomisation.
//! - [`stats`]: z-scores and empirical p-values against a null ensemble.
//! - [`discovery`]: greedy growth of significant motifs from undirected seeds.

pub mod attr;
pub mod discovery;
pub mod dsl;
pub mod engine;
pub mod generators;
pub mod graph;
pub mod io;
pub mod nullmodel;
pub mod rng;
pub mod stats;

pub use attr::{AttrType, AttributeValue};
pub use dsl::{parse_motif, MotifError, MotifQuery};
pub use engine::{count_monomorphisms, enumerate_monomorphisms, MatchResult, SearchOptions};
pub use graph::{PropertyDigraph, VertexIndex};
