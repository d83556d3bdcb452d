//! Kernelization toolkit for Dominating Set and Vertex Cover on embedded
//! planar graphs.
//!
//! The pipeline stages are: parsing and validation of rotation-system graphs
//! ([`graph`]), BFS-level splitting with exact bounded-treewidth dynamic
//! programming for (1+eps)-approximation ([`baker`]), compressed region
//! decompositions ([`regions`]), the gadget-overlay Rule I / Rule II kernel
//! ([`alber`]), the region-based linear kernels ([`scheme`]), and brute-force
//! ground truth on small instances ([`oracle`]).

pub mod alber;
pub mod baker;
pub mod gen;
pub mod graph;
pub mod oracle;
pub mod regions;
pub mod scheme;
pub mod treedec;

mod par;

pub use graph::{PlanarGraph, SpaceLedger, VertexStream};

use thiserror::Error;

/// Errors shared across pipeline stages.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invariant violation: {0}")]
    Invariant(String),
    #[error("parameter out of range: {0}")]
    Parameter(String),
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("width bound failure: {0}")]
    WidthBound(String),
    #[error("bound violation: {0}")]
    BoundViolation(String),
    #[error("distance property violation: {0}")]
    DistanceProperty(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
