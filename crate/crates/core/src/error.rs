use thiserror::Error;

use crate::formats::ParseError;
use crate::spectral::SpectralError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error(
        "hyperedge {edge} references vertex {vertex}, but there are only {vertex_count} vertices"
    )]
    VertexOutOfRange {
        edge: usize,
        vertex: usize,
        vertex_count: usize,
    },

    #[error("{kind} weight {index} is {value}; weights must be finite and nonnegative")]
    InvalidWeight {
        kind: &'static str,
        index: usize,
        value: f64,
    },

    #[error("expected {expected} {kind} weights, got {got}")]
    WeightCount {
        kind: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("vertex {vertex} is assigned to part {part}, but k = {k}")]
    PartOutOfRange {
        vertex: usize,
        part: usize,
        k: usize,
    },

    #[error("partition has {got} entries, hypergraph has {expected} vertices")]
    PartitionLength { expected: usize, got: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{0}")]
    Validation(String),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error(transparent)]
    Spectral(#[from] SpectralError),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
