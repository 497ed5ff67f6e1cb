//! Readers and writers for MatrixMarket, hMetis `.hgr`, and partition files.

mod hgr;
mod mtx;
mod partfile;

use std::fmt;

pub use hgr::{parse_hgr, write_hgr};
pub use mtx::{parse_matrix_market, rownet_hypergraph, SparsePattern};
pub use partfile::{read_partition, write_partition};

/// Parse failure with the 1-based line it occurred on (0 when the input
/// ended early).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(line: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "parse error at end of input: {}", self.message)
        } else {
            write!(f, "parse error on line {}: {}", self.line, self.message)
        }
    }
}

impl std::error::Error for ParseError {}

/// Numbered lines of a reader, with I/O errors surfaced as parse errors.
pub(crate) fn numbered_lines<R: std::io::BufRead>(
    reader: R,
) -> impl Iterator<Item = Result<(usize, String), ParseError>> {
    reader.lines().enumerate().map(|(i, line)| {
        line.map(|l| (i + 1, l))
            .map_err(|e| ParseError::new(i + 1, e.to_string()))
    })
}

/// Reads a hypergraph from `.hgr` or, for `.mtx`, as the row-net model of
/// the matrix.
pub fn read_hypergraph(path: &std::path::Path) -> crate::Result<crate::Hypergraph> {
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .map(str::to_ascii_lowercase);
    let reader = std::io::BufReader::new(std::fs::File::open(path)?);
    match ext.as_deref() {
        Some("hgr") => Ok(parse_hgr(reader)?),
        Some("mtx") => Ok(rownet_hypergraph(&parse_matrix_market(reader)?)),
        _ => Err(crate::Error::Validation(format!(
            "{}: unknown input format, expected .hgr or .mtx",
            path.display()
        ))),
    }
}
