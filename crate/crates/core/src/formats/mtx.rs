use std::io::BufRead;

use super::{numbered_lines, ParseError};
use crate::hypergraph::Hypergraph;

/// Nonzero pattern of a sparse matrix. Entries are 0-based, sorted, and
/// unique.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsePattern {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize)>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Field {
    Pattern,
    Real,
    Integer,
    Complex,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Symmetry {
    General,
    Symmetric,
    Skew,
    Hermitian,
}

/// Reads a coordinate MatrixMarket file, keeping only the nonzero pattern.
///
/// Symmetric, skew-symmetric and hermitian storage is expanded to both
/// triangles. Explicit zeros are dropped and duplicates merged.
pub fn parse_matrix_market<R: BufRead>(reader: R) -> Result<SparsePattern, ParseError> {
    let mut lines = numbered_lines(reader);

    let (line_no, header) = lines
        .next()
        .ok_or_else(|| ParseError::new(0, "empty input"))??;
    let (field, symmetry) = parse_header(line_no, &header)?;

    let mut size = None;
    for item in lines.by_ref() {
        let (line_no, line) = item?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('%') {
            continue;
        }
        let nums = parse_usizes(line_no, t, 3)?;
        size = Some((nums[0], nums[1], nums[2]));
        break;
    }
    let (rows, cols, declared) = size.ok_or_else(|| ParseError::new(0, "missing size line"))?;

    let value_tokens = match field {
        Field::Pattern => 0,
        Field::Real | Field::Integer => 1,
        Field::Complex => 2,
    };

    let mut entries = Vec::with_capacity(declared * 2);
    let mut seen = 0usize;
    for item in lines {
        let (line_no, line) = item?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('%') {
            continue;
        }
        if seen == declared {
            return Err(ParseError::new(
                line_no,
                format!("more than the declared {declared} entries"),
            ));
        }
        seen += 1;

        let tokens: Vec<&str> = t.split_whitespace().collect();
        if tokens.len() != 2 + value_tokens {
            return Err(ParseError::new(
                line_no,
                format!(
                    "expected {} fields, found {}",
                    2 + value_tokens,
                    tokens.len()
                ),
            ));
        }
        let i = parse_index(line_no, tokens[0], rows, "row")?;
        let j = parse_index(line_no, tokens[1], cols, "column")?;
        let mut zero = value_tokens > 0;
        for tok in &tokens[2..] {
            let value: f64 = tok
                .parse()
                .map_err(|_| ParseError::new(line_no, format!("invalid value '{tok}'")))?;
            zero &= value == 0.0;
        }
        if zero {
            continue;
        }
        entries.push((i, j));
        if symmetry != Symmetry::General && i != j {
            if j >= rows || i >= cols {
                return Err(ParseError::new(
                    line_no,
                    "symmetric storage requires a square matrix",
                ));
            }
            entries.push((j, i));
        }
    }
    if seen != declared {
        return Err(ParseError::new(
            0,
            format!("declared {declared} entries but found {seen}"),
        ));
    }

    entries.sort_unstable();
    entries.dedup();
    Ok(SparsePattern {
        rows,
        cols,
        entries,
    })
}

fn parse_header(line_no: usize, header: &str) -> Result<(Field, Symmetry), ParseError> {
    let tokens: Vec<String> = header
        .split_whitespace()
        .map(|t| t.to_ascii_lowercase())
        .collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" {
        return Err(ParseError::new(
            line_no,
            "header must be '%%MatrixMarket matrix coordinate <field> <symmetry>'",
        ));
    }
    if tokens[2] != "coordinate" {
        return Err(ParseError::new(
            line_no,
            format!(
                "unsupported format '{}', only coordinate is supported",
                tokens[2]
            ),
        ));
    }
    let field = match tokens[3].as_str() {
        "pattern" => Field::Pattern,
        "real" | "double" => Field::Real,
        "integer" => Field::Integer,
        "complex" => Field::Complex,
        other => return Err(ParseError::new(line_no, format!("unknown field '{other}'"))),
    };
    let symmetry = match tokens[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        "skew-symmetric" => Symmetry::Skew,
        "hermitian" => Symmetry::Hermitian,
        other => {
            return Err(ParseError::new(
                line_no,
                format!("unknown symmetry '{other}'"),
            ))
        }
    };
    Ok((field, symmetry))
}

fn parse_usizes(line_no: usize, text: &str, count: usize) -> Result<Vec<usize>, ParseError> {
    let nums: Vec<usize> = text
        .split_whitespace()
        .map(|t| {
            t.parse()
                .map_err(|_| ParseError::new(line_no, format!("invalid integer '{t}'")))
        })
        .collect::<Result<_, _>>()?;
    if nums.len() != count {
        return Err(ParseError::new(
            line_no,
            format!("expected {count} integers, found {}", nums.len()),
        ));
    }
    Ok(nums)
}

fn parse_index(line_no: usize, tok: &str, bound: usize, what: &str) -> Result<usize, ParseError> {
    let idx: usize = tok
        .parse()
        .map_err(|_| ParseError::new(line_no, format!("invalid {what} index '{tok}'")))?;
    if idx == 0 || idx > bound {
        return Err(ParseError::new(
            line_no,
            format!("{what} index {idx} outside 1..={bound}"),
        ));
    }
    Ok(idx - 1)
}

/// Row-net model: every row becomes a hyperedge over the columns holding a
/// nonzero in that row. Vertex and hyperedge weights are 1; rows with fewer
/// than two nonzeros vanish.
pub fn rownet_hypergraph(m: &SparsePattern) -> Hypergraph {
    let mut rows: Vec<Vec<usize>> = vec![Vec::new(); m.rows];
    for &(i, j) in &m.entries {
        rows[i].push(j);
    }
    Hypergraph::unweighted(m.cols, &rows).expect("pattern indices are within bounds")
}
