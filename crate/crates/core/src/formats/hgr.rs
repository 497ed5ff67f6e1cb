use std::io::{BufRead, Write};

use super::{numbered_lines, ParseError};
use crate::error::Result;
use crate::hypergraph::Hypergraph;

/// Reads an hMetis hypergraph file.
///
/// The first non-comment line is `|E| |V| [fmt]` where `fmt` is `1` (edge
/// weights), `10` (vertex weights) or `11` (both). Vertex ids are 1-based.
/// Lines starting with `%` are comments.
pub fn parse_hgr<R: BufRead>(reader: R) -> Result<Hypergraph, ParseError> {
    let mut lines = numbered_lines(reader).filter(|item| match item {
        Ok((_, l)) => {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('%')
        }
        Err(_) => true,
    });

    let (line_no, header) = lines
        .next()
        .ok_or_else(|| ParseError::new(0, "missing header line"))??;
    let head: Vec<&str> = header.split_whitespace().collect();
    if head.len() < 2 || head.len() > 3 {
        return Err(ParseError::new(line_no, "header must be '|E| |V| [fmt]'"));
    }
    let m = parse_count(line_no, head[0])?;
    let n = parse_count(line_no, head[1])?;
    let (edge_weighted, vertex_weighted) = match head.get(2).copied() {
        None | Some("0") => (false, false),
        Some("1") => (true, false),
        Some("10") => (false, true),
        Some("11") => (true, true),
        Some(other) => {
            return Err(ParseError::new(
                line_no,
                format!("unknown fmt code '{other}'"),
            ))
        }
    };

    let mut pins = Vec::with_capacity(m);
    let mut edge_weights = Vec::with_capacity(m);
    for e in 0..m {
        let (line_no, line) = lines.next().ok_or_else(|| {
            ParseError::new(0, format!("header declares {m} hyperedges, found {e}"))
        })??;
        let mut tokens = line.split_whitespace();
        let w = if edge_weighted {
            let tok = tokens
                .next()
                .ok_or_else(|| ParseError::new(line_no, "missing hyperedge weight"))?;
            parse_weight(line_no, tok)?
        } else {
            1.0
        };
        let edge = tokens
            .map(|tok| {
                let id: usize = tok
                    .parse()
                    .map_err(|_| ParseError::new(line_no, format!("invalid vertex id '{tok}'")))?;
                if id == 0 || id > n {
                    return Err(ParseError::new(
                        line_no,
                        format!("vertex id {id} outside 1..={n}"),
                    ));
                }
                Ok(id - 1)
            })
            .collect::<Result<Vec<_>, _>>()?;
        pins.push(edge);
        edge_weights.push(w);
    }

    let mut vertex_weights = vec![1.0; n];
    if vertex_weighted {
        for (v, slot) in vertex_weights.iter_mut().enumerate() {
            let (line_no, line) = lines.next().ok_or_else(|| {
                ParseError::new(0, format!("expected {n} vertex weights, found {v}"))
            })??;
            let t = line.trim();
            if t.split_whitespace().count() != 1 {
                return Err(ParseError::new(line_no, "expected a single vertex weight"));
            }
            *slot = parse_weight(line_no, t)?;
        }
    }

    if let Some(extra) = lines.next() {
        let (line_no, _) = extra?;
        return Err(ParseError::new(line_no, "unexpected trailing line"));
    }

    Hypergraph::new(&pins, vertex_weights, edge_weights)
        .map_err(|e| ParseError::new(0, e.to_string()))
}

/// Writes `h` in hMetis format. The fmt code is chosen from whether any
/// weight differs from 1; weights use the shortest round-tripping decimal.
pub fn write_hgr<W: Write>(h: &Hypergraph, mut out: W) -> std::io::Result<()> {
    let edge_weighted = h.edge_weights().iter().any(|&w| w != 1.0);
    let vertex_weighted = h.vertex_weights().iter().any(|&w| w != 1.0);
    write!(out, "{} {}", h.edge_count(), h.vertex_count())?;
    match (edge_weighted, vertex_weighted) {
        (false, false) => writeln!(out)?,
        (true, false) => writeln!(out, " 1")?,
        (false, true) => writeln!(out, " 10")?,
        (true, true) => writeln!(out, " 11")?,
    }
    for e in 0..h.edge_count() {
        let mut first = true;
        if edge_weighted {
            write!(out, "{}", h.edge_weight(e))?;
            first = false;
        }
        for &v in h.pins(e) {
            if !first {
                out.write_all(b" ")?;
            }
            write!(out, "{}", v + 1)?;
            first = false;
        }
        writeln!(out)?;
    }
    if vertex_weighted {
        for &w in h.vertex_weights() {
            writeln!(out, "{w}")?;
        }
    }
    Ok(())
}

fn parse_count(line_no: usize, tok: &str) -> Result<usize, ParseError> {
    tok.parse()
        .map_err(|_| ParseError::new(line_no, format!("invalid count '{tok}'")))
}

fn parse_weight(line_no: usize, tok: &str) -> Result<f64, ParseError> {
    let w: f64 = tok
        .parse()
        .map_err(|_| ParseError::new(line_no, format!("invalid weight '{tok}'")))?;
    if !(w.is_finite() && w > 0.0) {
        return Err(ParseError::new(
            line_no,
            format!("weight {tok} must be positive"),
        ));
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn parse(text: &str) -> Result<Hypergraph, ParseError> {
        parse_hgr(text.as_bytes())
    }

    #[test]
    fn plain_file() {
        let h = parse("2 3\n1 2\n2 3\n").unwrap();
        assert_eq!(h.vertex_count(), 3);
        assert_eq!(h.pin_lists(), vec![vec![0, 1], vec![1, 2]]);
        assert_eq!(h.edge_weights(), &[1.0, 1.0]);
    }

    #[test]
    fn edge_weighted_file() {
        let h = parse("2 3 1\n5 1 2\n4 2 3\n").unwrap();
        assert_eq!(h.edge_weights(), &[5.0, 4.0]);
    }

    #[test]
    fn vertex_weighted_file_with_comments() {
        let h = parse("% comment\n1 3 10\n1 2 3\n2\n1\n0.5\n").unwrap();
        assert_eq!(h.vertex_weights(), &[2.0, 1.0, 0.5]);
    }

    #[test]
    fn errors() {
        assert!(parse("3 3\n1 2\n2 3\n").is_err());
        assert_eq!(parse("1 3\n1 4\n").unwrap_err().line, 2);
        assert_eq!(parse("1 3 1\n0 1 2\n").unwrap_err().line, 2);
        assert_eq!(parse("1 3 1\n-2 1 2\n").unwrap_err().line, 2);
        assert_eq!(parse("1 3\n1 2\n1 3\n").unwrap_err().line, 3);
        assert!(parse("1 3 7\n1 2\n").is_err());
        assert!(parse("").is_err());
    }

    #[test]
    fn writes_expected_text() {
        let h = parse("2 3 1\n5 1 2\n4 2 3\n").unwrap();
        let mut buf = Vec::new();
        write_hgr(&h, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "2 3 1\n5 1 2\n4 2 3\n");
    }

    proptest! {
        #[test]
        fn round_trip_is_exact(
            n in 2usize..10,
            edges in prop::collection::vec(prop::collection::vec(0usize..10, 2..5), 0..8),
            weights in prop::collection::vec(prop_oneof![Just(1.0), 0.1f64..10.0], 18),
        ) {
            let edges: Vec<Vec<usize>> =
                edges.into_iter().map(|e| e.into_iter().map(|v| v % n).collect()).collect();
            let m = edges.len();
            let h = Hypergraph::new(&edges, weights[..n].to_vec(), weights[8..8 + m].to_vec())
                .unwrap();
            let mut first = Vec::new();
            write_hgr(&h, &mut first).unwrap();
            let back = parse_hgr(first.as_slice()).unwrap();
            prop_assert_eq!(&back, &h);
            let mut second = Vec::new();
            write_hgr(&back, &mut second).unwrap();
            prop_assert_eq!(first, second);
        }
    }
}
