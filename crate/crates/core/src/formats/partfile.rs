use std::io::{BufRead, Write};

use super::{numbered_lines, ParseError};

/// One part id per line, in vertex order.
pub fn write_partition<W: Write>(parts: &[usize], mut out: W) -> std::io::Result<()> {
    for p in parts {
        writeln!(out, "{p}")?;
    }
    out.flush()
}

pub fn read_partition<R: BufRead>(reader: R) -> Result<Vec<usize>, ParseError> {
    let mut parts = Vec::new();
    for item in numbered_lines(reader) {
        let (line_no, line) = item?;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        parts.push(
            t.parse()
                .map_err(|_| ParseError::new(line_no, format!("invalid part id '{t}'")))?,
        );
    }
    Ok(parts)
}
