//! graph6 encoding restricted to the single-byte size header (`n <= 62`).
//!
//! Layout: one header byte `n + 63`, then the upper triangle of the
//! adjacency matrix in column-major order `x(0,1), x(0,2), x(1,2), x(0,3), ...`
//! packed six bits per byte (most significant first), each group offset by
//! 63. The final group is zero-padded.

use crate::error::{Error, Result};
use crate::graph::{edge_slots, Graph};

pub const MAX_VERTICES: usize = 62;

const OFFSET: u8 = 63;

/// Decodes one graph6 line. A single trailing `\n` or `\r\n` is tolerated.
pub fn parse_graph6(text: &str) -> Result<Graph> {
    let line = text.strip_suffix('\n').unwrap_or(text);
    let line = line.strip_suffix('\r').unwrap_or(line);
    let bytes = line.as_bytes();

    let header = *bytes.first().ok_or_else(|| Error::Parse {
        offset: 0,
        reason: "empty input, expected a size header".into(),
    })?;
    if !(OFFSET..=126).contains(&header) {
        return Err(Error::Parse {
            offset: 0,
            reason: format!("byte 0x{header:02x} is not a valid graph6 size header"),
        });
    }
    if header == 126 {
        return Err(Error::Parse {
            offset: 0,
            reason: "multi-byte size headers (n > 62) are not supported".into(),
        });
    }
    let n = (header - OFFSET) as usize;
    let slots = edge_slots(n);
    let body_len = slots.div_ceil(6);

    for (i, &b) in bytes.iter().enumerate().skip(1) {
        if !(OFFSET..=126).contains(&b) {
            return Err(Error::Parse {
                offset: i,
                reason: format!("byte 0x{b:02x} is outside the printable graph6 range"),
            });
        }
    }
    if bytes.len() < 1 + body_len {
        return Err(Error::Parse {
            offset: bytes.len(),
            reason: format!(
                "truncated input: {n} vertices need {body_len} data bytes, found {}",
                bytes.len() - 1
            ),
        });
    }
    if bytes.len() > 1 + body_len {
        return Err(Error::Parse {
            offset: 1 + body_len,
            reason: "trailing bytes after the edge data".into(),
        });
    }

    let body = &bytes[1..];
    let bit = |i: usize| (body[i / 6] - OFFSET) >> (5 - i % 6) & 1 == 1;
    for i in slots..body_len * 6 {
        if bit(i) {
            return Err(Error::Parse {
                offset: 1 + i / 6,
                reason: "non-zero padding bits".into(),
            });
        }
    }

    let mut g = Graph::empty(n);
    let mut i = 0;
    for v in 1..n {
        for u in 0..v {
            if bit(i) {
                g.add_edge(u, v)?;
            }
            i += 1;
        }
    }
    Ok(g)
}

/// Encodes a graph with at most [`MAX_VERTICES`] vertices.
pub fn encode_graph6(g: &Graph) -> Result<String> {
    let n = g.n();
    if n > MAX_VERTICES {
        return Err(Error::UnsupportedSize { n });
    }
    let mut out = Vec::with_capacity(1 + edge_slots(n).div_ceil(6));
    out.push(n as u8 + OFFSET);

    let mut group = 0u8;
    let mut filled = 0;
    for v in 1..n {
        for u in 0..v {
            group = group << 1 | g.has_edge(u, v) as u8;
            filled += 1;
            if filled == 6 {
                out.push(group + OFFSET);
                group = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((group << (6 - filled)) + OFFSET);
    }
    Ok(String::from_utf8(out).expect("graph6 bytes are ASCII"))
}
