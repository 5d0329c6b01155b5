//! graph6 encoding of simple graphs.
//!
//! Reference: <https://users.cecs.anu.edu.au/~bdm/data/formats.txt>. All three
//! size prefixes (1, 4 and 8 bytes) are accepted and produced. The optional
//! `>>graph6<<` header is stripped on input.

use crate::graph::Graph;

const HEADER: &str = ">>graph6<<";
const MAX_N: u64 = (1 << 36) - 1;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("graph6 error at byte {offset}: {kind}")]
pub struct Graph6Error {
    pub offset: usize,
    pub kind: Graph6ErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Graph6ErrorKind {
    #[error("empty input")]
    Empty,
    #[error("byte {0:#04x} outside the printable range 63..=126")]
    BadByte(u8),
    #[error("truncated size header")]
    TruncatedHeader,
    #[error("expected {expected} data bytes, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error("trailing data after the adjacency bits")]
    TrailingGarbage,
    #[error("nonzero padding bits")]
    NonzeroPadding,
    #[error("vertex count {0} too large for graph6")]
    TooLarge(u64),
}

fn fail(offset: usize, kind: Graph6ErrorKind) -> Graph6Error {
    Graph6Error { offset, kind }
}

/// Decodes one graph6 line. Surrounding whitespace is ignored.
pub fn parse_graph6(text: &str) -> Result<Graph, Graph6Error> {
    let mut bytes = text.trim_end_matches(['\n', '\r']).as_bytes();
    let mut base = 0;
    if bytes.starts_with(HEADER.as_bytes()) {
        bytes = &bytes[HEADER.len()..];
        base = HEADER.len();
    }
    if bytes.is_empty() {
        return Err(fail(base, Graph6ErrorKind::Empty));
    }
    let mut six = Vec::with_capacity(bytes.len());
    for (i, &b) in bytes.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(fail(base + i, Graph6ErrorKind::BadByte(b)));
        }
        six.push(b - 63);
    }

    let (n, header_len) = if six[0] != 63 {
        (six[0] as u64, 1)
    } else if six.len() >= 2 && six[1] != 63 {
        if six.len() < 4 {
            return Err(fail(base + six.len(), Graph6ErrorKind::TruncatedHeader));
        }
        (fold6(&six[1..4]), 4)
    } else {
        if six.len() < 8 {
            return Err(fail(base + six.len(), Graph6ErrorKind::TruncatedHeader));
        }
        (fold6(&six[2..8]), 8)
    };
    let n = usize::try_from(n).map_err(|_| fail(base, Graph6ErrorKind::TooLarge(n)))?;

    let bits = n * n.saturating_sub(1) / 2;
    let expected = bits.div_ceil(6);
    let data = &six[header_len..];
    if data.len() < expected {
        return Err(fail(
            base + six.len(),
            Graph6ErrorKind::Truncated {
                expected,
                found: data.len(),
            },
        ));
    }
    if data.len() > expected {
        return Err(fail(
            base + header_len + expected,
            Graph6ErrorKind::TrailingGarbage,
        ));
    }

    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if data[k / 6] >> (5 - k % 6) & 1 == 1 {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    if k % 6 != 0 {
        let mask = (1u8 << (6 - k % 6)) - 1;
        if data[k / 6] & mask != 0 {
            return Err(fail(base + header_len + k / 6, Graph6ErrorKind::NonzeroPadding));
        }
    }
    Ok(Graph::from_edges(n, edges).expect("decoded edges are in range"))
}

fn fold6(digits: &[u8]) -> u64 {
    digits.iter().fold(0u64, |acc, &d| acc << 6 | d as u64)
}

/// Encodes `g` without the optional header or trailing newline.
pub fn write_graph6(g: &Graph) -> Result<String, Graph6Error> {
    let n = g.n() as u64;
    if n > MAX_N {
        return Err(fail(0, Graph6ErrorKind::TooLarge(n)));
    }
    let mut six: Vec<u8> = Vec::new();
    if n <= 62 {
        six.push(n as u8);
    } else if n <= 258_047 {
        six.push(63);
        six.extend((0..3).rev().map(|s| (n >> (6 * s) & 63) as u8));
    } else {
        six.extend([63, 63]);
        six.extend((0..6).rev().map(|s| (n >> (6 * s) & 63) as u8));
    }
    let mut acc = 0u8;
    let mut k = 0;
    for j in 1..g.n() {
        for i in 0..j {
            acc = acc << 1 | g.has_edge(i, j) as u8;
            k += 1;
            if k % 6 == 0 {
                six.push(acc);
                acc = 0;
            }
        }
    }
    if k % 6 != 0 {
        six.push(acc << (6 - k % 6));
    }
    Ok(six.into_iter().map(|d| (d + 63) as char).collect())
}

/// One parsed line of a multi-graph file.
#[derive(Debug)]
pub struct Graph6Line {
    /// 1-based line number.
    pub line: usize,
    pub result: Result<Graph, Graph6Error>,
}

/// Parses every non-blank line; failures stay attached to their line.
pub fn parse_graph6_lines(text: &str) -> Vec<Graph6Line> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| Graph6Line {
            line: i + 1,
            result: parse_graph6(l.trim()),
        })
        .collect()
}
