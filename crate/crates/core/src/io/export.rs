//! Graph export in graph6, DIMACS, edge CSV and JSON.

use std::fmt;
use std::str::FromStr;

use serde_json::json;

use crate::error::{Error, Result};
use crate::graph::SrgGraph;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Graph6,
    Dimacs,
    EdgeCsv,
    Json,
}

impl ExportFormat {
    pub const ALL: [ExportFormat; 4] = [
        ExportFormat::Graph6,
        ExportFormat::Dimacs,
        ExportFormat::EdgeCsv,
        ExportFormat::Json,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExportFormat::Graph6 => "graph6",
            ExportFormat::Dimacs => "dimacs",
            ExportFormat::EdgeCsv => "edge-csv",
            ExportFormat::Json => "json",
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            ExportFormat::Graph6 => "g6",
            ExportFormat::Dimacs => "dimacs",
            ExportFormat::EdgeCsv => "csv",
            ExportFormat::Json => "json",
        }
    }
}

impl fmt::Display for ExportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<ExportFormat> {
        ExportFormat::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::UnsupportedFormat(s.to_string()))
    }
}

pub fn export_graph(g: &SrgGraph, format: ExportFormat) -> Vec<u8> {
    match format {
        ExportFormat::Graph6 => encode_graph6(g),
        ExportFormat::Dimacs => encode_dimacs(g),
        ExportFormat::EdgeCsv => encode_edge_csv(g),
        ExportFormat::Json => encode_json(g),
    }
}

/// Looks the format up by name, then exports.
pub fn export_named(g: &SrgGraph, format: &str) -> Result<Vec<u8>> {
    Ok(export_graph(g, format.parse()?))
}

fn graph6_size(n: usize) -> Vec<u8> {
    if n <= 62 {
        vec![n as u8 + 63]
    } else if n <= 258_047 {
        vec![
            126,
            (n >> 12 & 63) as u8 + 63,
            (n >> 6 & 63) as u8 + 63,
            (n & 63) as u8 + 63,
        ]
    } else {
        let mut out = vec![126, 126];
        out.extend((0..6).rev().map(|k| (n >> (6 * k) & 63) as u8 + 63));
        out
    }
}

/// graph6 with a trailing newline: size field, then the upper triangle
/// column by column, six bits per byte, big-endian, offset by 63.
pub fn encode_graph6(g: &SrgGraph) -> Vec<u8> {
    let n = g.n();
    let mut out = graph6_size(n);
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = acc << 1 | g.is_adjacent(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    out.push(b'\n');
    out
}

pub fn decode_graph6(bytes: &[u8]) -> Result<SrgGraph> {
    let bad = |msg: &str| Error::Graph6(msg.to_string());
    let body = bytes.strip_suffix(b"\n").unwrap_or(bytes);
    if body.iter().any(|&b| !(63..=126).contains(&b)) {
        return Err(bad("byte outside 63..=126"));
    }
    let six = |bs: &[u8]| bs.iter().fold(0usize, |acc, &b| acc << 6 | (b - 63) as usize);
    let (n, data) = match body {
        [] => return Err(bad("empty input")),
        [126, 126, rest @ ..] if rest.len() >= 6 => (six(&rest[..6]), &rest[6..]),
        [126, rest @ ..] if rest.len() >= 3 && rest[0] != 126 => (six(&rest[..3]), &rest[3..]),
        [126, ..] => return Err(bad("truncated size field")),
        [first, rest @ ..] => ((first - 63) as usize, rest),
    };
    let bits = n * n.saturating_sub(1) / 2;
    if data.len() != bits.div_ceil(6) {
        return Err(Error::Graph6(format!(
            "expected {} data bytes for n = {n}, found {}",
            bits.div_ceil(6),
            data.len()
        )));
    }
    let bit = |k: usize| (data[k / 6] - 63) >> (5 - k % 6) & 1 == 1;
    if (bits..data.len() * 6).any(bit) {
        return Err(bad("nonzero padding"));
    }
    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if bit(k) {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    SrgGraph::from_edges(n, &edges)
}

/// DIMACS edge format with 1-based vertex ids.
pub fn encode_dimacs(g: &SrgGraph) -> Vec<u8> {
    let mut out = format!("p edge {} {}\n", g.n(), g.edge_count());
    for (u, v) in g.edges() {
        out.push_str(&format!("e {} {}\n", u + 1, v + 1));
    }
    out.into_bytes()
}

/// `u,v` rows with `u < v`, sorted, under a header line.
pub fn encode_edge_csv(g: &SrgGraph) -> Vec<u8> {
    let mut out = String::from("u,v\n");
    for (u, v) in g.edges() {
        out.push_str(&format!("{u},{v}\n"));
    }
    out.into_bytes()
}

pub fn encode_json(g: &SrgGraph) -> Vec<u8> {
    let edges: Vec<[usize; 2]> = g.edges().into_iter().map(|(u, v)| [u, v]).collect();
    let value = json!({
        "edges": edges,
        "n": g.n(),
        "edge_count": edges.len(),
    });
    let mut out = serde_json::to_vec_pretty(&value).expect("json value serializes");
    out.push(b'\n');
    out
}
