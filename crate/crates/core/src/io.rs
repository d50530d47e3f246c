//! Edge-list reading and writing.
//!
//! One edge per line: `src dst [weight]`, fields separated by any run of
//! spaces or tabs. Blank lines and lines starting with `#` are skipped. A line
//! holding a single label declares an isolated node, which lets backbones with
//! edgeless nodes survive a round trip.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use log::warn;

use crate::error::{Error, Result};
use crate::graph::{GraphBuilder, NodeId, WeightedGraph};

/// What the loader saw besides the graph itself.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LoadReport {
    pub lines: usize,
    pub self_loops_dropped: usize,
}

pub fn load_edge_list<R: BufRead>(
    reader: R,
    default_weight: f64,
) -> Result<(WeightedGraph, LoadReport)> {
    if !(default_weight > 0.0 && default_weight.is_finite()) {
        return Err(Error::param(format!(
            "default weight must be positive, got {default_weight}"
        )));
    }
    let mut b = GraphBuilder::new();
    let mut report = LoadReport::default();
    let mut first_line: HashMap<(NodeId, NodeId), usize> = HashMap::new();

    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        report.lines = lineno;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        let (src, dst, weight) = match fields.as_slice() {
            [only] => {
                b.add_node(only);
                continue;
            }
            [s, d] => (*s, *d, default_weight),
            [s, d, w] => (*s, *d, parse_weight(w, lineno)?),
            _ => {
                return Err(Error::Parse {
                    line: lineno,
                    message: format!("expected 2 or 3 fields, found {}", fields.len()),
                })
            }
        };
        if src == dst {
            report.self_loops_dropped += 1;
            b.add_node(src);
            continue;
        }
        let u = b.add_node(src);
        let v = b.add_node(dst);
        let key = if u < v { (u, v) } else { (v, u) };
        if let Some(&first) = first_line.get(&key) {
            return Err(Error::DuplicateEdge {
                line: lineno,
                first_line: first,
                src: src.to_string(),
                dst: dst.to_string(),
            });
        }
        first_line.insert(key, lineno);
        b.add_edge(u, v, weight)?;
    }
    if report.self_loops_dropped > 0 {
        warn!("dropped {} self-loop(s)", report.self_loops_dropped);
    }
    Ok((b.build(), report))
}

fn parse_weight(field: &str, line: usize) -> Result<f64> {
    let w: f64 = field.parse().map_err(|_| Error::Parse {
        line,
        message: format!("non-numeric weight {field:?}"),
    })?;
    if !w.is_finite() {
        return Err(Error::Parse {
            line,
            message: format!("non-finite weight {field:?}"),
        });
    }
    if w <= 0.0 {
        return Err(Error::Parse {
            line,
            message: format!("non-positive weight {field}"),
        });
    }
    Ok(w)
}

pub fn read_edge_list(path: impl AsRef<Path>, default_weight: f64) -> Result<(WeightedGraph, LoadReport)> {
    let file = File::open(path.as_ref())?;
    load_edge_list(BufReader::new(file), default_weight)
}

/// Writes `g` in edge-list form. Weights use the shortest decimal that
/// round-trips exactly; isolated nodes get a single-label line.
pub fn write_edge_list<W: Write>(g: &WeightedGraph, mut out: W) -> Result<()> {
    for v in g.nodes() {
        if g.degree(v) == 0 {
            writeln!(out, "{}", g.label(v))?;
        }
    }
    for e in g.edges() {
        writeln!(out, "{} {} {}", g.label(e.src), g.label(e.dst), e.weight)?;
    }
    Ok(())
}

pub fn write_edge_list_file(g: &WeightedGraph, path: impl AsRef<Path>) -> Result<()> {
    let mut buf = Vec::new();
    write_edge_list(g, &mut buf)?;
    std::fs::write(path, buf)?;
    Ok(())
}
