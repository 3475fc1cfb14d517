//! `--graph` accepts a JSON file, a name, a canonical key in hex, or an
//! edge list such as `0-1,0-1,1-2`.

use std::path::Path;

use anyhow::{bail, Context, Result};
use phi4_core::graph::named;
use phi4_core::{CanonicalKey, Multigraph};

use crate::UsageError;

pub const NAMES: &str = "fgii, bubble, fgiv, fgvi, x2y, xy2, triangle";

pub fn named_graph(name: &str) -> Option<Multigraph> {
    Some(match name.to_ascii_lowercase().as_str() {
        "fgii" | "double-edge" => named::double_edge(),
        "bubble" | "fgiii" => named::bubble(),
        "fgiv" | "sunset" => named::sunset(),
        "fgvi" | "double-triangle" => named::double_triangle(),
        "x2y" | "bubble-with-leg" => named::bubble_with_leg(),
        "xy2" | "double-edge-chain" => named::double_edge_chain(),
        "triangle" | "y3" => named::triangle(),
        _ => return None,
    })
}

fn edge_list(text: &str) -> Option<Result<Multigraph>> {
    let mut edges = Vec::new();
    for item in text.split(',') {
        let (u, v) = item.trim().split_once('-')?;
        edges.push((u.trim().parse::<usize>().ok()?, v.trim().parse::<usize>().ok()?));
    }
    let vertices = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
    Some(Multigraph::new(vertices, edges).map_err(Into::into))
}

/// Any failure is reported as a usage error.
pub fn parse_graph(arg: &str) -> Result<Multigraph> {
    read_graph(arg).map_err(|e| UsageError(format!("{e:#}")).into())
}

fn read_graph(arg: &str) -> Result<Multigraph> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {arg}"))?;
        return serde_json::from_str(&text).with_context(|| format!("parsing graph JSON in {arg}"));
    }
    if let Some(g) = named_graph(arg) {
        return Ok(g);
    }
    if let Some(g) = edge_list(arg) {
        return g;
    }
    if let Ok(key) = CanonicalKey::from_hex(arg) {
        return Ok(key.to_graph());
    }
    bail!("cannot read graph `{arg}`: expected a JSON file, one of {NAMES}, an edge list like 0-1,1-2 or a canonical key")
}

#[cfg(test)]
mod tests {
    use super::*;
    use phi4_core::canonicalize;

    #[test]
    fn all_forms_agree() {
        let by_name = parse_graph("x2y").unwrap();
        let by_edges = parse_graph("0-1,0-1,0-1,0-2,1-2").unwrap();
        let key = canonicalize(&by_name).unwrap();
        let by_key = parse_graph(&key.to_hex()).unwrap();
        assert_eq!(key, canonicalize(&by_edges).unwrap());
        assert_eq!(key, canonicalize(&by_key).unwrap());
        assert!(parse_graph("nonsense").is_err());
        assert!(parse_graph("0-0").is_err());
    }
}
