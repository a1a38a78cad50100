//! Text loaders for vertex sets, bipartite edge lists, and DIMACS graphs.
//!
//! All formats treat `#` as a comment marker and ignore blank lines. Line numbers in
//! errors are 1-based.

use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geometry::{Point, VPolytope};
use crate::objectives::Graph;
use crate::scalar::Scalar;

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn field<N: FromStr>(line: usize, token: Option<&str>, what: &str) -> Result<N> {
    let token = token.ok_or_else(|| Error::parse(line, format!("missing {what}")))?;
    token.parse().map_err(|_| Error::parse(line, format!("invalid {what} `{token}`")))
}

/// One vertex per line, whitespace-separated coordinates. The first vertex fixes the dimension.
pub fn parse_vertex_set<T: Scalar>(text: &str) -> Result<VPolytope<T>> {
    let mut vertices = Vec::new();
    let mut dim = None;
    for (line, content) in content_lines(text) {
        let coords = content
            .split_whitespace()
            .map(|tok| tok.parse::<f64>().map_err(|_| Error::parse(line, format!("invalid coordinate `{tok}`"))))
            .collect::<Result<Vec<f64>>>()?;
        let expected = *dim.get_or_insert(coords.len());
        if coords.len() != expected {
            return Err(Error::parse(line, format!("expected {expected} coordinates, found {}", coords.len())));
        }
        let point =
            Point::new(coords.into_iter().map(T::lit).collect()).map_err(|e| Error::parse(line, e.to_string()))?;
        vertices.push(point);
    }
    if vertices.is_empty() {
        return Err(Error::EmptyVertexSet);
    }
    VPolytope::new(vertices)
}

pub fn read_vertex_set<T: Scalar>(path: impl AsRef<Path>) -> Result<VPolytope<T>> {
    parse_vertex_set(&read(path.as_ref())?)
}

/// `source<TAB>target` pairs with 0-based ids. Any whitespace is accepted as separator.
pub fn parse_edge_list(text: &str) -> Result<Vec<(usize, usize)>> {
    content_lines(text)
        .map(|(line, content)| {
            let mut toks = content.split_whitespace();
            let s = field(line, toks.next(), "source id")?;
            let t = field(line, toks.next(), "target id")?;
            if let Some(extra) = toks.next() {
                return Err(Error::parse(line, format!("unexpected token `{extra}`")));
            }
            Ok((s, t))
        })
        .collect()
}

pub fn read_edge_list(path: impl AsRef<Path>) -> Result<Vec<(usize, usize)>> {
    parse_edge_list(&read(path.as_ref())?)
}

/// `p edge <n> <m>` header and `e <u> <v>` lines with 1-based ids; other line kinds are skipped.
pub fn parse_dimacs(text: &str) -> Result<Graph> {
    let mut n_nodes: Option<usize> = None;
    let mut edges = Vec::new();
    for (line, content) in content_lines(text) {
        let mut toks = content.split_whitespace();
        match toks.next() {
            Some("p") => {
                if n_nodes.is_some() {
                    return Err(Error::parse(line, "duplicate problem line"));
                }
                let _kind: String = field(line, toks.next(), "problem kind")?;
                n_nodes = Some(field(line, toks.next(), "node count")?);
                let _m: usize = field(line, toks.next(), "edge count")?;
            }
            Some("e") => {
                let n = n_nodes.ok_or_else(|| Error::parse(line, "edge before problem line"))?;
                let u: usize = field(line, toks.next(), "node id")?;
                let v: usize = field(line, toks.next(), "node id")?;
                for id in [u, v] {
                    if id == 0 || id > n {
                        return Err(Error::parse(line, format!("node id {id} outside 1..={n}")));
                    }
                }
                if u != v {
                    edges.push((u - 1, v - 1));
                }
            }
            _ => {}
        }
    }
    let n = n_nodes.ok_or_else(|| Error::parse(text.lines().count().max(1), "missing problem line"))?;
    Graph::from_edges(n, &edges)
}

pub fn read_dimacs(path: impl AsRef<Path>) -> Result<Graph> {
    parse_dimacs(&read(path.as_ref())?)
}
