//! Plain undirected graphs with bitset rows, plus DIMACS text I/O.

use std::fmt::Write as _;
use std::io::Write;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

/// Simple undirected graph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    rows: Vec<FixedBitSet>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph { rows: vec![FixedBitSet::with_capacity(n); n] }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Graph::new(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn order(&self) -> usize {
        self.rows.len()
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        let n = self.order();
        if u >= n || v >= n || u == v {
            return Err(Error::Invalid(format!("bad edge ({u}, {v}) in a graph on {n} vertices")));
        }
        self.rows[u].insert(v);
        self.rows[v].insert(u);
        Ok(())
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u].contains(v)
    }

    pub fn neighbors(&self, u: usize) -> &FixedBitSet {
        &self.rows[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.rows[u].count_ones(..)
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones(..)).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(u, row)| row.ones().filter(move |&v| v > u).map(move |v| (u, v)))
    }

    /// The graph with vertex `v` renamed to `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let n = self.order();
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&x| x >= n || std::mem::replace(&mut seen[x], true)) {
            return Err(Error::Invalid("not a permutation of the vertex set".into()));
        }
        Graph::from_edges(n, self.edges().map(|(u, v)| (perm[u], perm[v])))
    }

    /// DIMACS `p edge` text: header, then `e u v` with 1-based `u < v`.
    pub fn to_dimacs(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "p edge {} {}", self.order(), self.edge_count());
        for (u, v) in self.edges() {
            let _ = writeln!(out, "e {} {}", u + 1, v + 1);
        }
        out
    }

    pub fn write_dimacs<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(self.to_dimacs().as_bytes())?;
        Ok(())
    }

    /// Reads DIMACS `p edge` / `p col` text. Comment lines start with `c`.
    pub fn parse_dimacs(text: &str) -> Result<Self> {
        let bad = |line: usize, msg: &str| Error::Invalid(format!("DIMACS line {line}: {msg}"));
        let mut graph: Option<Graph> = None;
        let mut declared = 0usize;
        for (i, line) in text.lines().enumerate() {
            let mut parts = line.split_whitespace();
            match parts.next() {
                None | Some("c") => {}
                Some("p") => {
                    if graph.is_some() {
                        return Err(bad(i + 1, "duplicate problem line"));
                    }
                    let _format = parts.next().ok_or_else(|| bad(i + 1, "missing format"))?;
                    let n: usize = parts.next().and_then(|x| x.parse().ok()).ok_or_else(|| bad(i + 1, "vertex count"))?;
                    declared = parts.next().and_then(|x| x.parse().ok()).ok_or_else(|| bad(i + 1, "edge count"))?;
                    graph = Some(Graph::new(n));
                }
                Some("e") => {
                    let g = graph.as_mut().ok_or_else(|| bad(i + 1, "edge before problem line"))?;
                    let mut endpoint = || -> Option<usize> { parts.next()?.parse::<usize>().ok()?.checked_sub(1) };
                    let (u, v) = endpoint().zip(endpoint()).ok_or_else(|| bad(i + 1, "malformed edge"))?;
                    g.add_edge(u, v).map_err(|_| bad(i + 1, "edge out of range"))?;
                }
                Some(tag) => return Err(bad(i + 1, &format!("unknown line type {tag:?}"))),
            }
        }
        let g = graph.ok_or_else(|| Error::Invalid("DIMACS text has no problem line".into()))?;
        if g.edge_count() != declared {
            return Err(Error::Invalid(format!(
                "DIMACS header declares {declared} edges, found {}",
                g.edge_count()
            )));
        }
        Ok(g)
    }
}
