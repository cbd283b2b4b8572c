//! Exact maximum clique search.
//!
//! Branch and bound over bitsets with a greedy colouring bound, in the style
//! of Tomita's MCQ/MCS and San Segundo's BBMC. Vertices are relabelled by
//! degree (descending, ties by index) before the search. A second pass finds
//! the lexicographically smallest clique of the optimal size, so the reported
//! witness does not depend on search order.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::cayley::{CayleyGraph, GraphManifest};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Bumped whenever solver output could change; part of cache keys.
pub const SOLVER_VERSION: u32 = 1;
pub const DEFAULT_SOLVER_CAP: usize = 1024;
pub const DEFAULT_ENUMERATION_CAP: usize = 40;

#[derive(Clone, Debug, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn empty(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }

    fn full(n: usize) -> Self {
        let mut b = Bits::empty(n);
        for v in 0..n {
            b.insert(v);
        }
        b
    }

    fn insert(&mut self, v: usize) {
        self.0[v / 64] |= 1 << (v % 64);
    }

    fn remove(&mut self, v: usize) {
        self.0[v / 64] &= !(1 << (v % 64));
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn first(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, &w)| i * 64 + w.trailing_zeros() as usize)
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn and_not_assign(&mut self, other: &Bits) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a &= !b;
        }
    }
}

fn rows(graph: &Graph, label: &[usize], inverse: &[usize]) -> Vec<Bits> {
    let n = graph.order();
    (0..n)
        .map(|new| {
            let mut b = Bits::empty(n);
            for old in graph.neighbors(label[new]).ones() {
                b.insert(inverse[old]);
            }
            b
        })
        .collect()
}

/// Greedy sequential colouring of `p`; returns vertices in colour order with
/// their colour numbers (1-based, nondecreasing).
fn colour(adj: &[Bits], p: &Bits) -> (Vec<usize>, Vec<usize>) {
    let mut order = Vec::with_capacity(p.count());
    let mut colours = Vec::with_capacity(order.capacity());
    let mut uncoloured = p.clone();
    let mut k = 0;
    while !uncoloured.is_empty() {
        k += 1;
        let mut q = uncoloured.clone();
        while let Some(v) = q.first() {
            uncoloured.remove(v);
            q.remove(v);
            q.and_not_assign(&adj[v]);
            order.push(v);
            colours.push(k);
        }
    }
    (order, colours)
}

fn colour_count(adj: &[Bits], p: &Bits) -> usize {
    colour(adj, p).1.last().copied().unwrap_or(0)
}

struct Search<'a> {
    adj: &'a [Bits],
    best: Vec<usize>,
    nodes: u64,
}

impl Search<'_> {
    fn expand(&mut self, clique: &mut Vec<usize>, mut p: Bits) {
        self.nodes += 1;
        let (order, colours) = colour(self.adj, &p);
        for i in (0..order.len()).rev() {
            if clique.len() + colours[i] <= self.best.len() {
                return;
            }
            let v = order[i];
            clique.push(v);
            let next = p.and(&self.adj[v]);
            if next.is_empty() {
                if clique.len() > self.best.len() {
                    self.best = clique.clone();
                }
            } else {
                self.expand(clique, next);
            }
            clique.pop();
            p.remove(v);
        }
    }
}

fn lex_search(adj: &[Bits], clique: &mut Vec<usize>, mut p: Bits, target: usize, nodes: &mut u64) -> bool {
    *nodes += 1;
    if clique.len() >= target {
        return true;
    }
    let need = target - clique.len();
    if p.count() < need || colour_count(adj, &p) < need {
        return false;
    }
    while let Some(v) = p.first() {
        if p.count() < need {
            return false;
        }
        p.remove(v);
        clique.push(v);
        if lex_search(adj, clique, p.and(&adj[v]), target, nodes) {
            return true;
        }
        clique.pop();
    }
    false
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub elapsed_ms: u64,
    pub anchors: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliqueCertificate {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub manifest: Option<GraphManifest>,
    pub omega: usize,
    pub witness: Vec<usize>,
    pub stats: SearchStats,
}

#[derive(Clone, Debug)]
pub struct SolverOptions {
    pub cap: usize,
    /// Pairwise adjacent vertices assumed to lie in some maximum clique.
    pub anchors: Vec<usize>,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { cap: DEFAULT_SOLVER_CAP, anchors: Vec::new() }
    }
}

/// Exact clique number of an arbitrary graph, no symmetry assumptions.
pub fn max_clique(graph: &Graph) -> Result<CliqueCertificate> {
    max_clique_with(graph, &SolverOptions::default())
}

/// Clique number of a Cayley graph using its symmetry anchors. The witness
/// is the lexicographically smallest maximum clique, which contains 0.
pub fn solve_cayley(graph: &CayleyGraph, cap: usize) -> Result<CliqueCertificate> {
    let opts = SolverOptions { cap, anchors: graph.symmetry_anchors() };
    let mut cert = max_clique_with(graph.graph(), &opts)?;
    cert.manifest = Some(graph.manifest());
    Ok(cert)
}

/// Maximum clique under `opts`. With anchors the answer is only correct if
/// some maximum clique really contains them (true for the anchors returned
/// by [`CayleyGraph::symmetry_anchors`]); the witness search then assumes
/// vertex transitivity and starts from vertex 0.
pub fn max_clique_with(graph: &Graph, opts: &SolverOptions) -> Result<CliqueCertificate> {
    let n = graph.order();
    if n > opts.cap {
        return Err(Error::SolverCapExceeded { n, cap: opts.cap });
    }
    let start = Instant::now();
    for (i, &a) in opts.anchors.iter().enumerate() {
        if a >= n || opts.anchors[..i].iter().any(|&b| b == a || !graph.has_edge(a, b)) {
            return Err(Error::AnchorsNotAdjacent);
        }
    }

    let mut label: Vec<usize> = (0..n).collect();
    label.sort_by_key(|&v| (std::cmp::Reverse(graph.degree(v)), v));
    let mut inverse = vec![0; n];
    for (new, &old) in label.iter().enumerate() {
        inverse[old] = new;
    }
    let adj = rows(graph, &label, &inverse);

    let mut clique: Vec<usize> = opts.anchors.iter().map(|&a| inverse[a]).collect();
    let mut p = Bits::full(n);
    for &a in &clique {
        p = p.and(&adj[a]);
    }
    let mut search = Search { adj: &adj, best: clique.clone(), nodes: 0 };
    if !p.is_empty() {
        search.expand(&mut clique, p);
    }
    let omega = search.best.len();
    let mut nodes = search.nodes;

    let identity: Vec<usize> = (0..n).collect();
    let plain = rows(graph, &identity, &identity);
    let (mut witness, root) = if opts.anchors.is_empty() || n == 0 {
        (Vec::new(), Bits::full(n))
    } else {
        (vec![0], plain[0].clone())
    };
    let found = lex_search(&plain, &mut witness, root, omega, &mut nodes);
    if !found || witness.len() != omega {
        return Err(Error::Invalid("witness search failed to reach the clique number".into()));
    }

    Ok(CliqueCertificate {
        manifest: None,
        omega,
        witness,
        stats: SearchStats {
            nodes,
            elapsed_ms: start.elapsed().as_millis() as u64,
            anchors: opts.anchors.clone(),
        },
    })
}

/// All pairs of `set` adjacent; out-of-range or repeated vertices fail.
pub fn is_clique(graph: &Graph, set: &[usize]) -> bool {
    let n = graph.order();
    set.iter().enumerate().all(|(i, &u)| u < n && set[..i].iter().all(|&v| v != u && graph.has_edge(u, v)))
}

/// A clique that no outside vertex extends. The empty set counts as maximal
/// only in the empty graph.
pub fn is_maximal(graph: &Graph, set: &[usize]) -> bool {
    if !is_clique(graph, set) {
        return false;
    }
    let n = graph.order();
    let mut common = Bits::full(n);
    for &v in set {
        let mut row = Bits::empty(n);
        for w in graph.neighbors(v).ones() {
            row.insert(w);
        }
        common = common.and(&row);
    }
    for &v in set {
        common.remove(v);
    }
    common.is_empty()
}

/// Every clique of size `omega` containing `anchors`, sorted.
pub fn enumerate_max_cliques_through(
    graph: &Graph,
    anchors: &[usize],
    omega: usize,
    cap: usize,
) -> Result<Vec<Vec<usize>>> {
    if !is_clique(graph, anchors) {
        return Err(Error::AnchorsNotAdjacent);
    }
    let n = graph.order();
    let candidates: Vec<usize> = (0..n)
        .filter(|v| !anchors.contains(v) && anchors.iter().all(|&a| graph.has_edge(a, *v)))
        .collect();
    if candidates.len() > cap {
        return Err(Error::EnumerationCapExceeded { candidates: candidates.len(), cap });
    }
    let mut out = Vec::new();
    let mut current = anchors.to_vec();
    fn walk(graph: &Graph, cands: &[usize], current: &mut Vec<usize>, omega: usize, out: &mut Vec<Vec<usize>>) {
        if current.len() == omega {
            let mut c = current.clone();
            c.sort_unstable();
            out.push(c);
            return;
        }
        for (i, &v) in cands.iter().enumerate() {
            if current.len() + cands.len() - i < omega {
                return;
            }
            let rest: Vec<usize> = cands[i + 1..].iter().copied().filter(|&w| graph.has_edge(v, w)).collect();
            current.push(v);
            walk(graph, &rest, current, omega, out);
            current.pop();
        }
    }
    if omega >= anchors.len() {
        walk(graph, &candidates, &mut current, omega, &mut out);
    }
    out.sort();
    Ok(out)
}
