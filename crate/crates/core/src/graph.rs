//! Small finite simple graphs and their combinatorial statistics.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::rational::{q, Q};

/// A finite simple graph on vertices `0..vertex_count`.
///
/// Edges are stored as ordered pairs `(u, v)` with `u < v`, sorted and
/// without duplicates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SimpleGraph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
}

impl SimpleGraph {
    /// Builds a graph, rejecting loops, duplicate edges and out-of-range endpoints.
    pub fn new(vertex_count: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut list = Vec::new();
        for (u, v) in edges {
            if u == v {
                return Err(Error::Domain(format!("loop at vertex {u}")));
            }
            if u >= vertex_count || v >= vertex_count {
                return Err(Error::Domain(format!(
                    "edge {u}-{v} has an endpoint outside 0..{vertex_count}"
                )));
            }
            list.push((u.min(v), u.max(v)));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Domain(format!("duplicate edge {}-{}", w[0].0, w[0].1)));
        }
        Ok(SimpleGraph { vertex_count, edges: list })
    }

    pub fn empty(n: usize) -> Self {
        SimpleGraph { vertex_count: n, edges: Vec::new() }
    }

    /// The complete graph `K_n`.
    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Self::new(n, edges).expect("complete graph is simple")
    }

    /// The cycle `C_n`, `n >= 3`.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a cycle needs at least three vertices");
        Self::new(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle is simple")
    }

    /// The path on `n` vertices (so `n - 1` edges).
    pub fn path(n: usize) -> Self {
        Self::new(n, (1..n).map(|i| (i - 1, i))).expect("path is simple")
    }

    /// `K_{a,b}` with parts `0..a` and `a..a+b`.
    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let edges = (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v)));
        Self::new(a + b, edges).expect("complete bipartite graph is simple")
    }

    /// `|H|`.
    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// `‖H‖`.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.binary_search(&(u.min(v), u.max(v))).is_ok()
    }

    pub fn adjacency_lists(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertex_count];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    /// True when some vertex has degree exactly one.
    pub fn has_pendant_vertex(&self) -> bool {
        self.degrees().contains(&1)
    }

    /// True when no two vertices of `set` are adjacent.
    pub fn is_independent(&self, set: &[usize]) -> bool {
        set.iter()
            .enumerate()
            .all(|(i, &u)| set[i + 1..].iter().all(|&v| u != v && !self.has_edge(u, v)))
    }

    /// The spanning subgraph keeping the edges whose bit is set in `mask`
    /// (bit `i` refers to `edges()[i]`). All vertices are retained.
    pub fn spanning_subgraph(&self, mask: u64) -> SimpleGraph {
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        SimpleGraph { vertex_count: self.vertex_count, edges }
    }

    /// Disjoint union; the vertices of `other` are shifted past those of `self`.
    pub fn disjoint_union(&self, other: &SimpleGraph) -> SimpleGraph {
        let shift = self.vertex_count;
        let edges = self
            .edges
            .iter()
            .copied()
            .chain(other.edges.iter().map(|&(u, v)| (u + shift, v + shift)));
        Self::new(shift + other.vertex_count, edges).expect("union of simple graphs is simple")
    }

    /// Connected component index for every vertex, numbered by first vertex.
    pub fn components(&self) -> Vec<usize> {
        let adj = self.adjacency_lists();
        let mut comp = vec![usize::MAX; self.vertex_count];
        let mut next = 0;
        for start in 0..self.vertex_count {
            if comp[start] != usize::MAX {
                continue;
            }
            comp[start] = next;
            let mut stack = vec![start];
            while let Some(u) = stack.pop() {
                for &w in &adj[u] {
                    if comp[w] == usize::MAX {
                        comp[w] = next;
                        stack.push(w);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    pub fn component_count(&self) -> usize {
        self.components().into_iter().max().map_or(0, |c| c + 1)
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }

    /// A proper 2-coloring if one exists.
    pub fn bipartition(&self) -> Option<Vec<u8>> {
        let adj = self.adjacency_lists();
        let mut side = vec![u8::MAX; self.vertex_count];
        for start in 0..self.vertex_count {
            if side[start] != u8::MAX {
                continue;
            }
            side[start] = 0;
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &w in &adj[u] {
                    if side[w] == u8::MAX {
                        side[w] = 1 - side[u];
                        queue.push_back(w);
                    } else if side[w] == side[u] {
                        return None;
                    }
                }
            }
        }
        Some(side)
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartition().is_some()
    }

    /// Length of a shortest cycle, `None` for forests.
    pub fn girth(&self) -> Option<usize> {
        let adj = self.adjacency_lists();
        let mut best: Option<usize> = None;
        for root in 0..self.vertex_count {
            let mut dist = vec![usize::MAX; self.vertex_count];
            let mut parent = vec![usize::MAX; self.vertex_count];
            dist[root] = 0;
            let mut queue = VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                for &w in &adj[u] {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        parent[w] = u;
                        queue.push_back(w);
                    } else if parent[u] != w {
                        let len = dist[u] + dist[w] + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                }
            }
        }
        best
    }

    /// Number of distinct cycles (as subgraphs) of length exactly `len`.
    pub fn cycle_count(&self, len: usize) -> usize {
        if len < 3 {
            return 0;
        }
        let adj = self.adjacency_lists();
        let mut total = 0;
        let mut on_path = vec![false; self.vertex_count];
        for start in 0..self.vertex_count {
            on_path[start] = true;
            total += extend_cycles(&adj, start, start, 1, len, &mut on_path);
            on_path[start] = false;
        }
        // Each cycle is found once per direction from its least vertex.
        total / 2
    }

    /// Exact chromatic number by backtracking; intended for small graphs.
    pub fn chromatic_number(&self) -> usize {
        if self.vertex_count == 0 {
            return 0;
        }
        if self.edges.is_empty() {
            return 1;
        }
        if self.is_bipartite() {
            return 2;
        }
        let adj = self.adjacency_lists();
        let mut order: Vec<usize> = (0..self.vertex_count).collect();
        let deg = self.degrees();
        order.sort_by(|&a, &b| deg[b].cmp(&deg[a]).then(a.cmp(&b)));
        (3..=self.vertex_count)
            .find(|&k| {
                let mut colors = vec![usize::MAX; self.vertex_count];
                color_backtrack(&adj, &order, 0, k, &mut colors, 0)
            })
            .unwrap_or(self.vertex_count)
    }

    /// Vertex relabeling: vertex `v` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> SimpleGraph {
        Self::new(self.vertex_count, self.edges.iter().map(|&(u, v)| (perm[u], perm[v])))
            .expect("relabeling preserves simplicity")
    }

    /// Renders the plain-text format: `"n m"` then one `"u v"` line per edge.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.vertex_count, self.edges.len());
        for (u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}

fn extend_cycles(
    adj: &[Vec<usize>],
    start: usize,
    at: usize,
    depth: usize,
    len: usize,
    on_path: &mut [bool],
) -> usize {
    if depth == len {
        return usize::from(adj[at].contains(&start));
    }
    let mut found = 0;
    for &w in &adj[at] {
        if w > start && !on_path[w] {
            on_path[w] = true;
            found += extend_cycles(adj, start, w, depth + 1, len, on_path);
            on_path[w] = false;
        }
    }
    found
}

fn color_backtrack(
    adj: &[Vec<usize>],
    order: &[usize],
    idx: usize,
    k: usize,
    colors: &mut [usize],
    used: usize,
) -> bool {
    if idx == order.len() {
        return true;
    }
    let v = order[idx];
    // Symmetry breaking: a fresh color is only ever the next unused one.
    let limit = (used + 1).min(k);
    for c in 0..limit {
        if adj[v].iter().all(|&w| colors[w] != c) {
            colors[v] = c;
            if color_backtrack(adj, order, idx + 1, k, colors, used.max(c + 1)) {
                return true;
            }
            colors[v] = usize::MAX;
        }
    }
    false
}

impl FromStr for SimpleGraph {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty graph file".into()))?;
        let (n, m) = parse_pair(header)?;
        let mut edges = Vec::with_capacity(m);
        for line in lines.by_ref().take(m) {
            edges.push(parse_pair(line)?);
        }
        if edges.len() != m {
            return Err(Error::Parse(format!("expected {m} edges, found {}", edges.len())));
        }
        if lines.next().is_some() {
            return Err(Error::Parse(format!("more than the declared {m} edge lines")));
        }
        SimpleGraph::new(n, edges)
    }
}

fn parse_pair(line: &str) -> Result<(usize, usize)> {
    let mut it = line.split_whitespace();
    let bad = || Error::Parse(format!("expected two non-negative integers, got {line:?}"));
    let a = it.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
    let b = it.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
    if it.next().is_some() {
        return Err(bad());
    }
    Ok((a, b))
}

impl fmt::Display for SimpleGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Summary statistics of a graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphStats {
    pub vertices: usize,
    pub edges: usize,
    pub components: usize,
    /// `2‖H‖/|H|`.
    pub average_degree: Q,
    /// `None` for forests.
    pub girth: Option<usize>,
    pub odd_girth: Option<bool>,
    /// Number of distinct shortest cycles; zero for forests.
    pub girth_cycles: usize,
    pub chromatic_number: usize,
    pub bipartite: bool,
}

/// Computes [`GraphStats`]; requires at least one vertex.
pub fn graph_stats(h: &SimpleGraph) -> Result<GraphStats> {
    if h.vertex_count() == 0 {
        return Err(Error::Domain("graph has no vertices".into()));
    }
    let girth = h.girth();
    Ok(GraphStats {
        vertices: h.vertex_count(),
        edges: h.edge_count(),
        components: h.component_count(),
        average_degree: q(2 * h.edge_count() as i64, h.vertex_count() as i64),
        girth,
        odd_girth: girth.map(|g| g % 2 == 1),
        girth_cycles: girth.map_or(0, |g| h.cycle_count(g)),
        chromatic_number: h.chromatic_number(),
        bipartite: h.is_bipartite(),
    })
}
