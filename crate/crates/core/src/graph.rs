//! Immutable simple undirected graphs in compressed adjacency form.
//!
//! Vertex ids are `0..n`. Induced subgraphs keep the parent's ids and universe
//! size and record which vertices they were induced on, so vertex sets from
//! different subgraphs can be intersected directly.

use std::io::{BufRead, Write};

use crate::error::{param, Error, Result};
use crate::VertexSet;

#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    offsets: Vec<usize>,
    targets: Vec<u32>,
    /// `None` means every vertex of the universe belongs to the graph.
    members: Option<VertexSet>,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("m", &self.m())
            .finish()
    }
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph { n, offsets: vec![0; n + 1], targets: Vec::new(), members: None }
    }

    /// Builds a graph from an edge list, rejecting self-loops, duplicates and
    /// out-of-range endpoints.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut list = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return param(format!("edge ({u}, {v}) out of range for n = {n}"));
            }
            if u == v {
                return param(format!("self-loop at vertex {u}"));
            }
            list.push((u.min(v), u.max(v)));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return param(format!("duplicate edge ({}, {})", w[0].0, w[0].1));
        }
        if n > u32::MAX as usize {
            return param("vertex count exceeds u32 range");
        }
        Ok(Self::from_unique_edges(n, &list))
    }

    /// `edges` must be simple: no loops, no repeats in either orientation.
    pub(crate) fn from_unique_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut offsets = vec![0usize; n + 1];
        for &(u, v) in edges {
            offsets[u + 1] += 1;
            offsets[v + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut cursor = offsets.clone();
        let mut targets = vec![0u32; 2 * edges.len()];
        for &(u, v) in edges {
            targets[cursor[u]] = v as u32;
            cursor[u] += 1;
            targets[cursor[v]] = u as u32;
            cursor[v] += 1;
        }
        for v in 0..n {
            targets[offsets[v]..offsets[v + 1]].sort_unstable();
        }
        Graph { n, offsets, targets, members: None }
    }

    /// Universe size; ids range over `0..n`.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.targets.len() / 2
    }

    /// Vertices this graph is defined on (the full universe unless induced).
    pub fn vertex_set(&self) -> VertexSet {
        match &self.members {
            Some(s) => s.clone(),
            None => VertexSet::full(self.n),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.members.as_ref().map_or(self.n, VertexSet::len)
    }

    pub fn contains_vertex(&self, v: usize) -> bool {
        v < self.n && self.members.as_ref().is_none_or(|s| s.contains(v))
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    /// Sorted neighbor ids of `v`.
    #[inline]
    pub fn neighbors(&self, v: usize) -> impl ExactSizeIterator<Item = usize> + '_ {
        self.targets[self.offsets[v]..self.offsets[v + 1]]
            .iter()
            .map(|&u| u as usize)
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n
            && v < self.n
            && self.targets[self.offsets[u]..self.offsets[u + 1]]
                .binary_search(&(v as u32))
                .is_ok()
    }

    /// Each undirected edge once, as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            self.neighbors(u).filter(move |&v| v > u).map(move |v| (u, v))
        })
    }

    /// Edges whose endpoints both lie in `alive`.
    pub fn edges_within<'a>(
        &'a self,
        alive: &'a VertexSet,
    ) -> impl Iterator<Item = (usize, usize)> + 'a {
        alive.iter().flat_map(move |u| {
            self.neighbors(u)
                .filter(move |&v| v > u && alive.contains(v))
                .map(move |v| (u, v))
        })
    }

    /// Subgraph on exactly `vs`, keeping original ids and the universe size.
    pub fn induced_subgraph(&self, vs: &VertexSet) -> Result<Graph> {
        self.check_universe(vs)?;
        let mut offsets = vec![0usize; self.n + 1];
        let mut targets = Vec::new();
        let mut last = 0;
        for v in vs.iter() {
            for slot in &mut offsets[last + 1..=v] {
                *slot = targets.len();
            }
            targets.extend(
                self.targets[self.offsets[v]..self.offsets[v + 1]]
                    .iter()
                    .copied()
                    .filter(|&u| vs.contains(u as usize)),
            );
            last = v;
            offsets[v + 1] = targets.len();
        }
        let end = targets.len();
        let first_unset = if vs.is_empty() { 1 } else { last + 2 };
        for slot in offsets.iter_mut().skip(first_unset) {
            *slot = end;
        }
        Ok(Graph { n: self.n, offsets, targets, members: Some(vs.clone()) })
    }

    /// `|N(v) ∩ s|`.
    pub fn degree_to(&self, v: usize, s: &VertexSet) -> Result<usize> {
        if v >= self.n {
            return param(format!("vertex {v} out of range for n = {}", self.n));
        }
        self.check_universe(s)?;
        Ok(self.degree_within(v, s))
    }

    /// Unchecked variant of [`Graph::degree_to`] for hot loops.
    #[inline]
    pub fn degree_within(&self, v: usize, s: &VertexSet) -> usize {
        self.neighbors(v).filter(|&u| s.contains(u)).count()
    }

    pub fn is_vertex_cover(&self, c: &VertexSet) -> bool {
        c.universe() == self.n && self.edges().all(|(u, v)| c.contains(u) || c.contains(v))
    }

    /// First edge with neither endpoint in `c`, if any.
    pub fn uncovered_edge(&self, c: &VertexSet) -> Option<(usize, usize)> {
        self.edges().find(|&(u, v)| !c.contains(u) && !c.contains(v))
    }

    fn check_universe(&self, s: &VertexSet) -> Result<()> {
        if s.universe() != self.n {
            return param(format!(
                "vertex set universe {} does not match graph n = {}",
                s.universe(),
                self.n
            ));
        }
        Ok(())
    }

    /// Reads the plain-text edge-list format: a header line `n m`, then `m`
    /// lines `u v` with `u < v`. Blank lines and `#` comments are skipped.
    pub fn read_edge_list(reader: impl BufRead) -> Result<Graph> {
        let mut header: Option<(usize, usize)> = None;
        let mut edges = Vec::new();
        let mut seen = std::collections::HashSet::new();
        let mut last_line = 0;
        for (idx, line) in reader.lines().enumerate() {
            let line_no = idx + 1;
            last_line = line_no;
            let line = line?;
            let text = line.split('#').next().unwrap_or("").trim();
            if text.is_empty() {
                continue;
            }
            let perr = |msg: String| Error::Parse { line: line_no, msg };
            let mut fields = text.split_whitespace();
            let a = fields.next().ok_or_else(|| perr("missing field".into()))?;
            let b = fields.next().ok_or_else(|| perr("expected two integers".into()))?;
            if fields.next().is_some() {
                return Err(perr("trailing fields".into()));
            }
            let a: usize = a.parse().map_err(|e| perr(format!("bad integer {a:?}: {e}")))?;
            let b: usize = b.parse().map_err(|e| perr(format!("bad integer {b:?}: {e}")))?;
            match header {
                None => header = Some((a, b)),
                Some((n, m)) => {
                    if edges.len() == m {
                        return Err(perr(format!("more than the declared {m} edges")));
                    }
                    if a >= b {
                        return Err(perr(format!("edge ({a}, {b}) must satisfy u < v")));
                    }
                    if b >= n {
                        return Err(perr(format!("vertex {b} out of range for n = {n}")));
                    }
                    if !seen.insert((a, b)) {
                        return Err(perr(format!("duplicate edge ({a}, {b})")));
                    }
                    edges.push((a, b));
                }
            }
        }
        let (n, m) = header.ok_or(Error::Parse { line: 1, msg: "missing header 'n m'".into() })?;
        if edges.len() != m {
            return Err(Error::Parse {
                line: last_line,
                msg: format!("declared {m} edges but found {}", edges.len()),
            });
        }
        Ok(Self::from_unique_edges(n, &edges))
    }

    pub fn write_edge_list(&self, mut w: impl Write) -> Result<()> {
        writeln!(w, "{} {}", self.n, self.m())?;
        for (u, v) in self.edges() {
            writeln!(w, "{u} {v}")?;
        }
        Ok(())
    }
}

/// Small fixed graphs used throughout the tests and docs.
pub mod fixtures {
    use super::Graph;

    pub fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|v| (v - 1, v))).unwrap()
    }

    pub fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|v| (v, (v + 1) % n))).unwrap()
    }

    pub fn complete(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).unwrap()
    }

    /// `K_{1,leaves}` with center 0.
    pub fn star(leaves: usize) -> Graph {
        Graph::from_edges(leaves + 1, (1..=leaves).map(|v| (0, v))).unwrap()
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Graph {
        Graph::from_edges(a + b, (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v)))).unwrap()
    }

    pub fn petersen() -> Graph {
        let outer = (0..5).map(|i| (i, (i + 1) % 5));
        let spokes = (0..5).map(|i| (i, i + 5));
        let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
        Graph::from_edges(10, outer.chain(spokes).chain(inner)).unwrap()
    }
}
