//! Simple undirected graphs on a dense bitset adjacency, together with the
//! generators, the blow-up operation and the odd girth computation.

use std::collections::VecDeque;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest vertex count accepted by [`enumerate_labeled_graphs`].
pub const ENUMERATION_LIMIT: usize = 8;

/// A simple undirected graph on vertices `0..n`.
///
/// Adjacency is stored as one bitset row per vertex. The relation is kept
/// symmetric and loop-free by every constructor.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        let words = n.div_ceil(64);
        Graph {
            n,
            words,
            rows: vec![0; n * words],
        }
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Inserts the edge `{u, v}`. Inserting an existing edge is a no-op.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        if u >= self.n || v >= self.n {
            return Err(Error::InvalidArgument(format!(
                "edge ({u}, {v}) out of range for a graph on {} vertices",
                self.n
            )));
        }
        if u == v {
            return Err(Error::InvalidArgument(format!("self-loop at vertex {u}")));
        }
        self.set(u, v);
        self.set(v, u);
        Ok(())
    }

    #[inline]
    fn set(&mut self, u: usize, v: usize) {
        self.rows[u * self.words + v / 64] |= 1u64 << (v % 64);
    }

    /// Number of vertices.
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.rows[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).sum::<usize>() / 2
    }

    fn row(&self, v: usize) -> &[u64] {
        &self.rows[v * self.words..(v + 1) * self.words]
    }

    /// Neighbours of `v` in increasing order.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(v).iter().enumerate().flat_map(|(i, &word)| {
            let mut w = word;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + bit)
            })
        })
    }

    /// All edges `(u, v)` with `u < v`, ordered by `v` then `u`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (1..self.n).flat_map(move |v| {
            (0..v)
                .filter(move |&u| self.has_edge(u, v))
                .map(move |u| (u, v))
        })
    }

    pub fn adjacency_lists(&self) -> Vec<Vec<usize>> {
        (0..self.n).map(|v| self.neighbors(v).collect()).collect()
    }

    /// Row-major dense adjacency matrix.
    pub fn adjacency_matrix(&self) -> Vec<f64> {
        let mut a = vec![0.0; self.n * self.n];
        for (u, v) in self.edges() {
            a[u * self.n + v] = 1.0;
            a[v * self.n + u] = 1.0;
        }
        a
    }

    pub fn is_regular(&self) -> bool {
        let mut degrees = (0..self.n).map(|v| self.degree(v));
        match degrees.next() {
            None => true,
            Some(d) => degrees.all(|e| e == d),
        }
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

/// The cycle `C_k`.
pub fn cycle_graph(k: usize) -> Result<Graph> {
    if k < 3 {
        return Err(Error::InvalidArgument(format!(
            "a cycle needs at least 3 vertices, got {k}"
        )));
    }
    Graph::from_edges(k, (0..k).map(|i| (i, (i + 1) % k)))
}

/// The complete bipartite graph `K_{a,b}`; parts are `0..a` and `a..a+b`.
pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    let mut g = Graph::empty(a + b);
    for u in 0..a {
        for v in a..a + b {
            g.set(u, v);
            g.set(v, u);
        }
    }
    g
}

pub fn complete_graph(n: usize) -> Graph {
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in 0..u {
            g.set(u, v);
            g.set(v, u);
        }
    }
    g
}

/// The Petersen graph: outer 5-cycle `0..5`, spokes `i -- i+5`, inner
/// pentagram on `5..10`.
pub fn petersen_graph() -> Graph {
    let edges = (0..5).flat_map(|i| [(i, (i + 1) % 5), (i, i + 5), (5 + i, 5 + (i + 2) % 5)]);
    Graph::from_edges(10, edges).expect("static edge list is valid")
}

/// Disjoint union; vertices of `h` are shifted by `g.n()`.
pub fn disjoint_union(g: &Graph, h: &Graph) -> Graph {
    let shift = g.n();
    let mut out = Graph::empty(g.n() + h.n());
    for (u, v) in g
        .edges()
        .chain(h.edges().map(|(u, v)| (u + shift, v + shift)))
    {
        out.set(u, v);
        out.set(v, u);
    }
    out
}

/// The `m`-fold blow-up: vertex `v` becomes the independent set
/// `{v*m, .., v*m + m - 1}` and every edge becomes a complete bipartite join.
pub fn blow_up(g: &Graph, m: usize) -> Result<Graph> {
    if m == 0 {
        return Err(Error::InvalidArgument(
            "blow-up factor must be at least 1".into(),
        ));
    }
    let mut out = Graph::empty(g.n() * m);
    for (u, v) in g.edges() {
        for i in 0..m {
            for j in 0..m {
                out.set(u * m + i, v * m + j);
                out.set(v * m + j, u * m + i);
            }
        }
    }
    Ok(out)
}

/// Length of the shortest odd cycle, or `Infinite` for bipartite graphs.
///
/// `Finite` sorts below `Infinite`, so `odd_girth(g) >= OddGirth::Finite(k)`
/// reads as "no odd cycle shorter than `k`".
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OddGirth {
    Finite(usize),
    Infinite,
}

impl OddGirth {
    pub fn is_infinite(self) -> bool {
        matches!(self, OddGirth::Infinite)
    }

    /// True iff the graph has no odd cycle of length below `k`.
    pub fn at_least(self, k: usize) -> bool {
        match self {
            OddGirth::Finite(g) => g >= k,
            OddGirth::Infinite => true,
        }
    }
}

impl fmt::Display for OddGirth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OddGirth::Finite(g) => write!(f, "{g}"),
            OddGirth::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for OddGirth {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            OddGirth::Finite(g) => serializer.serialize_u64(*g as u64),
            OddGirth::Infinite => serializer.serialize_str("infinite"),
        }
    }
}

/// Odd girth by breadth-first search on the bipartite double cover.
///
/// The double cover has vertices `(v, parity)` and edges that flip parity.
/// A closed walk of odd length through `v` is a path from `(v, 0)` to
/// `(v, 1)`, and a shortest odd closed walk is always an odd cycle, so the
/// minimum of these distances over all `v` is the odd girth.
pub fn odd_girth(g: &Graph) -> OddGirth {
    let n = g.n();
    let adj = g.adjacency_lists();
    let mut best = usize::MAX;
    let mut dist = vec![usize::MAX; 2 * n];
    let mut queue = VecDeque::new();

    for source in 0..n {
        dist.iter_mut().for_each(|d| *d = usize::MAX);
        queue.clear();
        dist[2 * source] = 0;
        queue.push_back(2 * source);
        while let Some(state) = queue.pop_front() {
            let (v, parity) = (state / 2, state % 2);
            let d = dist[state];
            // nothing shorter than the current best can come from here on
            if d + 1 >= best {
                break;
            }
            for &w in &adj[v] {
                let next = 2 * w + (parity ^ 1);
                if dist[next] == usize::MAX {
                    dist[next] = d + 1;
                    if next == 2 * source + 1 {
                        best = best.min(d + 1);
                    }
                    queue.push_back(next);
                }
            }
        }
    }

    if best == usize::MAX {
        OddGirth::Infinite
    } else {
        OddGirth::Finite(best)
    }
}

/// Number of vertex pairs, i.e. edge slots, of a labeled graph on `n` vertices.
pub fn edge_slots(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Decodes an edge bitmask: bit `i` is the `i`-th slot in the order
/// `(0,1), (0,2), (1,2), (0,3), ...` (graph6 column-major order).
pub fn graph_from_mask(n: usize, mask: u64) -> Graph {
    let mut g = Graph::empty(n);
    let mut bit = 0;
    for v in 1..n {
        for u in 0..v {
            if mask >> bit & 1 == 1 {
                g.set(u, v);
                g.set(v, u);
            }
            bit += 1;
        }
    }
    g
}

/// Every labeled simple graph on `n` vertices, in increasing edge-bitmask
/// order (see [`graph_from_mask`]).
pub fn enumerate_labeled_graphs(n: usize) -> Result<LabeledGraphs> {
    if n > ENUMERATION_LIMIT {
        return Err(Error::SizeLimit {
            n,
            limit: ENUMERATION_LIMIT,
        });
    }
    Ok(LabeledGraphs {
        n,
        next: 0,
        end: 1u64 << edge_slots(n),
    })
}

/// Iterator returned by [`enumerate_labeled_graphs`].
#[derive(Debug, Clone)]
pub struct LabeledGraphs {
    n: usize,
    next: u64,
    end: u64,
}

impl LabeledGraphs {
    /// Restricts the stream to bitmasks in `range`, for partitioned
    /// consumption.
    pub fn restrict(mut self, range: std::ops::Range<u64>) -> Self {
        self.next = self.next.max(range.start);
        self.end = self.end.min(range.end);
        self
    }

    /// Bitmask of the next graph to be yielded.
    pub fn position(&self) -> u64 {
        self.next
    }
}

impl Iterator for LabeledGraphs {
    type Item = Graph;

    fn next(&mut self) -> Option<Graph> {
        if self.next >= self.end {
            return None;
        }
        let g = graph_from_mask(self.n, self.next);
        self.next += 1;
        Some(g)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = self.end.saturating_sub(self.next) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for LabeledGraphs {}
