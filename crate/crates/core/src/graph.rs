//! Finite labeled multigraphs and the graph algorithms the rest of the crate
//! builds on.
//!
//! Conventions: every edge is an undirected unit-length edge for metric
//! purposes, a loop is a cycle of length 1 and contributes 2 to the degree,
//! and two parallel edges form a cycle of length 2. Traversals always visit
//! vertices in queue order and scan incident edges by ascending edge index.

use std::collections::VecDeque;
use std::fmt;

use bitvec::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{eig_sym, DenseMatrix};
use crate::metric::MetricMatrix;

/// GF(2) vector.
pub type Gf2Vector = BitVec<u64, Lsb0>;

/// An oriented edge carrying a generator label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    pub label: usize,
}

impl Edge {
    pub fn new(src: usize, dst: usize, label: usize) -> Self {
        Edge { src, dst, label }
    }

    pub fn is_loop(&self) -> bool {
        self.src == self.dst
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledMultigraph {
    vertex_count: usize,
    edges: Vec<Edge>,
    basepoint: usize,
}

impl LabeledMultigraph {
    pub fn new(vertex_count: usize, edges: Vec<Edge>, basepoint: usize) -> Result<Self> {
        if vertex_count > 0 && basepoint >= vertex_count {
            return Err(Error::InvalidGraph(format!(
                "basepoint {basepoint} out of range for {vertex_count} vertices"
            )));
        }
        if let Some((i, e)) = edges
            .iter()
            .enumerate()
            .find(|(_, e)| e.src >= vertex_count || e.dst >= vertex_count)
        {
            return Err(Error::InvalidGraph(format!(
                "edge {i} ({} -> {}) out of range",
                e.src, e.dst
            )));
        }
        Ok(LabeledMultigraph {
            vertex_count,
            edges,
            basepoint,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> Edge {
        self.edges[i]
    }

    pub fn basepoint(&self) -> usize {
        self.basepoint
    }

    /// One more than the largest label in use.
    pub fn label_count(&self) -> usize {
        self.edges.iter().map(|e| e.label + 1).max().unwrap_or(0)
    }

    /// Same graph with vertex `v` renamed to `perm[v]`.
    pub fn relabel_vertices(&self, perm: &[usize]) -> Result<Self> {
        let edges = self
            .edges
            .iter()
            .map(|e| Edge::new(perm[e.src], perm[e.dst], e.label))
            .collect();
        LabeledMultigraph::new(self.vertex_count, edges, perm[self.basepoint])
    }

    /// For each vertex, `(edge index, other endpoint)` in ascending edge
    /// order. A loop appears twice in its vertex's list.
    pub fn incidence(&self) -> Vec<Vec<(usize, usize)>> {
        let mut inc = vec![Vec::new(); self.vertex_count];
        for (i, e) in self.edges.iter().enumerate() {
            inc[e.src].push((i, e.dst));
            inc[e.dst].push((i, e.src));
        }
        inc
    }

    /// Degrees with loops counted twice.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertex_count];
        for e in &self.edges {
            deg[e.src] += 1;
            deg[e.dst] += 1;
        }
        deg
    }

    pub fn is_connected(&self) -> bool {
        if self.vertex_count == 0 {
            return true;
        }
        let inc = self.incidence();
        bfs_distances(&inc, self.basepoint)
            .iter()
            .all(|&d| d != UNREACHED)
    }
}

pub(crate) const UNREACHED: u32 = u32::MAX;

pub(crate) fn bfs_distances(inc: &[Vec<(usize, usize)>], src: usize) -> Vec<u32> {
    let mut dist = vec![UNREACHED; inc.len()];
    let mut queue = VecDeque::new();
    dist[src] = 0;
    queue.push_back(src);
    while let Some(u) = queue.pop_front() {
        let du = dist[u];
        for &(_, w) in &inc[u] {
            if dist[w] == UNREACHED {
                dist[w] = du + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// All-pairs shortest-path distances, every edge undirected of length 1.
pub fn bfs_metric(g: &LabeledMultigraph) -> Result<MetricMatrix> {
    let n = g.vertex_count();
    let inc = g.incidence();
    let mut m = MetricMatrix::zeros(n);
    for s in 0..n {
        let dist = bfs_distances(&inc, s);
        for (t, &d) in dist.iter().enumerate() {
            if d == UNREACHED {
                return Err(Error::DisconnectedGraph);
            }
            m.set(s, t, d as f64);
        }
    }
    Ok(m)
}

/// Largest graph distance, without materialising the distance matrix.
pub fn diameter(g: &LabeledMultigraph) -> Result<usize> {
    let inc = g.incidence();
    let mut diam = 0;
    for s in 0..g.vertex_count() {
        for d in bfs_distances(&inc, s) {
            if d == UNREACHED {
                return Err(Error::DisconnectedGraph);
            }
            diam = diam.max(d as usize);
        }
    }
    Ok(diam)
}

/// Length of the shortest cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Girth {
    Finite(usize),
    Infinite,
}

impl Girth {
    pub fn finite(self) -> Option<usize> {
        match self {
            Girth::Finite(g) => Some(g),
            Girth::Infinite => None,
        }
    }
}

impl fmt::Display for Girth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Girth::Finite(g) => write!(f, "{g}"),
            Girth::Infinite => f.write_str("inf"),
        }
    }
}

/// Shortest cycle length. Runs a BFS from every vertex and closes a cycle on
/// each non-tree edge, which is exact once minimised over all roots.
pub fn girth(g: &LabeledMultigraph) -> Girth {
    let n = g.vertex_count();
    let inc = g.incidence();
    let mut best = usize::MAX;
    let mut dist = vec![UNREACHED; n];
    let mut parent_edge = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for root in 0..n {
        dist.iter_mut().for_each(|d| *d = UNREACHED);
        dist[root] = 0;
        parent_edge[root] = usize::MAX;
        queue.clear();
        queue.push_back(root);
        while let Some(u) = queue.pop_front() {
            let du = dist[u] as usize;
            if 2 * du >= best {
                break;
            }
            for &(e, w) in &inc[u] {
                if dist[w] == UNREACHED {
                    dist[w] = dist[u] + 1;
                    parent_edge[w] = e;
                    queue.push_back(w);
                } else if e != parent_edge[u] {
                    best = best.min(du + dist[w] as usize + 1);
                }
            }
        }
    }
    if best == usize::MAX {
        Girth::Infinite
    } else {
        Girth::Finite(best)
    }
}

/// Edge indices whose removal disconnects their component.
pub fn bridges(g: &LabeledMultigraph) -> Vec<usize> {
    let n = g.vertex_count();
    let inc = g.incidence();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut is_bridge = vec![false; g.edge_count()];
    let mut timer = 0;
    // (vertex, edge used to enter it, next incidence position)
    let mut stack: Vec<(usize, usize, usize)> = Vec::new();
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        stack.push((root, usize::MAX, 0));
        while let Some(top) = stack.last_mut() {
            let (v, entry) = (top.0, top.1);
            if top.2 < inc[v].len() {
                let (e, w) = inc[v][top.2];
                top.2 += 1;
                if e == entry {
                    continue;
                }
                if disc[w] == usize::MAX {
                    disc[w] = timer;
                    low[w] = timer;
                    timer += 1;
                    stack.push((w, e, 0));
                } else {
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(&(u, _, _)) = stack.last() {
                    low[u] = low[u].min(low[v]);
                    if low[v] > disc[u] {
                        is_bridge[entry] = true;
                    }
                }
            }
        }
    }
    (0..g.edge_count()).filter(|&e| is_bridge[e]).collect()
}

/// Connected and bridgeless.
pub fn is_two_edge_connected(g: &LabeledMultigraph) -> bool {
    g.vertex_count() > 0 && g.is_connected() && bridges(g).is_empty()
}

/// Spanning tree, cotree and the GF(2) coordinates of every edge in the
/// fundamental-cycle basis.
#[derive(Debug, Clone)]
pub struct CycleBasis {
    /// `is_tree[e]` for every edge.
    pub is_tree: Vec<bool>,
    /// Cotree edges in ascending edge order; position `j` is basis vector `j`.
    pub cotree_edges: Vec<usize>,
    /// `E - V + 1`.
    pub rank: usize,
    /// Per edge, its coordinate vector (length `rank`).
    pub crossing_vectors: Vec<Gf2Vector>,
    /// Tree edge and parent vertex for every non-root vertex.
    pub parent: Vec<Option<(usize, usize)>>,
    /// BFS discovery order from the basepoint.
    pub order: Vec<usize>,
}

impl CycleBasis {
    pub fn tree_edges(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.is_tree.len()).filter(|&e| self.is_tree[e])
    }

    /// Basis position of a cotree edge.
    pub fn cotree_position(&self, edge: usize) -> Option<usize> {
        self.cotree_edges.binary_search(&edge).ok()
    }

    /// Indicator over all edges of the fundamental cycle of cotree edge `j`.
    pub fn fundamental_cycle(&self, j: usize) -> Gf2Vector {
        let mut row = bitvec![u64, Lsb0; 0; self.is_tree.len()];
        for (e, cv) in self.crossing_vectors.iter().enumerate() {
            if cv[j] {
                row.set(e, true);
            }
        }
        row
    }

    /// Indicator over all edges of the tree path from the root to each vertex.
    pub fn tree_paths(&self) -> Vec<Gf2Vector> {
        let m = self.is_tree.len();
        let mut paths = vec![bitvec![u64, Lsb0; 0; m]; self.parent.len()];
        for &v in &self.order {
            if let Some((e, p)) = self.parent[v] {
                let mut row = paths[p].clone();
                row.set(e, true);
                paths[v] = row;
            }
        }
        paths
    }
}

/// Fundamental-cycle basis of `H₁(g; Z/2)` from the BFS tree rooted at the
/// basepoint.
pub fn cycle_basis(g: &LabeledMultigraph) -> Result<CycleBasis> {
    let n = g.vertex_count();
    let m = g.edge_count();
    if n == 0 {
        return Err(Error::InvalidGraph("empty graph".into()));
    }
    let inc = g.incidence();
    let mut parent = vec![None; n];
    let mut seen = vec![false; n];
    let mut is_tree = vec![false; m];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::new();
    seen[g.basepoint()] = true;
    queue.push_back(g.basepoint());
    while let Some(u) = queue.pop_front() {
        order.push(u);
        for &(e, w) in &inc[u] {
            if !seen[w] {
                seen[w] = true;
                parent[w] = Some((e, u));
                is_tree[e] = true;
                queue.push_back(w);
            }
        }
    }
    if order.len() != n {
        return Err(Error::DisconnectedGraph);
    }
    let cotree_edges: Vec<usize> = (0..m).filter(|&e| !is_tree[e]).collect();
    let rank = cotree_edges.len();

    // Each cotree endpoint toggles its basis vector; a tree edge lies on the
    // fundamental cycle of j iff exactly one endpoint of j sits below it.
    let mut acc = vec![bitvec![u64, Lsb0; 0; rank]; n];
    for (j, &e) in cotree_edges.iter().enumerate() {
        let edge = g.edge(e);
        let s = acc[edge.src][j];
        acc[edge.src].set(j, !s);
        let d = acc[edge.dst][j];
        acc[edge.dst].set(j, !d);
    }
    let mut crossing_vectors = vec![bitvec![u64, Lsb0; 0; rank]; m];
    for &v in order.iter().rev() {
        if let Some((e, p)) = parent[v] {
            let below = acc[v].clone();
            crossing_vectors[e] = below.clone();
            acc[p] ^= below;
        }
    }
    for (j, &e) in cotree_edges.iter().enumerate() {
        crossing_vectors[e].set(j, true);
    }
    Ok(CycleBasis {
        is_tree,
        cotree_edges,
        rank,
        crossing_vectors,
        parent,
        order,
    })
}

/// Eigenvalues of `A / d` for a connected `d`-regular graph, descending.
pub fn spectrum(g: &LabeledMultigraph) -> Result<Vec<f64>> {
    let n = g.vertex_count();
    let deg = g.degrees();
    let d = deg.first().copied().unwrap_or(0);
    if let Some((v, &dv)) = deg.iter().enumerate().find(|(_, &dv)| dv != d || dv == 0) {
        return Err(Error::NotRegular {
            vertex: v,
            degree: dv,
            expected: d.max(1),
        });
    }
    if !g.is_connected() {
        return Err(Error::DisconnectedGraph);
    }
    let mut a = DenseMatrix::zeros(n);
    for e in g.edges() {
        a.set(e.src, e.dst, a.get(e.src, e.dst) + 1.0);
        a.set(e.dst, e.src, a.get(e.dst, e.src) + 1.0);
    }
    let inv = 1.0 / d as f64;
    let a = DenseMatrix::from_fn(n, |i, j| a.get(i, j) * inv);
    Ok(eig_sym(&a)?.values)
}
