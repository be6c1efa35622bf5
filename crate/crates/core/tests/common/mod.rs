//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::VecDeque;

use boxcover_core::{Edge, LabeledMultigraph, MetricMatrix};

/// Cayley multigraph of `(Z/2)^2` built straight from XOR.
pub fn klein_oracle() -> LabeledMultigraph {
    let mut edges = Vec::new();
    for v in 0..4usize {
        for bit in 0..2 {
            edges.push(Edge::new(v, v ^ (1 << bit), bit));
        }
    }
    LabeledMultigraph::new(4, edges, 0).unwrap()
}

fn sorted_edges(g: &LabeledMultigraph, map: &[usize]) -> Vec<(usize, usize, usize)> {
    let mut e: Vec<_> = g
        .edges()
        .iter()
        .map(|e| (map[e.src], map[e.dst], e.label))
        .collect();
    e.sort_unstable();
    e
}

/// Whether `map` carries the labeled edge multiset of `a` onto that of `b`.
pub fn is_label_isomorphism(a: &LabeledMultigraph, b: &LabeledMultigraph, map: &[usize]) -> bool {
    let ident: Vec<usize> = (0..b.vertex_count()).collect();
    a.vertex_count() == b.vertex_count() && sorted_edges(a, map) == sorted_edges(b, &ident)
}

/// Label-preserving isomorphism search for connected graphs in which each
/// vertex has at most one out-edge per label: the image of vertex 0 fixes
/// everything else.
pub fn label_isomorphism(a: &LabeledMultigraph, b: &LabeledMultigraph) -> Option<Vec<usize>> {
    let n = a.vertex_count();
    if n != b.vertex_count() || a.edge_count() != b.edge_count() {
        return None;
    }
    let k = a.label_count().max(b.label_count());
    let step = |g: &LabeledMultigraph| {
        let mut out = vec![vec![None; 2 * k]; n];
        for e in g.edges() {
            out[e.src][e.label] = Some(e.dst);
            out[e.dst][k + e.label] = Some(e.src);
        }
        out
    };
    let (sa, sb) = (step(a), step(b));
    for start in 0..n {
        let mut map = vec![usize::MAX; n];
        map[0] = start;
        let mut queue = VecDeque::from([0]);
        let mut ok = true;
        while let Some(u) = queue.pop_front() {
            for slot in 0..2 * k {
                match (sa[u][slot], sb[map[u]][slot]) {
                    (Some(v), Some(w)) => {
                        if map[v] == usize::MAX {
                            map[v] = w;
                            queue.push_back(v);
                        } else if map[v] != w {
                            ok = false;
                        }
                    }
                    (None, None) => {}
                    _ => ok = false,
                }
            }
        }
        if ok && map.iter().all(|&x| x != usize::MAX) && is_label_isomorphism(a, b, &map) {
            return Some(map);
        }
    }
    None
}

/// All-pairs distances by Floyd–Warshall on the undirected multigraph.
pub fn floyd_warshall(g: &LabeledMultigraph) -> Vec<Vec<f64>> {
    let n = g.vertex_count();
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    for e in g.edges() {
        if e.src != e.dst {
            d[e.src][e.dst] = 1.0;
            d[e.dst][e.src] = 1.0;
        }
    }
    for m in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][m] + d[m][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

/// Girth by deleting each edge and measuring the detour between its ends.
pub fn girth_oracle(g: &LabeledMultigraph) -> Option<usize> {
    let n = g.vertex_count();
    let mut best: Option<usize> = None;
    for (skip, e) in g.edges().iter().enumerate() {
        let len = if e.is_loop() {
            Some(1)
        } else {
            let mut dist = vec![usize::MAX; n];
            dist[e.src] = 0;
            let mut q = VecDeque::from([e.src]);
            while let Some(u) = q.pop_front() {
                for (i, f) in g.edges().iter().enumerate() {
                    if i == skip {
                        continue;
                    }
                    for (a, b) in [(f.src, f.dst), (f.dst, f.src)] {
                        if a == u && dist[b] == usize::MAX {
                            dist[b] = dist[u] + 1;
                            q.push_back(b);
                        }
                    }
                }
            }
            (dist[e.dst] != usize::MAX).then(|| dist[e.dst] + 1)
        };
        if let Some(l) = len {
            best = Some(best.map_or(l, |b: usize| b.min(l)));
        }
    }
    best
}

/// Eigenvalues of a symmetric matrix, descending, by nalgebra.
pub fn eigenvalues_oracle(rows: &[Vec<f64>]) -> Vec<f64> {
    let n = rows.len();
    let m = nalgebra::DMatrix::from_fn(n, n, |i, j| rows[i][j]);
    let mut v: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().copied().collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// Normalized adjacency (a loop adds 2 on the diagonal).
pub fn normalized_adjacency(g: &LabeledMultigraph) -> Vec<Vec<f64>> {
    let n = g.vertex_count();
    let mut a = vec![vec![0.0; n]; n];
    let mut deg = vec![0.0; n];
    for e in g.edges() {
        a[e.src][e.dst] += 1.0;
        a[e.dst][e.src] += 1.0;
        deg[e.src] += 1.0;
        deg[e.dst] += 1.0;
    }
    for row in &mut a {
        for (j, x) in row.iter_mut().enumerate() {
            *x /= deg[j];
        }
    }
    a
}

pub fn metric_rows(m: &MetricMatrix) -> Vec<Vec<f64>> {
    m.rows().map(|r| r.to_vec()).collect()
}

/// Schreier graph of permutations: label `l` sends `v` to `perms[l][v]`.
pub fn schreier_graph(perms: &[Vec<usize>]) -> LabeledMultigraph {
    let n = perms[0].len();
    let mut edges = Vec::new();
    for v in 0..n {
        for (l, p) in perms.iter().enumerate() {
            edges.push(Edge::new(v, p[v], l));
        }
    }
    LabeledMultigraph::new(n, edges, 0).unwrap()
}
