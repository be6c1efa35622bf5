//! Built-in seed graphs and fixtures.

use crate::boxspace::{assemble, common_gaps, GapRule};
use crate::cover::{build_tower, DEFAULT_SIZE_CAP};
use crate::error::{Error, Result};
use crate::graph::{bfs_metric, Edge, LabeledMultigraph};
use crate::group::{QuotientGroup, Word};
use crate::metric::MetricMatrix;

pub const SEED_NAMES: [&str; 4] = ["ags-rose", "cycle4", "theta", "path-cycle"];

/// One vertex with `k` loops labeled `0..k`: the Cayley graph of the trivial
/// quotient of the free group of rank `k`.
pub fn rose(k: usize) -> LabeledMultigraph {
    let edges = (0..k).map(|l| Edge::new(0, 0, l)).collect();
    LabeledMultigraph::new(1, edges, 0).expect("rose is valid")
}

/// Cycle on `n` vertices with edges `i -> i+1` all labeled 0, i.e. the
/// Cayley graph of `Z/n`.
pub fn cycle(n: usize) -> LabeledMultigraph {
    let edges = (0..n).map(|i| Edge::new(i, (i + 1) % n, 0)).collect();
    LabeledMultigraph::new(n, edges, 0).expect("cycle is valid")
}

/// Two vertices joined by three parallel edges.
pub fn theta() -> LabeledMultigraph {
    let edges = (0..3).map(|l| Edge::new(0, 1, l)).collect();
    LabeledMultigraph::new(2, edges, 0).expect("theta is valid")
}

/// Cayley multigraph of `(Z/2)²` on `{a, b}`; vertex `v` has bit 0 for `a`
/// and bit 1 for `b`.
pub fn klein_four_cayley() -> LabeledMultigraph {
    let mut edges = Vec::new();
    for v in 0..4 {
        edges.push(Edge::new(v, v ^ 1, 0));
        edges.push(Edge::new(v, v ^ 2, 1));
    }
    LabeledMultigraph::new(4, edges, 0).expect("klein four is valid")
}

/// A triangle with a pendant edge (edge 3 is a bridge).
pub fn path_with_cycle() -> LabeledMultigraph {
    let edges = vec![
        Edge::new(0, 1, 0),
        Edge::new(1, 2, 0),
        Edge::new(2, 0, 0),
        Edge::new(2, 3, 0),
    ];
    LabeledMultigraph::new(4, edges, 0).expect("path-with-cycle is valid")
}

/// Graph metric of the complete bipartite graph `K_{2,3}`, a five-point
/// metric that is not of negative type.
pub fn k23_metric() -> MetricMatrix {
    let side = |i: usize| i < 2;
    MetricMatrix::from_fn(5, |i, j| {
        if i == j {
            0.0
        } else if side(i) == side(j) {
            2.0
        } else {
            1.0
        }
    })
}

pub fn seed(name: &str) -> Result<LabeledMultigraph> {
    match name {
        "ags-rose" => Ok(rose(2)),
        "cycle4" => Ok(cycle(4)),
        "theta" => Ok(theta()),
        "path-cycle" => Ok(path_with_cycle()),
        _ => Err(Error::Parse(format!(
            "unknown builtin seed {name:?} (known: {})",
            SEED_NAMES.join(", ")
        ))),
    }
}

/// Box-space metrics of the rose tower quotients (orders 1, 4, 128) for the
/// generating sets `{a, b}` and `{a, b, ab}`, on shared gaps.
pub fn generating_set_pair() -> Result<(MetricMatrix, MetricMatrix)> {
    let tower = build_tower(&rose(2), 3, DEFAULT_SIZE_CAP)?;
    let ab: Word = "ab".parse()?;
    let mut narrow = Vec::new();
    let mut wide = Vec::new();
    for i in 0..tower.sizes.len() {
        let q = QuotientGroup::from_graph(tower.graph(i).clone())?;
        let gens = [q.generator(0), q.generator(1), q.evaluate_word(&ab)?];
        narrow.push((bfs_metric(&q.cayley_graph(&gens[..2]))?, q.identity()));
        wide.push((bfs_metric(&q.cayley_graph(&gens))?, q.identity()));
    }
    let dn: Vec<f64> = narrow.iter().map(|(m, _)| m.diameter()).collect();
    let dw: Vec<f64> = wide.iter().map(|(m, _)| m.diameter()).collect();
    let rule = GapRule::Custom(common_gaps(&dn, &dw));
    Ok((
        assemble(narrow, &rule)?.global_metric(),
        assemble(wide, &rule)?.global_metric(),
    ))
}
