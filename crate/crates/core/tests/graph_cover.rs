mod common;

use boxcover_core::builtins;
use boxcover_core::cover::{agreement_radius, build_tower, DEFAULT_SIZE_CAP};
use boxcover_core::graph::{bfs_metric, cycle_basis, diameter, girth, is_two_edge_connected, spectrum};
use boxcover_core::{homology_cover, wall_metric, Girth, LabeledMultigraph};
use proptest::prelude::*;

use common::*;

/// Connected Schreier graphs on up to 9 vertices: label 0 is a full cycle,
/// the remaining labels are arbitrary permutations.
fn schreier() -> impl Strategy<Value = LabeledMultigraph> {
    (2usize..=9, 0usize..=1).prop_flat_map(|(n, extra)| {
        let perm = Just((0..n).collect::<Vec<_>>()).prop_shuffle();
        (perm.clone(), proptest::collection::vec(perm, extra)).prop_map(|(order, rest)| {
            let n = order.len();
            let mut cyc = vec![0; n];
            for i in 0..n {
                cyc[order[i]] = order[(i + 1) % n];
            }
            let mut perms = vec![cyc];
            perms.extend(rest);
            schreier_graph(&perms)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn bfs_metric_is_a_metric_and_matches_floyd(g in schreier()) {
        let m = bfs_metric(&g).unwrap();
        prop_assert!(m.check_axioms(0.0).is_ok());
        prop_assert_eq!(metric_rows(&m), floyd_warshall(&g));
    }

    #[test]
    fn cycle_rank_ignores_vertex_order(g in schreier()) {
        let n = g.vertex_count();
        let rev: Vec<usize> = (0..n).rev().collect();
        let h = g.relabel_vertices(&rev).unwrap();
        let r = cycle_basis(&g).unwrap().rank;
        prop_assert_eq!(r, g.edge_count() + 1 - n);
        prop_assert_eq!(cycle_basis(&h).unwrap().rank, r);
        prop_assert_eq!(girth(&h), girth(&g));
    }

    #[test]
    fn girth_matches_edge_deletion_oracle(g in schreier()) {
        prop_assert_eq!(girth(&g).finite(), girth_oracle(&g));
    }

    #[test]
    fn cover_invariants(g in schreier()) {
        let rank = cycle_basis(&g).unwrap().rank;
        prop_assume!(g.vertex_count() << rank <= 1024);
        let c = homology_cover(&g).unwrap();
        let n = g.vertex_count();
        prop_assert_eq!(c.cover.vertex_count(), n << rank);
        prop_assert_eq!(c.cover.edge_count(), g.edge_count() << rank);
        prop_assert!(c.cover.is_connected());
        // lifts project to the base edge, endpoints project to its ends
        for (i, e) in c.cover.edges().iter().enumerate() {
            let b = g.edge(c.edge_projection[i]);
            prop_assert_eq!(c.vertex_projection[e.src], b.src);
            prop_assert_eq!(c.vertex_projection[e.dst], b.dst);
            prop_assert_eq!(e.label, b.label);
        }
        for x in 0..c.cover.vertex_count() {
            prop_assert_eq!(c.sheet(x) * n + c.vertex_projection[x], x);
        }
        // crossing an edge lifting e flips exactly the wall bit of e
        for (i, e) in c.cover.edges().iter().enumerate() {
            if e.src == e.dst {
                continue;
            }
            let be = c.edge_projection[i];
            for f in 0..g.edge_count() {
                prop_assert_eq!(c.wall_bit(e.src, f) != c.wall_bit(e.dst, f), f == be);
            }
        }
        let gb = girth(&g);
        let gc = girth(&c.cover);
        prop_assert!(gc >= gb, "cover girth {} below base {}", gc, gb);
        let dw = wall_metric(&c);
        let dg = bfs_metric(&c.cover).unwrap();
        for (x, y, d) in dg.pairs() {
            prop_assert!(dw.get(x, y) <= d);
        }
        for shift in 0..1usize << rank {
            let deck = c.deck_transformation(shift);
            prop_assert!(is_label_isomorphism(&c.cover, &c.cover, &deck));
        }
    }
}

#[test]
fn small_graph_examples() {
    let c4 = bfs_metric(&builtins::cycle(4)).unwrap();
    assert_eq!(c4.diameter(), 2.0);
    let ones = (0..4).flat_map(|i| (0..4).map(move |j| (i, j))).filter(|&(i, j)| c4.get(i, j) == 1.0);
    assert_eq!(ones.count(), 8);
    assert!(is_two_edge_connected(&builtins::theta()));
    assert!(!is_two_edge_connected(&builtins::path_with_cycle()));
    assert_eq!(girth(&builtins::rose(2)), Girth::Finite(1));
    assert_eq!(girth(&klein_oracle()), Girth::Finite(2));
    assert_eq!(cycle_basis(&klein_oracle()).unwrap().rank, 5);
    let tree = LabeledMultigraph::new(
        3,
        vec![boxcover_core::Edge::new(0, 1, 0), boxcover_core::Edge::new(1, 2, 0)],
        0,
    )
    .unwrap();
    assert_eq!(girth(&tree), Girth::Infinite);
}

#[test]
fn rose_cover_is_the_klein_cayley_graph() {
    let c = homology_cover(&builtins::rose(2)).unwrap();
    assert_eq!(c.deck_rank, 2);
    assert!(label_isomorphism(&c.cover, &klein_oracle()).is_some());
    let c2 = homology_cover(&c.cover).unwrap();
    assert_eq!(c2.cover.vertex_count(), 128);
    assert_eq!(c2.deck_rank, 5);
}

#[test]
fn cycle_cover_is_the_doubled_cycle() {
    let c = homology_cover(&builtins::cycle(4)).unwrap();
    assert!(label_isomorphism(&c.cover, &builtins::cycle(8)).is_some());
    assert!(label_isomorphism(&c.cover, &builtins::cycle(7)).is_none());
}

#[test]
fn theta_cover_shape() {
    let c = homology_cover(&builtins::theta()).unwrap();
    assert_eq!(c.cover.vertex_count(), 8);
    assert_eq!(c.cover.edge_count(), 12);
    assert!(c.cover.is_connected());
    assert_eq!(cycle_basis(&c.cover).unwrap().rank, 5);
}

#[test]
fn tower_shapes() {
    let rose = build_tower(&builtins::rose(2), 4, DEFAULT_SIZE_CAP).unwrap();
    assert_eq!(rose.sizes, vec![1, 4, 128]);
    assert!(rose.truncated);
    assert_eq!(rose.diameters, vec![0, 2, 8]);
    let cyc = build_tower(&builtins::cycle(4), 5, DEFAULT_SIZE_CAP).unwrap();
    assert_eq!(cyc.sizes, vec![4, 8, 16, 32, 64]);
    assert_eq!(
        cyc.girths.iter().map(|g| g.finite().unwrap()).collect::<Vec<_>>(),
        vec![4, 8, 16, 32, 64]
    );
    let theta = build_tower(&builtins::theta(), 3, DEFAULT_SIZE_CAP).unwrap();
    assert_eq!(theta.sizes, vec![2, 8, 256]);
    for i in 0..theta.sizes.len() {
        assert_eq!(diameter(theta.graph(i)).unwrap(), theta.diameters[i]);
    }
}

#[test]
fn level_two_rose_diameter_matches_floyd() {
    let tower = build_tower(&builtins::rose(2), 3, DEFAULT_SIZE_CAP).unwrap();
    let d = floyd_warshall(tower.graph(2));
    let max = d.iter().flatten().fold(0.0f64, |a, &b| a.max(b));
    assert_eq!(max, 8.0);
}

#[test]
fn agreement_radius_reaches_base_girth() {
    for (seed, levels) in [("cycle4", 4), ("theta", 3), ("ags-rose", 3)] {
        let tower = build_tower(&builtins::seed(seed).unwrap(), levels, DEFAULT_SIZE_CAP).unwrap();
        for c in &tower.levels {
            let rep = agreement_radius(c).unwrap();
            let g = rep.base_girth.unwrap();
            assert!(rep.radius >= g, "{seed}: radius {} < girth {g}", rep.radius);
        }
    }
}

#[test]
fn bridge_warning_for_path_with_cycle() {
    let c = homology_cover(&builtins::path_with_cycle()).unwrap();
    assert!(!c.warnings.is_empty());
}

#[test]
fn spectrum_pulls_back_and_matches_oracle() {
    let close = |xs: &[f64], x: f64| xs.iter().any(|&y| (x - y).abs() < 1e-8);
    for (seed, levels) in [("cycle4", 4), ("theta", 2), ("ags-rose", 3)] {
        let tower = build_tower(&builtins::seed(seed).unwrap(), levels, DEFAULT_SIZE_CAP).unwrap();
        for i in 1..tower.sizes.len() {
            let base = spectrum(tower.graph(i - 1)).unwrap();
            let up = spectrum(tower.graph(i)).unwrap();
            for &l in &base {
                assert!(close(&up, l), "{seed} level {i}: {l} missing");
            }
        }
    }
    let tower = build_tower(&builtins::rose(2), 3, DEFAULT_SIZE_CAP).unwrap();
    let ours = spectrum(tower.graph(2)).unwrap();
    let oracle = eigenvalues_oracle(&normalized_adjacency(tower.graph(2)));
    for (a, b) in ours.iter().zip(&oracle) {
        assert!((a - b).abs() < 1e-9, "{a} vs {b}");
    }
    let c8 = spectrum(&builtins::cycle(8)).unwrap();
    let mut closed: Vec<f64> = (0..8).map(|j| (2.0 * std::f64::consts::PI * j as f64 / 8.0).cos()).collect();
    closed.sort_by(|a, b| b.total_cmp(a));
    for (a, b) in c8.iter().zip(&closed) {
        assert!((a - b).abs() < 1e-10);
    }
}
