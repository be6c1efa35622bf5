use boxcover_core::extension::{cutoff_index, eta_table};
use boxcover_core::{
    build_phi_gamma, builtin_extension, verify_conditions, ErrorKind, ExtensionSpace, KernelSource,
    PhiOptions, QuotientGroup,
};

fn space(name: &str, source: KernelSource) -> ExtensionSpace {
    ExtensionSpace::new(&builtin_extension(name).unwrap(), None, source).unwrap()
}

#[test]
fn eta_matches_coordinate_oracle() {
    let tower = builtin_extension("semidirect-swap").unwrap();
    let t = &tower.triples[0];
    let h = QuotientGroup::from_graph(tower.h_covers[0].as_ref().unwrap().cover.clone()).unwrap();
    // exponent bits (a, b) of each H vertex
    let mut bits = [0usize; 4];
    for m in 0..4 {
        let mut v = h.identity();
        if m & 1 == 1 {
            v = h.multiply(v, h.generator(0));
        }
        if m & 2 == 2 {
            v = h.multiply(v, h.generator(1));
        }
        bits[v] = m;
    }
    let swap = |m: usize| ((m & 1) << 1) | (m >> 1);
    // (m₁, s₁)(m₂, s₂) = (m₁ ⊕ α^{s₁}(m₂), s₁ ⊕ s₂)
    let mul = |(m1, s1): (usize, usize), (m2, s2): (usize, usize)| {
        (m1 ^ if s1 == 1 { swap(m2) } else { m2 }, s1 ^ s2)
    };
    let inv = |(m, s): (usize, usize)| (if s == 1 { swap(m) } else { m }, s);
    let coords = |v: usize| (bits[v % 4], v / 4);
    let sigma = |g: usize| (0usize, g);
    assert_eq!(coords(t.sigma(0)), (0, 0));
    assert_eq!(coords(t.sigma(1)), (0, 1));
    let eta = eta_table(t).unwrap();
    for v in 0..8 {
        let x = coords(v);
        for g in 0..2 {
            let want = mul(mul(inv(sigma(g)), x), sigma(x.1 ^ g));
            let got = coords(t.h_elements[eta.get(v, g)]);
            assert_eq!(got, want, "gamma {v}, g {g}");
        }
    }
}

#[test]
fn eta_identities() {
    let s = space("semidirect-swap", KernelSource::Walls);
    for (t, eta) in s.triples.iter().zip(&s.etas) {
        let e = t.h_index(t.gamma.identity()).unwrap();
        for g in 0..t.g_quotient.order() {
            assert_eq!(eta.get(t.gamma.identity(), g), e);
        }
        // η(σ(g), e) lands on the identity
        for g in 0..t.g_quotient.order() {
            assert_eq!(eta.get(t.sigma(g), t.g_quotient.identity()), e);
        }
    }
}

#[test]
fn lemma_holds_on_both_levels() {
    for name in ["semidirect-swap", "dihedral"] {
        let s = space(name, KernelSource::Walls);
        let reports = s.lemma_reports().unwrap();
        let n: Vec<usize> = s.triples.iter().map(|t| t.gamma.order()).collect();
        for (r, n) in reports.iter().zip(n) {
            assert_eq!(r.triples_checked, n * n * 2);
            assert!(r.max_violation.iter().all(|&v| v <= 0.0));
        }
    }
    let reports = space("semidirect-swap", KernelSource::Walls).lemma_reports().unwrap();
    assert_eq!(reports[0].triples_checked, 128);
    assert_eq!(reports[1].triples_checked, 131072);
}

#[test]
fn cutoff_rule() {
    assert_eq!(cutoff_index(&[10.0], 4.0), 0);
    assert_eq!(cutoff_index(&[3.0, 10.0], 4.0), 2);
    assert_eq!(cutoff_index(&[3.0, 10.0], 10.0), 3);
    assert_eq!(cutoff_index(&[], 10.0), 0);
}

#[test]
fn kernel_scale_for_induced_metric() {
    let s = space("dihedral", KernelSource::InducedMetric);
    let phi = build_phi_gamma(&s, 2.0, 0.5, PhiOptions::default()).unwrap();
    assert_eq!(phi.s_g, 1.0);
    assert!((phi.t - (4.0f64 / 3.0).ln() / 4.0).abs() < 1e-15);
    let v = verify_conditions(&phi, 0.25).unwrap();
    assert!(v.pass, "{v:?}");
}

#[test]
fn induced_kernel_is_not_psd_on_swap_tower() {
    let s = space("semidirect-swap", KernelSource::InducedMetric);
    let err = build_phi_gamma(&s, 2.0, 0.5, PhiOptions::default()).unwrap_err();
    assert_eq!(err.kind(), ErrorKind::Validation);
    assert_eq!(err.code(), "KernelNotPSD");
}

#[test]
fn phi_is_unit_and_supported() {
    for name in ["semidirect-swap", "dihedral"] {
        let s = space(name, KernelSource::Walls);
        for r in [1.0, 2.0, 4.0] {
            let phi = build_phi_gamma(&s, r, 0.25, PhiOptions::default()).unwrap();
            assert!(phi.max_norm_deviation() <= 1e-9);
            for (x, terms) in phi.terms.iter().enumerate() {
                let (i, gamma) = s.gamma_box.locate(x);
                let p = s.g_box.global_index(i, s.triples[i].pi(gamma));
                assert!(terms.windows(2).all(|w| w[0].g < w[1].g));
                for t in terms {
                    assert!(s.g_metric.get(p, t.g) <= phi.s_g);
                    let (hi, _) = s.gamma_box.locate(s.h_points[t.h]);
                    assert_eq!(hi, i);
                }
            }
        }
    }
}

#[test]
fn forced_cutoff_collapses_first_component() {
    let s = space("dihedral", KernelSource::Walls);
    let opts = PhiOptions {
        min_cutoff: 1,
        ..PhiOptions::default()
    };
    let phi = build_phi_gamma(&s, 2.0, 0.5, opts).unwrap();
    assert_eq!(phi.n_r, 1);
    let first = &phi.terms[0];
    assert_eq!(first.len(), 1);
    for x in 0..s.gamma_box.offset(1) {
        assert_eq!(&phi.terms[x], first);
        assert!((phi.inner(0, x) - 1.0).abs() < 1e-12);
    }
    assert!(phi.m_gamma > 0.0);
    assert!(verify_conditions(&phi, 0.25).unwrap().pass);
}

#[test]
fn radius_past_the_gap_cuts_everything() {
    let s = space("dihedral", KernelSource::Walls);
    let gap = s.gamma_box.gaps()[0];
    let phi = build_phi_gamma(&s, gap, 0.5, PhiOptions::default()).unwrap();
    assert_eq!(phi.n_r, 2);
    assert!(phi.terms.iter().all(|t| t == &phi.terms[0]));
    let v = verify_conditions(&phi, 0.25).unwrap();
    assert!(v.pass);
    assert_eq!(v.pairs_2, 0);
}

#[test]
fn grid_passes_on_both_towers() {
    for name in ["semidirect-swap", "dihedral"] {
        let s = space(name, KernelSource::Walls);
        for r in [1.0, 2.0, 4.0] {
            for eps in [0.5, 0.25] {
                let phi = build_phi_gamma(&s, r, eps, PhiOptions::default()).unwrap();
                for delta in [0.5, 0.25] {
                    let v = verify_conditions(&phi, delta).unwrap();
                    assert!(v.pass, "{name} R={r} eps={eps} delta={delta}: {v:?}");
                    assert!(v.min_margin_1.unwrap() > 0.0);
                    assert!(v.empirical_s.unwrap() <= s.gamma_box.gaps()[0]);
                }
            }
        }
    }
}

#[test]
fn custom_gaps_are_validated() {
    let tower = builtin_extension("dihedral").unwrap();
    let err = ExtensionSpace::new(&tower, Some(vec![5.0]), KernelSource::Walls).unwrap_err();
    assert_eq!(err.kind(), ErrorKind::Validation);
    let s = ExtensionSpace::new(&tower, Some(vec![20.0]), KernelSource::Walls).unwrap();
    assert_eq!(s.g_box.gaps(), &[20.0]);
}

#[test]
fn bad_parameters_are_rejected() {
    let s = space("dihedral", KernelSource::Walls);
    assert!(build_phi_gamma(&s, 1.0, 2.0, PhiOptions::default()).is_err());
    assert!(build_phi_gamma(&s, -1.0, 0.5, PhiOptions::default()).is_err());
    let phi = build_phi_gamma(&s, 1.0, 0.5, PhiOptions::default()).unwrap();
    assert!(verify_conditions(&phi, 0.0).is_err());
}
