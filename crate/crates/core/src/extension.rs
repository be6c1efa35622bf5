//! Unit-vector maps on a tower of finite extensions `1 → H_i → Γ_i → G_i → 1`
//! built from a ball map on `⊔G_i` and a Gaussian map on `⊔H_i`, with
//! exhaustive checks of the overlap and decay conditions.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::boxspace::{assemble, distortion_envelope, BoxSpace, EnvelopePair, GapRule};
use crate::cover::hamming;
use crate::embedding::{ball_map, gaussian_unit_map, BallMap, UnitVectorMap, DEFAULT_TOL_NORM, DEFAULT_TOL_PSD};
use crate::error::{Error, Result};
use crate::graph::bfs_metric;
use crate::linalg::DenseMatrix;
use crate::metric::MetricMatrix;
use crate::semidirect::{ExtensionTower, ExtensionTriple};

/// Which metric on `⊔H_i` feeds the Gaussian kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelSource {
    /// Wall box metric of the `H` covers, on the same gaps.
    Walls,
    /// The metric `⊔H_i` inherits from `⊔Γ_i`.
    InducedMetric,
}

/// `η(γ, g)` as positions in `h_elements`.
#[derive(Debug, Clone)]
pub struct EtaTable {
    g_order: usize,
    values: Vec<usize>,
}

impl EtaTable {
    #[inline]
    pub fn get(&self, gamma: usize, g: usize) -> usize {
        self.values[gamma * self.g_order + g]
    }
}

/// `η(γ, g) = σ(g)⁻¹ · γ · σ(π(γ)⁻¹ g)`, checked to land in `H`.
pub fn eta_table(t: &ExtensionTriple) -> Result<EtaTable> {
    let gm = &t.gamma;
    let gq = &t.g_quotient;
    let m = gq.order();
    let mut values = Vec::with_capacity(gm.order() * m);
    for gamma in 0..gm.order() {
        let p_inv = gq.inverse(t.pi(gamma));
        for g in 0..m {
            let left = gm.multiply(gm.inverse(t.sigma(g)), gamma);
            let v = gm.multiply(left, t.sigma(gq.multiply(p_inv, g)));
            let idx = t.h_index(v).ok_or(Error::EtaEscapesH {
                gamma,
                g,
                value: v,
            })?;
            values.push(idx);
        }
    }
    Ok(EtaTable { g_order: m, values })
}

/// Slack of both comparison inequalities over all `(γ₁, γ₂, g)`.
#[derive(Debug, Clone, Serialize)]
pub struct LemmaReport {
    pub triples_checked: usize,
    /// Largest `lhs − rhs` for each inequality; `≤ 0` when both hold.
    pub max_violation: [f64; 2],
    pub worst: [(usize, usize, usize); 2],
    /// Slack `rhs − lhs` to count, per inequality.
    pub slack_histograms: [BTreeMap<i64, usize>; 2],
}

/// Checks, for one component,
/// `d_Γ(γ₁,γ₂) ≤ d_G(g,π(γ₁)) + d_G(g,π(γ₂)) + d_H(η(γ₁,g),η(γ₂,g))` and
/// `d_H(η(γ₁,g),η(γ₂,g)) ≤ d_G(g,π(γ₁)) + d_G(g,π(γ₂)) + d_Γ(γ₁,γ₂)`.
/// `d_h` is indexed by position in `h_elements`.
pub fn lemma_dg_check(
    t: &ExtensionTriple,
    eta: &EtaTable,
    d_gamma: &MetricMatrix,
    d_h: &MetricMatrix,
    d_g: &MetricMatrix,
) -> Result<LemmaReport> {
    let n = t.gamma.order();
    let m = t.g_quotient.order();
    let mut report = LemmaReport {
        triples_checked: 0,
        max_violation: [f64::NEG_INFINITY; 2],
        worst: [(0, 0, 0); 2],
        slack_histograms: [BTreeMap::new(), BTreeMap::new()],
    };
    for g1 in 0..n {
        for g2 in 0..n {
            let dg = d_gamma.get(g1, g2);
            for g in 0..m {
                let base = d_g.get(g, t.pi(g1)) + d_g.get(g, t.pi(g2));
                let dh = d_h.get(eta.get(g1, g), eta.get(g2, g));
                let excess = [dg - (base + dh), dh - (base + dg)];
                for w in 0..2 {
                    if excess[w] > report.max_violation[w] {
                        report.max_violation[w] = excess[w];
                        report.worst[w] = (g1, g2, g);
                    }
                    *report.slack_histograms[w]
                        .entry((-excess[w]).round() as i64)
                        .or_default() += 1;
                }
                report.triples_checked += 1;
            }
        }
    }
    for w in 0..2 {
        if report.max_violation[w] > 0.0 {
            let (gamma1, gamma2, g) = report.worst[w];
            return Err(Error::InequalityViolated {
                which: w as u8 + 1,
                gamma1,
                gamma2,
                g,
                excess: report.max_violation[w],
            });
        }
    }
    Ok(report)
}

/// The metric spaces `⊔Γ_i`, `⊔H_i` and `⊔G_i` of a tower of triples.
#[derive(Debug, Clone)]
pub struct ExtensionSpace {
    pub triples: Vec<ExtensionTriple>,
    pub gamma_box: BoxSpace,
    pub gamma_metric: MetricMatrix,
    pub g_box: BoxSpace,
    pub g_metric: MetricMatrix,
    /// Global `Γ` index of each global `H` point.
    pub h_points: Vec<usize>,
    /// Start of each `H` component in the global `H` numbering.
    pub h_offsets: Vec<usize>,
    /// Position of the identity within each `H` component.
    pub h_identity: Vec<usize>,
    pub h_metric: MetricMatrix,
    pub kernel_source: KernelSource,
    pub kernel_metric: MetricMatrix,
    pub etas: Vec<EtaTable>,
}

impl ExtensionSpace {
    /// Gaps default to `max(diam Γ_k, diam Γ_{k+1}) + 1`; `⊔G_i` and the
    /// wall box reuse them.
    pub fn new(tower: &ExtensionTower, gaps: Option<Vec<f64>>, source: KernelSource) -> Result<Self> {
        let triples = tower.triples.clone();
        let rule = match gaps {
            Some(g) => GapRule::Custom(g),
            None => GapRule::Default,
        };
        let gamma_comps = triples
            .iter()
            .map(|t| Ok((bfs_metric(t.gamma.graph())?, t.gamma.identity())))
            .collect::<Result<Vec<_>>>()?;
        let gamma_box = assemble(gamma_comps, &rule)?;
        let shared = GapRule::Custom(gamma_box.gaps().to_vec());
        let g_comps = triples
            .iter()
            .map(|t| Ok((bfs_metric(t.g_quotient.graph())?, t.g_quotient.identity())))
            .collect::<Result<Vec<_>>>()?;
        let g_box = assemble(g_comps, &shared)?;

        let mut h_points = Vec::new();
        let mut h_offsets = Vec::with_capacity(triples.len() + 1);
        let mut h_identity = Vec::with_capacity(triples.len());
        for (i, t) in triples.iter().enumerate() {
            h_offsets.push(h_points.len());
            h_points.extend(t.h_elements.iter().map(|&v| gamma_box.global_index(i, v)));
            h_identity.push(t.h_index(t.gamma.identity()).ok_or_else(|| {
                Error::NotCayley(format!("identity of component {i} is not in H"))
            })?);
        }
        h_offsets.push(h_points.len());
        let gamma_metric = gamma_box.global_metric();
        let h_metric = gamma_metric.restrict(&h_points);

        let kernel_metric = match source {
            KernelSource::InducedMetric => h_metric.clone(),
            KernelSource::Walls => {
                let mut comps = Vec::with_capacity(triples.len());
                for (i, t) in triples.iter().enumerate() {
                    let cover = tower
                        .h_covers
                        .get(i)
                        .and_then(Option::as_ref)
                        .ok_or(Error::MissingWallData(i))?;
                    if t.h_source.iter().any(|&x| x >= cover.walls.len()) {
                        return Err(Error::MissingWallData(i));
                    }
                    let rows: Vec<_> = t.h_source.iter().map(|&x| &cover.walls[x]).collect();
                    let m = MetricMatrix::from_fn(rows.len(), |a, b| hamming(rows[a], rows[b]) as f64);
                    comps.push((m, h_identity[i]));
                }
                assemble(comps, &shared)?.global_metric()
            }
        };
        let etas = triples.iter().map(eta_table).collect::<Result<_>>()?;
        Ok(ExtensionSpace {
            triples,
            g_metric: g_box.global_metric(),
            gamma_box,
            gamma_metric,
            g_box,
            h_points,
            h_offsets,
            h_identity,
            h_metric,
            kernel_source: source,
            kernel_metric,
            etas,
        })
    }

    pub fn component_count(&self) -> usize {
        self.triples.len()
    }

    /// `H_i` with the metric induced from `Γ_i`, indexed by position.
    pub fn h_component_metric(&self, i: usize) -> MetricMatrix {
        self.gamma_box.component(i).restrict(&self.triples[i].h_elements)
    }

    pub fn lemma_reports(&self) -> Result<Vec<LemmaReport>> {
        (0..self.component_count())
            .map(|i| {
                lemma_dg_check(
                    &self.triples[i],
                    &self.etas[i],
                    self.gamma_box.component(i),
                    &self.h_component_metric(i),
                    self.g_box.component(i),
                )
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct PhiOptions {
    /// Kernel scale; derived from `(R, ε)` when absent.
    pub t_override: Option<f64>,
    /// Lower bound on the number of cut-off components.
    pub min_cutoff: usize,
    pub tol_psd: f64,
    pub tol_norm: f64,
}

impl Default for PhiOptions {
    fn default() -> Self {
        PhiOptions {
            t_override: None,
            min_cutoff: 0,
            tol_psd: DEFAULT_TOL_PSD,
            tol_norm: DEFAULT_TOL_NORM,
        }
    }
}

/// One nonzero coordinate of `φ(γ)`: `coeff · ψ(h)` at the point `g`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Term {
    pub g: usize,
    pub coeff: f64,
    pub h: usize,
}

#[derive(Debug, Clone)]
pub struct PhiGamma<'a> {
    pub space: &'a ExtensionSpace,
    pub r: f64,
    pub eps: f64,
    pub options: PhiOptions,
    /// Components `0..n_r` are cut off.
    pub n_r: usize,
    pub s_g: f64,
    pub m_gamma: f64,
    pub t: f64,
    pub ball: BallMap,
    pub psi: UnitVectorMap,
    /// Induced metric on `⊔H_i` against the kernel metric.
    pub envelope: EnvelopePair,
    /// Sparse `φ(γ)` per global `Γ` point, in increasing `g`.
    pub terms: Vec<Vec<Term>>,
}

/// Smallest cutoff `n` such that every gap from component `max(n − 1, 0)`
/// on exceeds `r`.
pub fn cutoff_index(gaps: &[f64], r: f64) -> usize {
    match gaps.iter().rposition(|&g| g <= r) {
        Some(c) => c + 2,
        None => 0,
    }
}

pub fn build_phi_gamma(space: &ExtensionSpace, r: f64, eps: f64, options: PhiOptions) -> Result<PhiGamma<'_>> {
    if !(eps > 0.0 && eps < 2.0) || !(r >= 0.0) {
        return Err(Error::InvalidMetric(format!(
            "need R ≥ 0 and 0 < eps < 2, got R = {r}, eps = {eps}"
        )));
    }
    let ball = ball_map(&space.g_metric, r, eps / 2.0)?;
    let s_g = ball.radius;
    let envelope = distortion_envelope(&space.h_metric, &space.kernel_metric)?;
    let bound = 2.0 * s_g + r;
    let kernel_bound = bound.max(envelope.plus_at(bound).unwrap_or(0.0)).max(1.0);
    let t = options
        .t_override
        .unwrap_or(-(1.0 - eps / 2.0).ln() / kernel_bound);
    let psi = gaussian_unit_map(&space.kernel_metric, t, options.tol_psd)?;

    let k = space.component_count();
    let n_r = cutoff_index(space.gamma_box.gaps(), r)
        .max(options.min_cutoff)
        .min(k);
    let cut_end = if n_r == 0 { 0 } else { space.gamma_box.offset(n_r) };
    let mut m_gamma: f64 = 0.0;
    for x in 0..cut_end {
        for y in x + 1..cut_end {
            m_gamma = m_gamma.max(space.gamma_metric.get(x, y));
        }
    }

    let e1_g = space.g_box.global_basepoint(0);
    let e1_h = space.h_offsets[0] + space.h_identity[0];
    let mut terms = Vec::with_capacity(space.gamma_box.len());
    for x in 0..space.gamma_box.len() {
        let (i, gamma) = space.gamma_box.locate(x);
        if i < n_r {
            terms.push(vec![Term {
                g: e1_g,
                coeff: 1.0,
                h: e1_h,
            }]);
            continue;
        }
        let tr = &space.triples[i];
        let p = space.g_box.global_index(i, tr.pi(gamma));
        let v = ball
            .support(p)
            .map(|(g, coeff)| {
                let (j, local) = space.g_box.locate(g);
                let h = if j == i {
                    space.etas[i].get(gamma, local)
                } else {
                    space.h_identity[i]
                };
                Term {
                    g,
                    coeff,
                    h: space.h_offsets[i] + h,
                }
            })
            .collect();
        terms.push(v);
    }
    Ok(PhiGamma {
        space,
        r,
        eps,
        options,
        n_r,
        s_g,
        m_gamma,
        t,
        ball,
        psi,
        envelope,
        terms,
    })
}

impl PhiGamma<'_> {
    pub fn inner(&self, x: usize, y: usize) -> f64 {
        let (a, b) = (&self.terms[x], &self.terms[y]);
        let (mut i, mut j, mut s) = (0, 0, 0.0);
        while i < a.len() && j < b.len() {
            match a[i].g.cmp(&b[j].g) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    s += a[i].coeff * b[j].coeff * self.psi.inner(a[i].h, b[j].h);
                    i += 1;
                    j += 1;
                }
            }
        }
        s
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn gram(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.len(), |x, y| self.inner(x, y))
    }

    pub fn max_norm_deviation(&self) -> f64 {
        (0..self.len()).fold(0.0, |m, x| m.max((self.inner(x, x).sqrt() - 1.0).abs()))
    }

    /// Decay threshold for `ψ` at level `delta`: the smallest observed
    /// induced distance beyond which every kernel distance exceeds
    /// `−ln(delta)/t` (one past the largest distance if none does).
    pub fn decay_threshold(&self, delta: f64) -> f64 {
        let level = -delta.ln() / self.t;
        self.envelope
            .t
            .iter()
            .zip(&self.envelope.rho_minus)
            .find(|(_, &r)| r > level)
            .map(|(&s, _)| s)
            .unwrap_or_else(|| self.space.h_metric.diameter() + 1.0)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub condition: &'static str,
    pub x: usize,
    pub y: usize,
    pub distance: f64,
    pub value: f64,
}

/// Outcome of the exhaustive scan. Margins are `bound − |deviation|` and
/// are absent when no pair falls in scope.
#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    #[serde(rename = "R")]
    pub r: f64,
    pub eps: f64,
    pub delta: f64,
    #[serde(rename = "S_G")]
    pub s_g: f64,
    #[serde(rename = "S_H")]
    pub s_h: f64,
    #[serde(rename = "M_Gamma")]
    pub m_gamma: f64,
    #[serde(rename = "N_R")]
    pub n_r: usize,
    pub t: f64,
    #[serde(rename = "S")]
    pub s: f64,
    pub kernel: KernelSource,
    pub min_margin_1: Option<f64>,
    pub min_margin_2: Option<f64>,
    pub pairs_1: usize,
    pub pairs_2: usize,
    /// Smallest observed distance `s` such that every pair at distance
    /// `≥ s` already has `|⟨φ, φ⟩| < delta`.
    pub empirical_s: Option<f64>,
    pub max_norm_deviation: f64,
    pub margin_1g: Option<f64>,
    pub margin_1h: Option<f64>,
    pub margin_2h: Option<f64>,
    pub pairs_1h: usize,
    pub pairs_2h: usize,
    pub support_ok: bool,
    pub pass: bool,
    pub witness: Option<Witness>,
}

impl Verdict {
    pub fn into_result(self) -> Result<Verdict> {
        match (&self.witness, self.pass) {
            (_, true) => Ok(self),
            (Some(w), false) => Err(Error::ConditionViolated {
                condition: w.condition,
                x: w.x,
                y: w.y,
                detail: format!("distance {}, value {}", w.distance, w.value),
            }),
            (None, false) => Err(Error::ConditionViolated {
                condition: "unknown",
                x: 0,
                y: 0,
                detail: "verification failed".into(),
            }),
        }
    }
}

/// Running minimum of a margin with its witness.
struct MarginScan {
    condition: &'static str,
    margin: Option<f64>,
    count: usize,
    witness: Option<Witness>,
}

impl MarginScan {
    fn new(condition: &'static str) -> Self {
        MarginScan {
            condition,
            margin: None,
            count: 0,
            witness: None,
        }
    }

    fn record(&mut self, margin: f64, x: usize, y: usize, distance: f64, value: f64) {
        self.count += 1;
        if self.margin.is_none_or(|m| margin < m) {
            self.margin = Some(margin);
            self.witness = Some(Witness {
                condition: self.condition,
                x,
                y,
                distance,
                value,
            });
        }
    }

    /// Witness when the margin falls to `floor` or below.
    fn failure(&self, floor: f64) -> Option<Witness> {
        match self.margin {
            Some(m) if m <= floor => self.witness.clone(),
            _ => None,
        }
    }
}

pub fn verify_conditions(phi: &PhiGamma<'_>, delta: f64) -> Result<Verdict> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::InvalidMetric(format!("need 0 < delta ≤ 1, got {delta}")));
    }
    let space = phi.space;
    let tol = phi.options.tol_norm;
    let s_h = phi.decay_threshold(delta / 3.0);
    let s = 3.0 * phi.s_g + 3.0 * s_h + phi.m_gamma;

    let mut c1 = MarginScan::new("1_Gamma");
    let mut c2 = MarginScan::new("2_Gamma");
    let mut violations: Vec<(f64, bool)> = Vec::new();
    let d = &space.gamma_metric;
    for (x, y, dist) in d.pairs() {
        let ip = phi.inner(x, y);
        if dist <= phi.r {
            c1.record(phi.eps - (1.0 - ip).abs(), x, y, dist, ip);
        }
        if dist >= s {
            c2.record(delta - ip.abs(), x, y, dist, ip);
        }
        violations.push((dist, ip.abs() >= delta));
    }
    let empirical_s = tightest_threshold(&mut violations);

    let mut g1 = MarginScan::new("1_G");
    for (x, y, dist) in space.g_metric.pairs() {
        if dist <= phi.r {
            let ip = phi.ball.inner(x, y);
            g1.record(phi.eps / 2.0 - (1.0 - ip).abs(), x, y, dist, ip);
        }
    }
    let bound = 2.0 * phi.s_g + phi.r;
    let mut h1 = MarginScan::new("1_H");
    let mut h2 = MarginScan::new("2_H");
    for (x, y, dist) in space.h_metric.pairs() {
        let ip = phi.psi.inner(x, y);
        if dist <= bound {
            h1.record(phi.eps / 2.0 - (1.0 - ip).abs(), x, y, dist, ip);
        }
        if dist >= s_h {
            h2.record(delta / 3.0 - ip.abs(), x, y, dist, ip);
        }
    }

    let mut witness = None;
    let norm = phi.max_norm_deviation();
    if norm > tol {
        let x = (0..phi.len())
            .find(|&x| (phi.inner(x, x).sqrt() - 1.0).abs() > tol)
            .unwrap_or(0);
        witness = Some(Witness {
            condition: "norm",
            x,
            y: x,
            distance: 0.0,
            value: phi.inner(x, x),
        });
    }
    let mut support_ok = true;
    for (x, terms) in phi.terms.iter().enumerate() {
        let (i, gamma) = space.gamma_box.locate(x);
        if i < phi.n_r {
            continue;
        }
        let p = space.g_box.global_index(i, space.triples[i].pi(gamma));
        if let Some(t) = terms.iter().find(|t| space.g_metric.get(p, t.g) > phi.s_g) {
            support_ok = false;
            witness = witness.or(Some(Witness {
                condition: "support",
                x,
                y: t.g,
                distance: space.g_metric.get(p, t.g),
                value: t.coeff,
            }));
        }
    }
    // (1_H) may hold with equality at the bound of the kernel scale.
    witness = witness
        .or_else(|| c1.failure(0.0))
        .or_else(|| c2.failure(0.0))
        .or_else(|| g1.failure(0.0))
        .or_else(|| h1.failure(-tol))
        .or_else(|| h2.failure(0.0));

    Ok(Verdict {
        r: phi.r,
        eps: phi.eps,
        delta,
        s_g: phi.s_g,
        s_h,
        m_gamma: phi.m_gamma,
        n_r: phi.n_r,
        t: phi.t,
        s,
        kernel: space.kernel_source,
        min_margin_1: c1.margin,
        min_margin_2: c2.margin,
        pairs_1: c1.count,
        pairs_2: c2.count,
        empirical_s,
        max_norm_deviation: norm,
        margin_1g: g1.margin,
        margin_1h: h1.margin,
        margin_2h: h2.margin,
        pairs_1h: h1.count,
        pairs_2h: h2.count,
        support_ok,
        pass: witness.is_none(),
        witness,
    })
}

/// Smallest observed distance above every violating pair.
fn tightest_threshold(pairs: &mut [(f64, bool)]) -> Option<f64> {
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let worst = pairs.iter().filter(|p| p.1).map(|p| p.0).next_back();
    match worst {
        None => pairs.first().map(|p| p.0),
        Some(w) => pairs.iter().map(|p| p.0).find(|&d| d > w),
    }
}
