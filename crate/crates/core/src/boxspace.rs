//! Box spaces: finite metric components strung on a chain of basepoints.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::metric::MetricMatrix;

/// How consecutive basepoints are spaced.
#[derive(Debug, Clone, PartialEq)]
pub enum GapRule {
    /// `max(diam_k, diam_{k+1}) + 1`.
    Default,
    /// Explicit gaps, validated.
    Custom(Vec<f64>),
}

#[derive(Debug, Clone)]
pub struct BoxSpace {
    components: Vec<MetricMatrix>,
    basepoints: Vec<usize>,
    gaps: Vec<f64>,
    offsets: Vec<usize>,
    /// `chain[k]` = distance from basepoint 0 to basepoint `k`.
    chain: Vec<f64>,
}

pub fn default_gaps(diameters: &[f64]) -> Vec<f64> {
    diameters
        .windows(2)
        .map(|w| w[0].max(w[1]) + 1.0)
        .collect()
}

/// Gaps valid for two families of components at once.
pub fn common_gaps(a: &[f64], b: &[f64]) -> Vec<f64> {
    let joint: Vec<f64> = a.iter().zip(b).map(|(x, y)| x.max(*y)).collect();
    default_gaps(&joint)
}

pub fn assemble(components: Vec<(MetricMatrix, usize)>, rule: &GapRule) -> Result<BoxSpace> {
    let diams: Vec<f64> = components.iter().map(|(m, _)| m.diameter()).collect();
    for (k, (m, b)) in components.iter().enumerate() {
        if *b >= m.size() {
            return Err(Error::InvalidMetric(format!(
                "basepoint {b} outside component {k} of size {}",
                m.size()
            )));
        }
    }
    let expected = components.len().saturating_sub(1);
    let gaps = match rule {
        GapRule::Default => default_gaps(&diams),
        GapRule::Custom(g) => {
            if g.len() != expected {
                return Err(Error::GapCount {
                    expected,
                    got: g.len(),
                });
            }
            for (k, &gap) in g.iter().enumerate() {
                let required = diams[k].max(diams[k + 1]);
                if !(gap > required) || !gap.is_finite() {
                    return Err(Error::GapTooSmall {
                        index: k,
                        gap,
                        required,
                    });
                }
            }
            g.clone()
        }
    };
    let mut offsets = Vec::with_capacity(components.len() + 1);
    let mut total = 0;
    for (m, _) in &components {
        offsets.push(total);
        total += m.size();
    }
    offsets.push(total);
    let mut chain = vec![0.0];
    for g in &gaps {
        chain.push(chain.last().unwrap() + g);
    }
    let (components, basepoints) = components.into_iter().unzip();
    Ok(BoxSpace {
        components,
        basepoints,
        gaps,
        offsets,
        chain,
    })
}

impl BoxSpace {
    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    /// Total number of points.
    pub fn len(&self) -> usize {
        *self.offsets.last().unwrap_or(&0)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn component(&self, k: usize) -> &MetricMatrix {
        &self.components[k]
    }

    pub fn basepoint(&self, k: usize) -> usize {
        self.basepoints[k]
    }

    pub fn gaps(&self) -> &[f64] {
        &self.gaps
    }

    pub fn offset(&self, k: usize) -> usize {
        self.offsets[k]
    }

    /// Distance along the chain from the first basepoint to basepoint `k`.
    pub fn chain_position(&self, k: usize) -> f64 {
        self.chain[k]
    }

    pub fn global_index(&self, k: usize, local: usize) -> usize {
        self.offsets[k] + local
    }

    /// Global basepoint index of component `k`.
    pub fn global_basepoint(&self, k: usize) -> usize {
        self.global_index(k, self.basepoints[k])
    }

    /// `(component, local index)` of a global point.
    pub fn locate(&self, p: usize) -> (usize, usize) {
        let k = self.offsets.partition_point(|&o| o <= p) - 1;
        (k, p - self.offsets[k])
    }

    pub fn global_distance(&self, x: (usize, usize), y: (usize, usize)) -> f64 {
        let ((i, a), (j, b)) = (x, y);
        if i == j {
            return self.components[i].get(a, b);
        }
        let (lo, hi) = if i < j { (x, y) } else { (y, x) };
        self.components[lo.0].get(lo.1, self.basepoints[lo.0])
            + (self.chain[hi.0] - self.chain[lo.0])
            + self.components[hi.0].get(self.basepoints[hi.0], hi.1)
    }

    pub fn distance(&self, p: usize, q: usize) -> f64 {
        self.global_distance(self.locate(p), self.locate(q))
    }

    pub fn global_metric(&self) -> MetricMatrix {
        let n = self.len();
        let located: Vec<(usize, usize)> = (0..n).map(|p| self.locate(p)).collect();
        MetricMatrix::from_fn(n, |p, q| self.global_distance(located[p], located[q]))
    }

    pub fn diameters(&self) -> Vec<f64> {
        self.components.iter().map(|m| m.diameter()).collect()
    }

    /// Same components with different gaps.
    pub fn with_gaps(&self, rule: &GapRule) -> Result<BoxSpace> {
        assemble(
            self.components
                .iter()
                .cloned()
                .zip(self.basepoints.iter().copied())
                .collect(),
            rule,
        )
    }
}

/// Empirical control functions of the identity map `(X, d1) → (X, d2)`,
/// tabulated at each distinct observed value of `d1`.
#[derive(Debug, Clone, Serialize)]
pub struct EnvelopePair {
    pub t: Vec<f64>,
    /// `min { d2 : d1 ≥ t }`
    pub rho_minus: Vec<f64>,
    /// `max { d2 : d1 ≤ t }`
    pub rho_plus: Vec<f64>,
}

impl EnvelopePair {
    pub fn is_monotone(&self) -> bool {
        self.rho_minus.windows(2).all(|w| w[0] <= w[1])
            && self.rho_plus.windows(2).all(|w| w[0] <= w[1])
    }

    /// `ρ₋(t) > 0` at every observed `t > 0`.
    pub fn lower_positive(&self) -> bool {
        self.t
            .iter()
            .zip(&self.rho_minus)
            .all(|(&t, &r)| t <= 0.0 || r > 0.0)
    }

    /// `ρ₊(s)` for the largest observed `t ≤ s`; `None` below the range.
    pub fn plus_at(&self, s: f64) -> Option<f64> {
        let i = self.t.partition_point(|&t| t <= s);
        (i > 0).then(|| self.rho_plus[i - 1])
    }

    /// `ρ₋(s)` for the smallest observed `t ≥ s`; `None` above the range.
    pub fn minus_at(&self, s: f64) -> Option<f64> {
        let i = self.t.partition_point(|&t| t < s);
        self.rho_minus.get(i).copied()
    }

    /// Smallest observed `t` with `ρ₋(t) ≥ level`.
    pub fn lift_lower(&self, level: f64) -> Option<f64> {
        self.t
            .iter()
            .zip(&self.rho_minus)
            .find(|(_, &r)| r >= level)
            .map(|(&t, _)| t)
    }
}

pub fn distortion_envelope(d1: &MetricMatrix, d2: &MetricMatrix) -> Result<EnvelopePair> {
    if d1.size() != d2.size() {
        return Err(Error::MismatchedPointSets {
            left: d1.size(),
            right: d2.size(),
        });
    }
    let n = d1.size();
    let mut pairs: Vec<(f64, f64)> = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        for j in i..n {
            pairs.push((d1.get(i, j), d2.get(i, j)));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut t: Vec<f64> = Vec::new();
    let mut lo: Vec<f64> = Vec::new();
    let mut hi: Vec<f64> = Vec::new();
    for &(a, b) in &pairs {
        if t.last() == Some(&a) {
            let k = t.len() - 1;
            lo[k] = lo[k].min(b);
            hi[k] = hi[k].max(b);
        } else {
            t.push(a);
            lo.push(b);
            hi.push(b);
        }
    }
    let mut rho_plus = hi;
    for k in 1..rho_plus.len() {
        rho_plus[k] = rho_plus[k].max(rho_plus[k - 1]);
    }
    let mut rho_minus = lo;
    for k in (0..rho_minus.len().saturating_sub(1)).rev() {
        rho_minus[k] = rho_minus[k].min(rho_minus[k + 1]);
    }
    Ok(EnvelopePair {
        t,
        rho_minus,
        rho_plus,
    })
}
