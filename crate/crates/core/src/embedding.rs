//! Hilbert-space data: wall embeddings, negative-type checks, Gaussian
//! unit-vector maps and ball-averaging maps.

use crate::boxspace::{assemble, common_gaps, BoxSpace, GapRule};
use crate::cover::{wall_metric, CoverData};
use crate::error::{Error, Result};
use crate::graph::bfs_metric;
use crate::linalg::DenseMatrix;
use crate::metric::MetricMatrix;

pub use crate::linalg::{eig_sym, SymmetricEigen};

/// Eigenvalues in `(-DEFAULT_TOL_PSD, 0)` count as zero.
pub const DEFAULT_TOL_PSD: f64 = 1e-8;
pub const DEFAULT_TOL_NORM: f64 = 1e-9;

/// One coordinate vector per point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    pub points: Vec<Vec<f64>>,
}

impl PointCloud {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.points.first().map_or(0, Vec::len)
    }

    pub fn squared_distance(&self, i: usize, j: usize) -> f64 {
        self.points[i]
            .iter()
            .zip(&self.points[j])
            .map(|(a, b)| (a - b) * (a - b))
            .sum()
    }
}

/// Cover components with their wall box and graph box on shared gaps.
#[derive(Debug, Clone)]
pub struct CoverBox {
    pub covers: Vec<CoverData>,
    pub walls: BoxSpace,
    pub graph: BoxSpace,
}

impl CoverBox {
    pub fn new(covers: Vec<CoverData>) -> Result<Self> {
        let graph_metrics: Vec<MetricMatrix> = covers
            .iter()
            .map(|c| bfs_metric(&c.cover))
            .collect::<Result<_>>()?;
        let wall_metrics: Vec<MetricMatrix> = covers.iter().map(wall_metric).collect();
        let gd: Vec<f64> = graph_metrics.iter().map(MetricMatrix::diameter).collect();
        let wd: Vec<f64> = wall_metrics.iter().map(MetricMatrix::diameter).collect();
        let rule = GapRule::Custom(common_gaps(&gd, &wd));
        let base: Vec<usize> = covers.iter().map(|c| c.cover.basepoint()).collect();
        let walls = assemble(wall_metrics.into_iter().zip(base.clone()).collect(), &rule)?;
        let graph = assemble(graph_metrics.into_iter().zip(base).collect(), &rule)?;
        Ok(CoverBox {
            covers,
            walls,
            graph,
        })
    }

    pub fn embedding(&self) -> Result<PointCloud> {
        let refs: Vec<Option<&CoverData>> = self.covers.iter().map(Some).collect();
        wall_embedding(&self.walls, &refs)
    }
}

/// 0/1 coordinates whose squared Euclidean distances are the wall box
/// distances: each component's wall bits, then the chain position in unary.
pub fn wall_embedding(space: &BoxSpace, walls: &[Option<&CoverData>]) -> Result<PointCloud> {
    let k = space.component_count();
    let mut widths = Vec::with_capacity(k);
    for c in 0..k {
        let data = walls
            .get(c)
            .copied()
            .flatten()
            .ok_or(Error::MissingWallData(c))?;
        if data.walls.len() != space.component(c).size() {
            return Err(Error::MissingWallData(c));
        }
        if data.walls[space.basepoint(c)].any() {
            return Err(Error::InvalidMetric(format!(
                "basepoint of component {c} has a nonzero wall row"
            )));
        }
        widths.push(data.base.edge_count());
    }
    let mut line = 0usize;
    for (i, &g) in space.gaps().iter().enumerate() {
        if g.fract() != 0.0 || g <= 0.0 {
            return Err(Error::NonIntegralGap { index: i, gap: g });
        }
        line += g as usize;
    }
    let wall_dim: usize = widths.iter().sum();
    let mut points = Vec::with_capacity(space.len());
    let mut block = 0;
    for c in 0..k {
        let data = walls[c].unwrap();
        let position = space.chain_position(c) as usize;
        for row in &data.walls {
            let mut p = vec![0.0; wall_dim + line];
            for e in row.iter_ones() {
                p[block + e] = 1.0;
            }
            for x in &mut p[wall_dim..wall_dim + position] {
                *x = 1.0;
            }
            points.push(p);
        }
        block += widths[c];
    }
    Ok(PointCloud { points })
}

/// `−½ J D J` with `J` the centering matrix.
pub fn centered_gram(d: &MetricMatrix) -> DenseMatrix {
    let n = d.size();
    if n == 0 {
        return DenseMatrix::zeros(0);
    }
    let nf = n as f64;
    let row_mean: Vec<f64> = (0..n).map(|i| d.row(i).iter().sum::<f64>() / nf).collect();
    let total = row_mean.iter().sum::<f64>() / nf;
    DenseMatrix::from_fn(n, |i, j| -0.5 * (d.get(i, j) - row_mean[i] - row_mean[j] + total))
}

/// Minimum eigenvalue of `−½ J D J`; `D` is of negative type iff this is
/// nonnegative up to rounding. Zero for fewer than two points.
pub fn negative_type_check(d: &MetricMatrix) -> Result<f64> {
    if d.size() < 2 {
        return Ok(0.0);
    }
    let e = eig_sym(&centered_gram(d))?;
    Ok(*e.values.last().unwrap())
}

/// Classical scaling: points whose squared distances reproduce `D` when it
/// is of negative type, with the minimum eigenvalue of `−½ J D J`.
/// Eigenvalues below `tol_psd` are dropped.
pub fn classical_embedding(d: &MetricMatrix, tol_psd: f64) -> Result<(PointCloud, f64)> {
    let n = d.size();
    if n < 2 {
        return Ok((PointCloud { points: vec![Vec::new(); n] }, 0.0));
    }
    let e = eig_sym(&centered_gram(d))?;
    let kept: Vec<usize> = (0..n).filter(|&i| e.values[i] > tol_psd).collect();
    let points = (0..n)
        .map(|x| {
            kept.iter()
                .map(|&i| e.values[i].sqrt() * e.vectors[i][x])
                .collect()
        })
        .collect();
    Ok((PointCloud { points }, *e.values.last().unwrap()))
}

/// Unit vectors with a cached Gram matrix.
#[derive(Debug, Clone)]
pub struct UnitVectorMap {
    pub vectors: Vec<Vec<f64>>,
    pub gram: DenseMatrix,
}

impl UnitVectorMap {
    pub fn from_vectors(vectors: Vec<Vec<f64>>) -> Self {
        let n = vectors.len();
        let gram = DenseMatrix::from_fn(n, |i, j| dot(&vectors[i], &vectors[j]));
        UnitVectorMap { vectors, gram }
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    #[inline]
    pub fn inner(&self, i: usize, j: usize) -> f64 {
        self.gram.get(i, j)
    }

    pub fn max_norm_deviation(&self) -> f64 {
        (0..self.len()).fold(0.0, |m, i| m.max((self.gram.get(i, i).sqrt() - 1.0).abs()))
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Factor a PSD kernel as a Gram matrix of unit vectors.
pub fn unit_map_from_kernel(k: &DenseMatrix, tol_psd: f64) -> Result<UnitVectorMap> {
    let n = k.dim();
    if n == 0 {
        return Ok(UnitVectorMap::from_vectors(Vec::new()));
    }
    let e = eig_sym(k)?;
    let min = *e.values.last().unwrap();
    if min <= -tol_psd {
        return Err(Error::KernelNotPsd {
            min_eigenvalue: min,
        });
    }
    let kept: Vec<usize> = (0..n).filter(|&i| e.values[i] > 0.0).collect();
    let mut vectors: Vec<Vec<f64>> = (0..n)
        .map(|x| {
            kept.iter()
                .map(|&i| e.values[i].sqrt() * e.vectors[i][x])
                .collect()
        })
        .collect();
    for v in &mut vectors {
        let norm = dot(v, v).sqrt();
        if norm > 0.0 {
            v.iter_mut().for_each(|c| *c /= norm);
        }
    }
    Ok(UnitVectorMap::from_vectors(vectors))
}

/// Unit vectors with `⟨ψ(x), ψ(y)⟩ = exp(−t·D(x, y))`.
pub fn gaussian_unit_map(d: &MetricMatrix, t: f64, tol_psd: f64) -> Result<UnitVectorMap> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::InvalidMetric(format!("kernel scale must be positive, got {t}")));
    }
    let k = DenseMatrix::from_fn(d.size(), |i, j| (-t * d.get(i, j)).exp());
    unit_map_from_kernel(&k, tol_psd)
}

/// `x ↦` normalized indicator of the ball `B_S(x)`.
#[derive(Debug, Clone)]
pub struct BallMap {
    pub radius: f64,
    /// Sorted members of each ball.
    pub balls: Vec<Vec<usize>>,
}

impl BallMap {
    pub fn new(d: &MetricMatrix, radius: f64) -> Self {
        let balls = (0..d.size())
            .map(|x| (0..d.size()).filter(|&y| d.get(x, y) <= radius).collect())
            .collect();
        BallMap { radius, balls }
    }

    pub fn len(&self) -> usize {
        self.balls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.balls.is_empty()
    }

    /// Coefficient of `φ(x)` at `g`.
    pub fn coefficient(&self, x: usize, g: usize) -> f64 {
        let b = &self.balls[x];
        if b.binary_search(&g).is_ok() {
            1.0 / (b.len() as f64).sqrt()
        } else {
            0.0
        }
    }

    /// Nonzero `(g, φ(x)(g))` in increasing `g`.
    pub fn support(&self, x: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let c = 1.0 / (self.balls[x].len() as f64).sqrt();
        self.balls[x].iter().map(move |&g| (g, c))
    }

    pub fn inner(&self, x: usize, y: usize) -> f64 {
        let (a, b) = (&self.balls[x], &self.balls[y]);
        let (mut i, mut j, mut common) = (0, 0, 0usize);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    common += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        common as f64 / ((a.len() * b.len()) as f64).sqrt()
    }

    pub fn to_unit_vector_map(&self) -> UnitVectorMap {
        let n = self.len();
        let vectors = (0..n)
            .map(|x| (0..n).map(|g| self.coefficient(x, g)).collect())
            .collect();
        UnitVectorMap::from_vectors(vectors)
    }
}

/// Worst `|1 − ⟨φ(x), φ(y)⟩|` over pairs at distance `≤ r`, with its pair.
pub fn ball_overlap_deviation(d: &MetricMatrix, map: &BallMap, r: f64) -> (f64, usize, usize) {
    let mut worst = (0.0, 0, 0);
    for (x, y, dist) in d.pairs() {
        if dist <= r {
            let dev = (1.0 - map.inner(x, y)).abs();
            if dev > worst.0 {
                worst = (dev, x, y);
            }
        }
    }
    worst
}

/// Smallest observed radius `S` whose ball map has `|1 − ⟨φ(x), φ(y)⟩| < eps`
/// on every pair at distance `≤ r`.
pub fn ball_map(d: &MetricMatrix, r: f64, eps: f64) -> Result<BallMap> {
    let cap = d.diameter();
    let mut radii: Vec<f64> = d.pairs().map(|(_, _, v)| v).filter(|&v| v <= cap).collect();
    radii.push(0.0);
    radii.sort_by(f64::total_cmp);
    radii.dedup();
    let mut last = (0.0, 0, 0);
    for s in radii {
        let map = BallMap::new(d, s);
        let worst = ball_overlap_deviation(d, &map, r);
        if worst.0 < eps {
            return Ok(map);
        }
        last = worst;
    }
    Err(Error::NoValidS {
        cap,
        x: last.1,
        y: last.2,
        deviation: last.0,
    })
}

/// The ball map of a box space in its global metric.
pub fn prop_a_ball_map(space: &BoxSpace, r: f64, eps: f64) -> Result<BallMap> {
    ball_map(&space.global_metric(), r, eps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;
    use crate::cover::homology_cover;

    #[test]
    fn planted_euclidean_is_negative_type() {
        let pts: Vec<[f64; 2]> = (0..7)
            .map(|i| [(i as f64 * 1.3).sin(), (i as f64 * 0.7).cos() * 2.0])
            .collect();
        let d = MetricMatrix::from_fn(7, |i, j| {
            (pts[i][0] - pts[j][0]).powi(2) + (pts[i][1] - pts[j][1]).powi(2)
        });
        assert!(negative_type_check(&d).unwrap() >= -1e-8);
    }

    #[test]
    fn k23_fails_negative_type() {
        let d = builtins::k23_metric();
        // x = (3, 3, -2, -2, -2) sums to zero with xᵀDx = 12 > 0
        let x = [3.0, 3.0, -2.0, -2.0, -2.0];
        let q: f64 = (0..5)
            .flat_map(|i| (0..5).map(move |j| (i, j)))
            .map(|(i, j)| x[i] * x[j] * d.get(i, j))
            .sum();
        assert_eq!(q, 12.0);
        assert!(negative_type_check(&d).unwrap() < -1e-3);
    }

    #[test]
    fn gaussian_formula() {
        let d = MetricMatrix::from_fn(2, |i, j| if i == j { 0.0 } else { 1.0 });
        let psi = gaussian_unit_map(&d, std::f64::consts::LN_2, DEFAULT_TOL_PSD).unwrap();
        assert!((psi.inner(0, 1) - 0.5).abs() < 1e-12);
        assert!((psi.inner(0, 0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gaussian_rejects_non_psd() {
        // large t on the K_{2,3} metric is fine, small t exposes the failure
        let d = builtins::k23_metric();
        let err = gaussian_unit_map(&d, 0.2, DEFAULT_TOL_PSD).unwrap_err();
        assert!(matches!(err, Error::KernelNotPsd { .. }));
    }

    #[test]
    fn wall_embedding_of_eight_cycle() {
        let b = CoverBox::new(vec![homology_cover(&builtins::cycle(4)).unwrap()]).unwrap();
        let f = b.embedding().unwrap();
        let d = b.walls.global_metric();
        for i in 0..8 {
            for j in 0..8 {
                assert_eq!(f.squared_distance(i, j), d.get(i, j));
            }
        }
    }

    #[test]
    fn wall_embedding_needs_walls() {
        let b = CoverBox::new(vec![homology_cover(&builtins::cycle(4)).unwrap()]).unwrap();
        assert!(matches!(
            wall_embedding(&b.walls, &[None]),
            Err(Error::MissingWallData(0))
        ));
    }

    #[test]
    fn ball_map_examples() {
        let d = MetricMatrix::from_fn(4, |i, j| if i == j { 0.0 } else { 3.0 });
        let m = ball_map(&d, 1.0, 0.1).unwrap();
        assert_eq!(m.radius, 0.0);
        assert!(m.balls.iter().all(|b| b.len() == 1));
        let two = MetricMatrix::from_fn(2, |i, j| if i == j { 0.0 } else { 1.0 });
        let m = ball_map(&two, 1.0, 0.1).unwrap();
        assert_eq!(m.radius, 1.0);
        assert!((m.inner(0, 1) - 1.0).abs() < 1e-15);
        let u = m.to_unit_vector_map();
        assert!(u.max_norm_deviation() < 1e-12);
    }
}
