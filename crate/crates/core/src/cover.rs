//! Z/2-homology covers, the wall structure a cover inherits from its base,
//! and iterated cover towers.
//!
//! A cover vertex is a pair `(u, v)` with `u` a base vertex and `v` a GF(2)
//! vector of length `r = E - V + 1`, stored as the index `sheet * V + u`
//! where `sheet` is `v` read as a bitmask. Tree edges of the base lift within
//! a sheet; cotree edge `j` flips bit `j`.

use bitvec::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{
    bfs_distances, bfs_metric, bridges, cycle_basis, diameter, girth, Edge, Gf2Vector, Girth,
    LabeledMultigraph,
};
use crate::metric::MetricMatrix;

pub const DEFAULT_SIZE_CAP: usize = 1 << 20;

/// A homology cover together with its projection and wall table.
#[derive(Debug, Clone)]
pub struct CoverData {
    pub cover: LabeledMultigraph,
    pub base: LabeledMultigraph,
    pub vertex_projection: Vec<usize>,
    pub edge_projection: Vec<usize>,
    pub deck_rank: usize,
    /// `walls[x][e]`: which side of the wall of base edge `e` the cover
    /// vertex `x` lies on.
    pub walls: Vec<Gf2Vector>,
    pub warnings: Vec<String>,
}

impl CoverData {
    pub fn sheet(&self, x: usize) -> usize {
        x / self.base.vertex_count()
    }

    pub fn wall_bit(&self, x: usize, e: usize) -> bool {
        self.walls[x][e]
    }

    /// Number of walls separating `x` and `y`.
    pub fn wall_distance(&self, x: usize, y: usize) -> usize {
        hamming(&self.walls[x], &self.walls[y])
    }

    /// The deck transformation `(u, x) ↦ (u, x + shift)` as a vertex map.
    pub fn deck_transformation(&self, shift: usize) -> Vec<usize> {
        let v = self.base.vertex_count();
        (0..self.cover.vertex_count())
            .map(|x| ((x / v) ^ shift) * v + x % v)
            .collect()
    }
}

pub(crate) fn hamming(a: &Gf2Vector, b: &Gf2Vector) -> usize {
    a.as_raw_slice()
        .iter()
        .zip(b.as_raw_slice())
        .map(|(x, y)| (x ^ y).count_ones() as usize)
        .sum()
}

/// Homology cover with the default size cap.
pub fn homology_cover(base: &LabeledMultigraph) -> Result<CoverData> {
    homology_cover_with_cap(base, DEFAULT_SIZE_CAP)
}

pub fn homology_cover_with_cap(base: &LabeledMultigraph, size_cap: usize) -> Result<CoverData> {
    let basis = cycle_basis(base)?;
    let v = base.vertex_count();
    let m = base.edge_count();
    let r = basis.rank;
    let sheets = checked_sheets(v, r, size_cap)?;

    let mut warnings = Vec::new();
    let bridged = bridges(base);
    if !bridged.is_empty() {
        warnings.push(format!(
            "base has {} bridge(s) {:?}; walls may not separate the cover",
            bridged.len(),
            bridged
        ));
    }

    let flip: Vec<usize> = (0..m)
        .map(|e| basis.cotree_position(e).map_or(0, |j| 1usize << j))
        .collect();
    let mut edges = Vec::with_capacity(sheets * m);
    let mut edge_projection = Vec::with_capacity(sheets * m);
    for s in 0..sheets {
        for (e, edge) in base.edges().iter().enumerate() {
            edges.push(Edge::new(
                s * v + edge.src,
                (s ^ flip[e]) * v + edge.dst,
                edge.label,
            ));
            edge_projection.push(e);
        }
    }
    let cover = LabeledMultigraph::new(sheets * v, edges, base.basepoint())?;
    let vertex_projection = (0..sheets * v).map(|x| x % v).collect();

    // Row of (u, s) = tree path to u plus the fundamental cycles selected by s.
    let paths = basis.tree_paths();
    let cycles: Vec<Gf2Vector> = (0..r).map(|j| basis.fundamental_cycle(j)).collect();
    let mut sheet_rows = vec![bitvec![u64, Lsb0; 0; m]; sheets];
    for s in 1..sheets {
        let low = s.trailing_zeros() as usize;
        let mut row = sheet_rows[s & (s - 1)].clone();
        row ^= cycles[low].clone();
        sheet_rows[s] = row;
    }
    let mut walls = Vec::with_capacity(sheets * v);
    for row in &sheet_rows {
        for path in &paths {
            let mut w = path.clone();
            w ^= row.clone();
            walls.push(w);
        }
    }

    Ok(CoverData {
        cover,
        base: base.clone(),
        vertex_projection,
        edge_projection,
        deck_rank: r,
        walls,
        warnings,
    })
}

fn checked_sheets(v: usize, r: usize, cap: usize) -> Result<usize> {
    let exceeded = || Error::SizeCapExceeded {
        vertices: if r < 128 {
            (v as u128 * (1u128 << r)).to_string()
        } else {
            format!("{v}*2^{r}")
        },
        cap,
    };
    if r >= usize::BITS as usize - 1 {
        return Err(exceeded());
    }
    let sheets = 1usize << r;
    match v.checked_mul(sheets) {
        Some(n) if n <= cap => Ok(sheets),
        _ => Err(exceeded()),
    }
}

/// Hamming distances between wall rows.
pub fn wall_metric(c: &CoverData) -> MetricMatrix {
    let n = c.cover.vertex_count();
    let mut m = MetricMatrix::zeros(n);
    for x in 0..n {
        for y in x + 1..n {
            let d = c.wall_distance(x, y) as f64;
            m.set(x, y, d);
            m.set(y, x, d);
        }
    }
    m
}

/// Outcome of comparing the wall metric with the graph metric on a cover.
#[derive(Debug, Clone, Serialize)]
pub struct AgreementReport {
    /// Largest `t` such that `d_W = d_graph` on all pairs with `d_graph < t`.
    pub radius: usize,
    /// Girth of the base graph, `None` for a forest.
    pub base_girth: Option<usize>,
    pub all_pairs_agree: bool,
    /// First disagreeing pair at the smallest disagreeing distance, as
    /// `(x, y, graph distance, wall distance)`.
    pub first_mismatch: Option<(usize, usize, usize, usize)>,
    pub warnings: Vec<String>,
}

pub fn agreement_radius(c: &CoverData) -> Result<AgreementReport> {
    let n = c.cover.vertex_count();
    let inc = c.cover.incidence();
    let mut max_dist = 0;
    let mut mismatch: Option<(usize, usize, usize, usize)> = None;
    for x in 0..n {
        let dist = bfs_distances(&inc, x);
        for y in x + 1..n {
            let d = dist[y];
            if d == crate::graph::UNREACHED {
                return Err(Error::DisconnectedGraph);
            }
            let d = d as usize;
            max_dist = max_dist.max(d);
            let w = c.wall_distance(x, y);
            if w != d && mismatch.is_none_or(|(_, _, md, _)| d < md) {
                mismatch = Some((x, y, d, w));
            }
        }
    }
    Ok(AgreementReport {
        radius: mismatch.map_or(max_dist + 1, |(_, _, d, _)| d),
        base_girth: girth(&c.base).finite(),
        all_pairs_agree: mismatch.is_none(),
        first_mismatch: mismatch,
        warnings: c.warnings.clone(),
    })
}

/// Iterated homology covers of a seed graph.
#[derive(Debug, Clone)]
pub struct TowerReport {
    pub seed: LabeledMultigraph,
    pub levels: Vec<CoverData>,
    /// Vertex counts, seed first.
    pub sizes: Vec<usize>,
    pub girths: Vec<Girth>,
    pub diameters: Vec<usize>,
    /// Set when the next cover would have exceeded the size cap.
    pub truncated: bool,
}

impl TowerReport {
    /// Graph at position `i` of `sizes` (0 is the seed).
    pub fn graph(&self, i: usize) -> &LabeledMultigraph {
        if i == 0 {
            &self.seed
        } else {
            &self.levels[i - 1].cover
        }
    }

    pub fn metrics(&self) -> Result<Vec<MetricMatrix>> {
        self.levels.iter().map(|l| bfs_metric(&l.cover)).collect()
    }
}

/// Covers `seed` repeatedly until `max_levels` graphs (seed included) exist
/// or the next cover would pass `size_cap`.
pub fn build_tower(
    seed: &LabeledMultigraph,
    max_levels: usize,
    size_cap: usize,
) -> Result<TowerReport> {
    if !seed.is_connected() || seed.vertex_count() == 0 {
        return Err(Error::DisconnectedGraph);
    }
    let mut report = TowerReport {
        seed: seed.clone(),
        levels: Vec::new(),
        sizes: vec![seed.vertex_count()],
        girths: vec![girth(seed)],
        diameters: vec![diameter(seed)?],
        truncated: false,
    };
    let mut current = seed.clone();
    while report.sizes.len() < max_levels {
        match homology_cover_with_cap(&current, size_cap) {
            Ok(level) => {
                report.sizes.push(level.cover.vertex_count());
                report.girths.push(girth(&level.cover));
                report.diameters.push(diameter(&level.cover)?);
                current = level.cover.clone();
                report.levels.push(level);
            }
            Err(Error::SizeCapExceeded { .. }) => {
                report.truncated = true;
                break;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(report)
}
