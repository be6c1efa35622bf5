//! Fixtures shared by the benchmarks.

use boxcover_core::cover::{build_tower, DEFAULT_SIZE_CAP};
use boxcover_core::linalg::DenseMatrix;
use boxcover_core::{builtin_extension, builtins, ExtensionSpace, KernelSource, TowerReport};

pub fn tower(seed: &str, graphs: usize) -> TowerReport {
    build_tower(&builtins::seed(seed).unwrap(), graphs, DEFAULT_SIZE_CAP).unwrap()
}

/// `exp(−t·d)` on the 128-vertex rose cover.
pub fn gaussian_kernel(t: f64) -> DenseMatrix {
    let d = boxcover_core::graph::bfs_metric(tower("ags-rose", 3).graph(2)).unwrap();
    DenseMatrix::from_fn(d.size(), |i, j| (-t * d.get(i, j)).exp())
}

pub fn extension_space(name: &str) -> ExtensionSpace {
    ExtensionSpace::new(&builtin_extension(name).unwrap(), None, KernelSource::Walls).unwrap()
}
