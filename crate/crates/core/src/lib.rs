//! Box spaces of finite quotient graphs and their coarse embeddings.
//!
//! Homology-cover towers, wall structures, finite group quotients,
//! semidirect extensions, box spaces with a global metric, Hilbert-space
//! embeddings and the verification of uniform-embedding conditions for
//! extensions of box spaces.

pub mod boxspace;
pub mod builtins;
pub mod cover;
pub mod embedding;
pub mod error;
pub mod extension;
pub mod graph;
pub mod group;
pub mod io;
pub mod linalg;
pub mod metric;
pub mod semidirect;

pub use boxspace::{assemble, distortion_envelope, BoxSpace, EnvelopePair, GapRule};
pub use cover::{build_tower, homology_cover, wall_metric, CoverData, TowerReport};
pub use embedding::{CoverBox, PointCloud, UnitVectorMap};
pub use error::{Error, ErrorKind, Result};
pub use extension::{
    build_phi_gamma, verify_conditions, ExtensionSpace, KernelSource, PhiGamma, PhiOptions, Verdict,
};
pub use graph::{Edge, Girth, LabeledMultigraph};
pub use group::{Permutation, QuotientGroup, Word};
pub use metric::MetricMatrix;
pub use semidirect::{builtin_extension, ExtensionTower, ExtensionTriple};
