use thiserror::Error;

/// Every failure the library reports.
#[derive(Debug, Error)]
pub enum Error {
    #[error("graph is disconnected")]
    DisconnectedGraph,

    #[error("graph is not regular (vertex {vertex} has degree {degree}, expected {expected})")]
    NotRegular {
        vertex: usize,
        degree: usize,
        expected: usize,
    },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("cover would have {vertices} vertices, over the cap of {cap}")]
    SizeCapExceeded { vertices: String, cap: usize },

    #[error("generator index {index} out of range (arity {arity})")]
    BadGenerator { index: usize, arity: usize },

    #[error("graph is not a Cayley graph: {0}")]
    NotCayley(String),

    #[error("group of order {order} exceeds the multiplication-table cap {cap}")]
    GroupTooLarge { order: usize, cap: usize },

    #[error("induced map is not bijective ({image} distinct images for {order} elements)")]
    NotBijective { image: usize, order: usize },

    #[error("induced map is not a homomorphism at ({left}, {right})")]
    NotHomomorphic { left: usize, right: usize },

    #[error("automorphism order exceeds cap {cap}")]
    OrderCapExceeded { cap: usize },

    #[error("automorphism order {order} does not divide the cyclic order {modulus}")]
    NotDividing { order: usize, modulus: usize },

    #[error("diameters not strictly increasing at level {index}: {previous} then {current}")]
    DiametersNotIncreasing {
        index: usize,
        previous: f64,
        current: f64,
    },

    #[error("gap {index} is {gap}, must exceed {required}")]
    GapTooSmall {
        index: usize,
        gap: f64,
        required: f64,
    },

    #[error("expected {expected} gaps, got {got}")]
    GapCount { expected: usize, got: usize },

    #[error("metrics are on different point sets ({left} vs {right} points)")]
    MismatchedPointSets { left: usize, right: usize },

    #[error("invalid metric: {0}")]
    InvalidMetric(String),

    #[error("component {0} carries no wall data")]
    MissingWallData(usize),

    #[error("gap {index} = {gap} is not a positive integer")]
    NonIntegralGap { index: usize, gap: f64 },

    #[error("matrix not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },

    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("kernel not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    KernelNotPsd { min_eigenvalue: f64 },

    #[error("no ball radius up to {cap} satisfies the overlap condition (worst pair ({x}, {y}), deviation {deviation})")]
    NoValidS {
        cap: f64,
        x: usize,
        y: usize,
        deviation: f64,
    },

    #[error("eta({gamma}, {g}) = {value} is not in H")]
    EtaEscapesH { gamma: usize, g: usize, value: usize },

    #[error("inequality {which} violated at gamma1={gamma1}, gamma2={gamma2}, g={g} by {excess}")]
    InequalityViolated {
        which: u8,
        gamma1: usize,
        gamma2: usize,
        g: usize,
        excess: f64,
    },

    #[error("condition {condition} violated at ({x}, {y}): {detail}")]
    ConditionViolated {
        condition: &'static str,
        x: usize,
        y: usize,
        detail: String,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Coarse classification used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Unreadable input, malformed files.
    Input,
    /// Inputs violate a precondition or a validation rule.
    Validation,
    /// A certified construction failed a post-hoc check.
    Verification,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Io(_) | Error::Json(_) | Error::Csv(_) | Error::Parse(_) => ErrorKind::Input,
            Error::EtaEscapesH { .. }
            | Error::InequalityViolated { .. }
            | Error::ConditionViolated { .. } => ErrorKind::Verification,
            _ => ErrorKind::Validation,
        }
    }

    /// Stable machine-readable name of the variant.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DisconnectedGraph => "DisconnectedGraph",
            Error::NotRegular { .. } => "NotRegular",
            Error::InvalidGraph(_) => "InvalidGraph",
            Error::SizeCapExceeded { .. } => "SizeCapExceeded",
            Error::BadGenerator { .. } => "BadGenerator",
            Error::NotCayley(_) => "NotCayley",
            Error::GroupTooLarge { .. } => "GroupTooLarge",
            Error::NotBijective { .. } => "NotBijective",
            Error::NotHomomorphic { .. } => "NotHomomorphic",
            Error::OrderCapExceeded { .. } => "OrderCapExceeded",
            Error::NotDividing { .. } => "NotDividing",
            Error::DiametersNotIncreasing { .. } => "DiametersNotIncreasing",
            Error::GapTooSmall { .. } => "GapTooSmall",
            Error::GapCount { .. } => "GapCount",
            Error::MismatchedPointSets { .. } => "MismatchedPointSets",
            Error::InvalidMetric(_) => "InvalidMetric",
            Error::MissingWallData(_) => "MissingWallData",
            Error::NonIntegralGap { .. } => "NonIntegralGap",
            Error::NotSymmetric { .. } => "NotSymmetric",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::KernelNotPsd { .. } => "KernelNotPSD",
            Error::NoValidS { .. } => "NoValidS",
            Error::EtaEscapesH { .. } => "EtaEscapesH",
            Error::InequalityViolated { .. } => "InequalityViolated",
            Error::ConditionViolated { .. } => "ConditionViolated",
            Error::Parse(_) => "Parse",
            Error::Io(_) => "Io",
            Error::Json(_) => "Json",
            Error::Csv(_) => "Csv",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
