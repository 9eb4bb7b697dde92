use thiserror::Error;

use crate::lattice::LatticePoint;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LatticeError {
    #[error("invalid dimensions {m}x{n}")]
    InvalidDimensions { m: usize, n: usize },
    #[error("point {0} lies outside the region")]
    OutOfRange(LatticePoint),
    #[error("consecutive points at index {0} are not nearest neighbours")]
    NotUnitStep(usize),
    #[error("not a simple closed circuit: {0}")]
    NotACircuit(String),
    #[error("ambiguous walk decomposition at branching vertices {0:?}")]
    AmbiguousDecomposition(Vec<LatticePoint>),
    #[error("index {index} out of range for walk of length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("parse error: {0}")]
    Parse(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RemovabilityError {
    #[error("vertex {0} is not a reflex vertex")]
    NotReflex(usize),
    #[error("witness does not match the circuit: {0}")]
    InvalidWitness(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConditionError {
    #[error("index {0} is not a step anchor")]
    NotAStepAnchor(usize),
    #[error("walk does not span all row and column indices")]
    SpanViolation,
    #[error("not a tree: {0}")]
    NotATree(String),
    #[error("walks do not cover the support: {missing} missing, {extra} outside")]
    CoverMismatch { missing: usize, extra: usize },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CompletionError {
    #[error("genericity violation at {target} in minor rows {rows:?} cols {cols:?}: |alpha| = {alpha:e} against scale {scale:e}")]
    GenericityViolation { target: LatticePoint, rows: Vec<usize>, cols: Vec<usize>, alpha: f64, scale: f64 },
    #[error("no admissible minor for scheduled entry {0}")]
    ScheduleGap(LatticePoint),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("invalid minor: {0}")]
    InvalidMinor(String),
    #[error("invalid partial matrix: {0}")]
    InvalidInput(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CertificateError {
    #[error("malformed certificate: {0}")]
    Malformed(String),
    #[error("instance is not exactly representable: {0}")]
    InexactInput(String),
}
