//! Set models and numerical checks for gap-free packings.
//!
//! The crate provides two concrete set models — digital subsets of a
//! d-dimensional box ([`grid::GridSet`]) and families of pairwise-disjoint
//! disks ([`disk::DiskFamily`]) — together with the machinery to
//!
//! * evaluate relative perimeters exactly (integer face counts on grids,
//!   arc-length clipping for circles),
//! * check the perimeter axioms (null empty set, complement symmetry,
//!   truncation stability, lower semicontinuity, null-set invariance),
//! * generate packings (Apollonian gaskets via the Descartes circle
//!   recursion, random greedy disk packings, square tilings as a
//!   finite-perimeter control),
//! * validate packing hypotheses and tail-union perimeter certificates,
//! * measure divergence signatures of partial perimeter and diameter sums,
//! * slice families with horizontal lines and collect crossing statistics,
//! * estimate the box-counting dimension of the residual set.
//!
//! All set types are immutable after construction and every operation is a
//! pure function of its inputs, so evaluation over independent inputs is
//! safe to run concurrently.

// Validation guards are written as `!(x > 0.0)` so that NaN inputs are
// rejected along with nonpositive ones.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod axioms;
mod bits;
pub mod certify;
pub mod dimension;
pub mod disk;
pub mod divergence;
pub mod document;
pub mod family;
pub mod fit;
pub mod grid;
pub mod packing;
pub mod slicing;

/// Errors shared by all modules of the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("grid sets live on different ambient boxes")]
    GridMismatch,
    #[error("expected dimension {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("second set is not a subset of the first")]
    NotSubset,
    #[error("need at least {need} terms, got {got}")]
    SequenceTooShort { need: usize, got: usize },
    #[error("measures of the symmetric differences do not converge to zero")]
    NotL1Convergent,
    #[error("sets {0} and {1} overlap")]
    Overlap(u32, u32),
    #[error("family is empty")]
    EmptyFamily,
    #[error("index range ({n}, {m}) invalid for family of {len} sets")]
    IndexOutOfRange { n: usize, m: usize, len: usize },
    #[error("family does not cover the ambient: residual measure {residual}")]
    DoesNotCover { residual: f64 },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("Descartes discriminant is negative: {0}")]
    NegativeDiscriminant(f64),
    #[error("no tangency-consistent center for curvature {0}")]
    NoConsistentCenter(f64),
    #[error("cannot place a disk: residual region exhausted at radius floor {0}")]
    CannotPlace(f64),
    #[error("resolution {resolution} is not divisible by 2^{levels}")]
    ResolutionNotDivisible { resolution: usize, levels: u32 },
    #[error("resolution must be a power of two in [2, {max}], got {got}")]
    ResolutionOutOfRange { got: usize, max: usize },
    #[error("need at least {need} scales, got {got}")]
    TooFewScales { need: usize, got: usize },
    #[error("residual set is empty")]
    EmptyResidual,
    #[error("need at least {need} lines, got {got}")]
    TooFewLines { need: usize, got: usize },
    #[error("degenerate sequence: {0}")]
    DegenerateSequence(String),
    #[error("malformed document: {0}")]
    MalformedDocument(String),
    #[error("operation requires the {expected} model, document carries {got}")]
    ModelMismatch {
        expected: &'static str,
        got: &'static str,
    },
    #[error("generation failed: {0}")]
    GenerationFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
