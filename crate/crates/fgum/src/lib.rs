//! Fine-grained unambiguous parity measurements on symmetric states over F_2^n.
//!
//! The crate builds the coset-reduced primal LP and its dual, solves both with
//! an exact rational simplex (or binary64), checks the closed-form dual and
//! primal families, synthesizes the corresponding POVM and simulates the
//! measurement.
//!
//! Index convention: coordinate x_1 is the least significant bit of the
//! integer encoding. Bit strings are printed most significant bit first, so
//! `"01"` is the vector with x_1 = 1.

pub mod bounds;
pub mod f2lin;
pub mod lp;
pub mod povm;
pub mod profiles;
pub mod scalar;
pub mod simulate;

pub use f2lin::{CosetPartition, F2Matrix, F2Vec, ParityCode};
pub use lp::{CodeBook, DualSolution, LpModel, PrimalSolution, SolveReport};
pub use profiles::{AmplitudeProfile, CostFunction};
pub use scalar::{Rational, Scalar};

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum Error {
    #[error("{what} budget exceeded: n = {n}, limit is {limit}")]
    Budget { what: &'static str, n: usize, limit: usize },
    #[error("matrix is rank deficient: rank {rank} < {rows} rows")]
    RankDeficient { rank: usize, rows: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    #[error("invalid cost function: {0}")]
    InvalidCost(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("weight of index {index} is zero; apply perturb_full_support first")]
    ZeroWeight { index: String },
    #[error("profile carries weights only; complex amplitudes are required")]
    MissingAmplitudes,
    #[error("set is not {tau}-universal")]
    NotUniversal { tau: usize },
    #[error("solution is not feasible: {0}")]
    Infeasible(String),
}

pub type Result<T> = std::result::Result<T, Error>;
