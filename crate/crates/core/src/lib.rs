//! Structure theory of the Pell-type equations kx² − ly² = C, C ∈ {1, 2, 4}.
//!
//! The crate computes fundamental and minimal solutions, walks their powers
//! exactly, decides which power a given solution is, and checks Störmer-type
//! statements about those powers over bounded ranges. Everything is exact
//! big-integer arithmetic; nothing is ever rounded.

pub mod applications;
pub mod arith;
pub mod dec;
pub mod error;
pub mod lehmer;
pub mod pell;
pub mod quadring;
pub mod splitting;
pub mod stormer;

pub use error::{Error, Result};
pub use lehmer::LehmerParams;
pub use pell::{fundamental_solution, minimal_solution, solutions, PellRhs, PellSolution, Solution};
pub use quadring::{MixedSolution, QuadInt};
pub use splitting::{split, SplitResult};
pub use stormer::{
    classify_exponent, verify_theorem, Bounds, PowerRecord, ExponentClassification, TheoremId, VerificationReport,
    VerifyOptions,
};
