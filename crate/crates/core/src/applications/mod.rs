//! Applications of the structure theory: triangular numbers in geometric
//! progression, the Ma-conjecture equations and Ljunggren-type quotients.
//! Each solver has a brute-force twin used as its oracle.

pub mod gp;
pub mod ljunggren;
pub mod ma;

pub use gp::{gp_construct, gp_scan, gp_scan_form, triangular, triangular_index, GpTriple, Progression, SignMode};
pub use ljunggren::{
    ljunggren_bruteforce, ljunggren_compare, ljunggren_solve, LjunggrenAgreement, LjunggrenBounds,
    LjunggrenFamily, LjunggrenQuery, LjunggrenReport, LjunggrenSolution,
};
pub use ma::{ma_bruteforce, ma_solve, MaCase, MaEquation, MaInstance, MaReport, MaSolution};
