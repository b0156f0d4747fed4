//! Inputs shared by the criterion benches.

/// Radicands whose fundamental units span short and long continued-fraction periods.
pub const RADICANDS: &[u64] = &[13, 61, 109, 181, 421, 661, 991];
