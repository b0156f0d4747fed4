//! Triangular numbers, and numbers Dm² ± C, in geometric progression.

use std::collections::HashMap;

use num_integer::Roots;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

pub fn triangular(n: u64) -> u64 {
    n * (n + 1) / 2
}

/// n with T_n = v, if v is triangular.
pub fn triangular_index(v: u64) -> Option<u64> {
    let s = (8 * v + 1).sqrt();
    (s * s == 8 * v + 1).then_some((s - 1) / 2)
}

/// Three triangular numbers in geometric progression. The ratio is
/// values[1]/values[0] as a reduced fraction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GpTriple {
    pub indices: [u64; 3],
    pub values: [u64; 3],
    pub ratio: (u64, u64),
}

fn reduced(num: u64, den: u64) -> (u64, u64) {
    let g = num_integer::gcd(num, den);
    (num / g, den / g)
}

/// T_n, T_{n+2m}, T_{3n+4m+1} when T_n = m².
pub fn gp_construct(n: u64) -> Result<Option<GpTriple>> {
    if n == 0 {
        return domain("n must be positive");
    }
    let t = triangular(n);
    let m = t.sqrt();
    if m * m != t {
        return Ok(None);
    }
    let indices = [n, n + 2 * m, 3 * n + 4 * m + 1];
    let values = indices.map(triangular);
    debug_assert_eq!(values[0] as u128 * values[2] as u128, (values[1] as u128).pow(2));
    Ok(Some(GpTriple {
        indices,
        values,
        ratio: reduced(values[1], values[0]),
    }))
}

/// A geometric progression found by a scan: the values, in increasing
/// order, and for triangular scans their indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Progression {
    pub values: Vec<u64>,
    pub indices: Vec<u64>,
}

/// All increasing geometric progressions of the given length drawn from
/// `values` (sorted, distinct, positive). A progression is fixed by its
/// first two terms, so every ordered pair is tried as a start.
fn progressions(values: &[u64], length: usize) -> Vec<Vec<usize>> {
    let pos: HashMap<u64, usize> = values.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut out: Vec<Vec<usize>> = (0..values.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let pos = &pos;
            (i + 1..values.len()).filter_map(move |j| {
                let mut run = vec![i, j];
                while run.len() < length {
                    let (u, v) = (values[run[run.len() - 2]] as u128, values[run[run.len() - 1]] as u128);
                    if (v * v) % u != 0 {
                        return None;
                    }
                    let w = u64::try_from(v * v / u).ok()?;
                    run.push(*pos.get(&w)?);
                }
                Some(run)
            })
        })
        .collect();
    out.sort();
    out
}

/// Geometric progressions of `length` ∈ {3, 4} distinct triangular numbers
/// T_1, ..., T_bound, with rational ratio.
pub fn gp_scan(bound: u64, length: usize) -> Result<Vec<Progression>> {
    if !matches!(length, 3 | 4) {
        return domain(format!("length must be 3 or 4, got {length}"));
    }
    let values: Vec<u64> = (1..=bound).map(triangular).collect();
    Ok(progressions(&values, length)
        .into_iter()
        .map(|run| Progression {
            values: run.iter().map(|&i| values[i]).collect(),
            indices: run.iter().map(|&i| i as u64 + 1).collect(),
        })
        .collect())
}

/// Which values Dm² ± C a variant scan draws from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignMode {
    Plus,
    Minus,
    /// Dm² + C and Dm² − C together.
    Both,
}

/// Geometric progressions of `length` distinct positive values
/// Dm² + σC, 1 ≤ m ≤ bound. `indices` is left empty.
pub fn gp_scan_form(d: u64, c: u64, sign: SignMode, bound: u64, length: usize) -> Result<Vec<Progression>> {
    if d == 0 || !matches!(c, 1 | 2 | 4) {
        return domain(format!("need D ≥ 1 and C ∈ {{1, 2, 4}}, got D = {d}, C = {c}"));
    }
    if !matches!(length, 3 | 4) {
        return domain(format!("length must be 3 or 4, got {length}"));
    }
    let mut values: Vec<u64> = Vec::new();
    for m in 1..=bound {
        let base = d * m * m;
        if matches!(sign, SignMode::Plus | SignMode::Both) {
            values.push(base + c);
        }
        if matches!(sign, SignMode::Minus | SignMode::Both) && base > c {
            values.push(base - c);
        }
    }
    values.sort_unstable();
    values.dedup();
    Ok(progressions(&values, length)
        .into_iter()
        .map(|run| Progression {
            values: run.iter().map(|&i| values[i]).collect(),
            indices: vec![],
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construct_examples() {
        let t = gp_construct(1).unwrap().unwrap();
        assert_eq!(t.values, [1, 6, 36]);
        assert_eq!(t.indices, [1, 3, 8]);
        assert_eq!(t.ratio, (6, 1));
        let t = gp_construct(8).unwrap().unwrap();
        assert_eq!(t.indices, [8, 20, 49]);
        assert_eq!(t.values, [36, 210, 1225]);
        assert!(gp_construct(2).unwrap().is_none());
        assert!(gp_construct(0).is_err());
    }

    #[test]
    fn scan_small() {
        let s = gp_scan(100, 3).unwrap();
        assert!(s.iter().any(|p| p.values == [1, 6, 36]));
        for p in &s {
            assert_eq!(p.values[0] as u128 * p.values[2] as u128, (p.values[1] as u128).pow(2));
        }
        assert!(gp_scan(1, 3).unwrap().is_empty());
        assert!(gp_scan(300, 4).unwrap().is_empty());
        assert!(gp_scan(10, 5).is_err());
    }

    #[test]
    fn index_inverse() {
        for n in 0..1000 {
            assert_eq!(triangular_index(triangular(n)), Some(n));
        }
        assert_eq!(triangular_index(2), None);
    }
}
