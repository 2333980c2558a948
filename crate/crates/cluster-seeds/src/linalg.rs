//! Exact Gaussian elimination over the rationals.

use crate::error::{Error, Result};
use crate::root_data::Q;
use num_traits::Zero;

/// Solves `rows * x = rhs` exactly.  The system must have exactly one
/// solution: an inconsistent system or a nonzero kernel is an error naming
/// `phase` (the kernel basis is attached in the latter case).
pub fn solve_unique(phase: &str, rows: &[Vec<Q>], rhs: &[Q], unknowns: usize) -> Result<Vec<Q>> {
    let mut a: Vec<Vec<Q>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut row = r.clone();
            row.push(*b);
            row
        })
        .collect();
    let m = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..unknowns {
        let Some(p) = (r..m).find(|&k| !a[k][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let pv = a[r][c];
        for x in a[r].iter_mut() {
            *x /= pv;
        }
        for k in 0..m {
            if k != r && !a[k][c].is_zero() {
                let f = a[k][c];
                let pivot_row = a[r].clone();
                for (x, y) in a[k].iter_mut().zip(&pivot_row) {
                    *x -= f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if a[r..].iter().any(|row| !row[unknowns].is_zero()) {
        return Err(Error::Inconsistent(phase.to_string()));
    }
    if pivots.len() < unknowns {
        let free: Vec<usize> = (0..unknowns).filter(|c| !pivots.contains(c)).collect();
        let kernel = free
            .iter()
            .map(|&f| {
                let mut v = vec![Q::zero(); unknowns];
                v[f] = Q::from_integer(1);
                for (k, &c) in pivots.iter().enumerate() {
                    v[c] = -a[k][f];
                }
                v
            })
            .collect();
        return Err(Error::NonUnique {
            phase: phase.to_string(),
            kernel,
        });
    }
    let mut x = vec![Q::zero(); unknowns];
    for (k, &c) in pivots.iter().enumerate() {
        x[c] = a[k][unknowns];
    }
    Ok(x)
}
