//! Small exact linear algebra helpers: dense rational solves, inertia of a
//! symmetric integer matrix, negative-definiteness tests. Matrices here are
//! tiny (the rank of a model, or the size of a Zariski support set), so plain
//! Gaussian elimination over `Rat` is the right tool.

use crate::error::{Error, Result};
use crate::rat::Rat;

/// Solves `a * x = rhs` for each right-hand side column, exactly.
/// Returns `None` if `a` is singular.
pub(crate) fn solve(a: &[Vec<Rat>], rhs: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let n = a.len();
    debug_assert!(a.iter().all(|row| row.len() == n));
    debug_assert!(rhs.iter().all(|col| col.len() == n));
    let k = rhs.len();

    // augmented matrix, rhs as extra columns
    let mut m: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            a[i].iter()
                .cloned()
                .chain(rhs.iter().map(|col| col[i].clone()))
                .collect()
        })
        .collect();

    for col in 0..n {
        let pivot_row = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot_row);
        let pivot = m[col][col].clone();
        for j in col..n + k {
            m[col][j] = &m[col][j] / &pivot;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for j in col..n + k {
                    let delta = &factor * &m[col][j];
                    m[r][j] = &m[r][j] - &delta;
                }
            }
        }
    }

    Some(
        (0..k)
            .map(|j| (0..n).map(|i| m[i][n + j].clone()).collect())
            .collect(),
    )
}

/// Inertia (positive, negative, zero eigenvalue counts) of a symmetric
/// rational matrix, by congruence diagonalization. Exact; Sylvester's law
/// makes the count basis-independent.
pub(crate) fn inertia(sym: &[Vec<Rat>]) -> (usize, usize, usize) {
    let n = sym.len();
    let mut a: Vec<Vec<Rat>> = sym.to_vec();
    let (mut pos, mut neg, mut zero) = (0usize, 0usize, 0usize);

    for k in 0..n {
        if a[k][k].is_zero() {
            // try a congruence swap with a later nonzero diagonal entry
            if let Some(j) = (k + 1..n).find(|&j| !a[j][j].is_zero()) {
                a.swap(k, j);
                for row in a.iter_mut() {
                    row.swap(k, j);
                }
            } else if let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
                // hyperbolic pair: add row/col j into k, making a[k][k] = 2*a[k][j]
                for col in 0..n {
                    let v = a[j][col].clone();
                    a[k][col] = &a[k][col] + &v;
                }
                for row in 0..n {
                    let v = a[row][j].clone();
                    a[row][k] = &a[row][k] + &v;
                }
            } else {
                zero += 1;
                continue;
            }
        }
        let pivot = a[k][k].clone();
        match pivot.cmp_zero() {
            std::cmp::Ordering::Greater => pos += 1,
            std::cmp::Ordering::Less => neg += 1,
            std::cmp::Ordering::Equal => unreachable!(),
        }
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let factor = &a[i][k] / &pivot;
            for j in 0..n {
                let delta = &factor * &a[k][j];
                a[i][j] = &a[i][j] - &delta;
            }
            for row in 0..n {
                let delta = &factor * &a[row][k];
                a[row][i] = &a[row][i] - &delta;
            }
        }
    }

    (pos, neg, zero)
}

/// A symmetric matrix is negative definite iff its leading principal minors
/// alternate in sign starting negative. Minors are products of elimination
/// pivots, so one LU pass without pivoting decides it (a zero pivot means a
/// vanishing leading minor, which already rules definiteness out).
pub(crate) fn is_negative_definite(sym: &[Vec<Rat>]) -> bool {
    let n = sym.len();
    if n == 0 {
        return true;
    }
    let mut a = sym.to_vec();
    for k in 0..n {
        if !a[k][k].is_negative() {
            // pivot of a negative definite matrix is always negative
            return false;
        }
        let pivot = a[k][k].clone();
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let factor = &a[i][k] / &pivot;
            for j in k..n {
                let delta = &factor * &a[k][j];
                a[i][j] = &a[i][j] - &delta;
            }
        }
    }
    true
}

/// Hodge index check: signature must be exactly (1, rank - 1) with no kernel.
pub(crate) fn check_hodge_signature(gram: &[Vec<Rat>]) -> Result<()> {
    let n = gram.len();
    let (pos, neg, zero) = inertia(gram);
    if pos != 1 || zero != 0 || neg + 1 != n {
        return Err(Error::Validation(format!(
            "gram not signature (1,{}): inertia is ({pos},{neg},{zero})",
            n.saturating_sub(1)
        )));
    }
    Ok(())
}
