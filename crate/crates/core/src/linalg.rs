//! Kernel computations used by the index machinery: exact Gaussian
//! elimination over the Gaussian rationals and a float fallback through SVD
//! with an explicit indeterminacy band around the rank threshold.

use nalgebra::{Complex, DMatrix};

use crate::error::{CoreError, Result};
use crate::scalar::GaussianRational;

/// Default singular-value threshold for float-mode rank decisions.
pub const SVD_THRESHOLD: f64 = 1e-8;
/// Singular values within this factor above the threshold abort instead of
/// guessing a rank.
pub const SVD_INDETERMINATE_BAND: f64 = 10.0;

/// Kernel dimension of a dense matrix over ℚ(i), by row reduction.
/// `matrix[r][c]` is row `r`, column `c`; the kernel lives in column space.
pub fn exact_kernel_dim(matrix: &[Vec<GaussianRational>]) -> usize {
    let rows = matrix.len();
    let cols = matrix.first().map_or(0, Vec::len);
    if cols == 0 {
        return 0;
    }
    let mut m: Vec<Vec<GaussianRational>> = matrix.to_vec();
    let mut rank = 0usize;
    for col in 0..cols {
        let pivot = (rank..rows).find(|&r| !m[r][col].is_zero());
        let Some(pivot) = pivot else { continue };
        m.swap(rank, pivot);
        let inv = m[rank][col].inv();
        for c in col..cols {
            m[rank][c] = m[rank][c].mul(&inv);
        }
        for r in 0..rows {
            if r != rank && !m[r][col].is_zero() {
                let factor = m[r][col].neg();
                for c in col..cols {
                    let delta = m[rank][c].mul(&factor);
                    m[r][c] = m[r][c].add(&delta);
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    cols - rank
}

/// Kernel dimension of a complex matrix by SVD. Fails with
/// [`CoreError::IndeterminateRank`] when a singular value falls inside the
/// band `[threshold, 10·threshold)` relative to the largest one.
pub fn float_kernel_dim(matrix: &DMatrix<Complex<f64>>, threshold: f64) -> Result<usize> {
    let cols = matrix.ncols();
    if cols == 0 {
        return Ok(0);
    }
    if matrix.nrows() == 0 {
        return Ok(cols);
    }
    let svd = matrix.clone().svd(false, false);
    let max_sv = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let scale = max_sv.max(1.0);
    let cut = threshold * scale;
    let band = SVD_INDETERMINATE_BAND * cut;
    let mut kernel = cols - svd.singular_values.len();
    for &sv in svd.singular_values.iter() {
        if sv < cut {
            kernel += 1;
        } else if sv < band {
            return Err(CoreError::IndeterminateRank { value: sv });
        }
    }
    Ok(kernel)
}
