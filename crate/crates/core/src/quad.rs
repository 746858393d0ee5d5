//! Gauss–Hermite quadrature and orthonormal Hermite-function evaluation.
//!
//! Nodes and weights for the weight `e^{−x²}` come from the Golub–Welsch
//! eigenvalue method on the Jacobi matrix of the (physicists') Hermite
//! polynomials. Integrals of rapidly decaying functions are computed as
//!
//! ```text
//! ∫ f(x) dx ≈ scale · Σ_i w_i e^{x_i²} f(center + scale·x_i)
//! ```
//!
//! which is exact whenever `f(center + scale·u) = poly(u)·e^{−u²}` with the
//! polynomial degree below `2·order`. Callers pick `center`/`scale` to match
//! the Gaussian envelope of their integrand.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{CoreError, Result};

#[derive(Clone, Debug)]
pub struct QuadratureGrid {
    nodes: Vec<f64>,
    /// `w_i e^{x_i²}`, the weights for integrating plain functions.
    bare_weights: Vec<f64>,
}

impl QuadratureGrid {
    pub fn gauss_hermite(order: usize) -> Result<Self> {
        if order < 2 {
            return Err(CoreError::Config(format!("quadrature order {order} too small")));
        }
        let mut jacobi = DMatrix::zeros(order, order);
        for i in 1..order {
            let beta = (i as f64 / 2.0).sqrt();
            jacobi[(i - 1, i)] = beta;
            jacobi[(i, i - 1)] = beta;
        }
        let eigen = SymmetricEigen::new(jacobi);
        let mut pairs: Vec<(f64, f64)> = (0..order)
            .map(|j| {
                let node = eigen.eigenvalues[j];
                let v0 = eigen.eigenvectors[(0, j)];
                let weight = std::f64::consts::PI.sqrt() * v0 * v0;
                (node, weight)
            })
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let nodes: Vec<f64> = pairs.iter().map(|p| p.0).collect();
        let bare_weights: Vec<f64> =
            pairs.iter().map(|p| p.1 * (p.0 * p.0).exp()).collect();
        Ok(QuadratureGrid { nodes, bare_weights })
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Sample points `center + scale·x_i` of a shifted grid.
    pub fn points(&self, center: f64, scale: f64) -> impl Iterator<Item = f64> + '_ {
        self.nodes.iter().map(move |&x| center + scale * x)
    }

    /// `∫ f(x) dx` for `f` decaying like `e^{−((x−center)/scale)²}`.
    pub fn integrate<F: FnMut(f64) -> Complex64>(
        &self,
        center: f64,
        scale: f64,
        mut f: F,
    ) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (&x, &w) in self.nodes.iter().zip(&self.bare_weights) {
            acc += w * f(center + scale * x);
        }
        scale * acc
    }

    /// Plain-function weights `w_i e^{x_i²}` aligned with `points`.
    pub fn bare_weights(&self) -> &[f64] {
        &self.bare_weights
    }
}

/// Values `h_0(x), .., h_{n_max}(x)` of the orthonormal Hermite functions
/// (`∫ h_m h_n = δ_{mn}`), via the stable three-term recurrence
/// `h_{n+1} = √(2/(n+1))·x·h_n − √(n/(n+1))·h_{n−1}`.
pub fn hermite_values(n_max: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    let h0 = std::f64::consts::PI.powf(-0.25) * (-x * x / 2.0).exp();
    out.push(h0);
    if n_max == 0 {
        return out;
    }
    out.push((2.0f64).sqrt() * x * h0);
    for n in 1..n_max {
        let n_f = n as f64;
        let next = (2.0 / (n_f + 1.0)).sqrt() * x * out[n]
            - (n_f / (n_f + 1.0)).sqrt() * out[n - 1];
        out.push(next);
    }
    out
}

/// The width-√2 Hermite basis `φ_n(x) = 2^{1/4} h_n(√2 x)`, orthonormal on
/// L²(ℝ) and adapted to the Gaussian `e^{−x²}` (which is `∝ φ_0`).
pub fn phi_values(n_max: usize, x: f64) -> Vec<f64> {
    let norm = (2.0f64).powf(0.25);
    hermite_values(n_max, std::f64::consts::SQRT_2 * x)
        .into_iter()
        .map(|v| norm * v)
        .collect()
}
