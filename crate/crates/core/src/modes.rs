//! The finite-dimensional mode space `U_N` spanned by the real generators
//! `e_{2k-1} ↔ cos(kθ)/√(kπ)`, `e_{2k} ↔ sin(kθ)/√(kπ)` for `1 ≤ k ≤ N`,
//! carrying the symplectic form ω, complex structure J, the metric
//! `g(X,Y) = ω(X, J Y)` and the Heisenberg 2-cocycle `exp(i ω)`.
//!
//! ω is hard-coded from its closed-form value on the basis; a numeric
//! quadrature cross-check lives in the test suite only. The central generator
//! K of the extension acts as `i·id` throughout and is never materialized.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{CoreError, Result};
use crate::scalar::Scalar;

/// Exact rational combination of the real basis vectors `e_1 .. e_{2N}`.
/// Keys are 1-based basis indices; zero coefficients are never stored.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct RealModeVector {
    coeffs: BTreeMap<u32, BigRational>,
}

impl RealModeVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(index: u32) -> Self {
        assert!(index >= 1, "basis indices are 1-based");
        let mut coeffs = BTreeMap::new();
        coeffs.insert(index, BigRational::from_integer(BigInt::from(1)));
        RealModeVector { coeffs }
    }

    pub fn set(&mut self, index: u32, value: BigRational) {
        if value.is_zero() {
            self.coeffs.remove(&index);
        } else {
            self.coeffs.insert(index, value);
        }
    }

    pub fn get(&self, index: u32) -> BigRational {
        self.coeffs.get(&index).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &BigRational)> {
        self.coeffs.iter().map(|(&i, q)| (i, q))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (i, q) in other.iter() {
            out.set(i, out.get(i) + q);
        }
        out
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        let mut out = RealModeVector::zero();
        for (i, q) in self.iter() {
            out.set(i, q * factor);
        }
        out
    }

    fn max_index(&self) -> u32 {
        self.coeffs.keys().next_back().copied().unwrap_or(0)
    }
}

/// Which complex generator a [`ComplexMode`] refers to:
/// `z_k = (e_{2k-1} + i e_{2k})/√2` or `z̄_k = (e_{2k-1} - i e_{2k})/√2`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ComplexKind {
    Z,
    ZBar,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ComplexMode {
    pub index: u32,
    pub kind: ComplexKind,
}

impl ComplexMode {
    pub fn z(index: u32) -> Self {
        ComplexMode { index, kind: ComplexKind::Z }
    }

    pub fn z_bar(index: u32) -> Self {
        ComplexMode { index, kind: ComplexKind::ZBar }
    }

    /// The coefficients of this generator over the real basis, in the chosen
    /// scalar mode: `z_k = (e_{2k-1} + i e_{2k})/√2` and its conjugate.
    pub fn real_coefficients<S: Scalar>(&self) -> [(u32, S); 2] {
        let inv_sqrt2 = S::sqrt_nat(2).mul(&S::from_ratio(1, 2));
        let i_part = match self.kind {
            ComplexKind::Z => S::i().mul(&inv_sqrt2),
            ComplexKind::ZBar => S::i().mul(&inv_sqrt2).neg(),
        };
        [(2 * self.index - 1, inv_sqrt2), (2 * self.index, i_part)]
    }
}

/// The mode space `U_N`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ModeSpace {
    n_modes: u32,
}

impl ModeSpace {
    pub fn new(n_modes: u32) -> Self {
        assert!(n_modes >= 1, "mode space needs at least one mode");
        ModeSpace { n_modes }
    }

    pub fn n_modes(&self) -> u32 {
        self.n_modes
    }

    /// Real basis dimension `2N`.
    pub fn dim(&self) -> u32 {
        2 * self.n_modes
    }

    fn check_vector(&self, v: &RealModeVector) -> Result<()> {
        let max = v.max_index();
        if max > self.dim() {
            return Err(CoreError::ModeOutOfRange {
                index: max.div_ceil(2),
                n_modes: self.n_modes,
            });
        }
        Ok(())
    }

    /// The symplectic form in closed form: `ω(e_{2k-1}, e_{2k}) = 1`, all
    /// other basis pairs zero up to antisymmetry.
    pub fn omega(&self, x: &RealModeVector, y: &RealModeVector) -> Result<BigRational> {
        self.check_vector(x)?;
        self.check_vector(y)?;
        let mut acc = BigRational::zero();
        for k in 1..=self.n_modes {
            let (c, s) = (2 * k - 1, 2 * k);
            acc += x.get(c) * y.get(s) - x.get(s) * y.get(c);
        }
        Ok(acc)
    }

    /// The complex structure: `J e_{2k-1} = e_{2k}`, `J e_{2k} = -e_{2k-1}`.
    pub fn apply_j(&self, x: &RealModeVector) -> Result<RealModeVector> {
        self.check_vector(x)?;
        let mut out = RealModeVector::zero();
        for (i, q) in x.iter() {
            if i % 2 == 1 {
                out.set(i + 1, q.clone());
            } else {
                out.set(i - 1, -q.clone());
            }
        }
        Ok(out)
    }

    /// `g(X, Y) = ω(X, J Y)`; makes the real basis orthonormal.
    pub fn metric(&self, x: &RealModeVector, y: &RealModeVector) -> Result<BigRational> {
        let jy = self.apply_j(y)?;
        self.omega(x, &jy)
    }

    /// The Heisenberg 2-cocycle `τ(x, y) = exp(i ω(x, y))`.
    pub fn heisenberg_cocycle(&self, x: &RealModeVector, y: &RealModeVector) -> Result<Complex64> {
        let w = self.omega(x, y)?;
        let angle = w.to_f64_lossy();
        Ok(Complex64::new(0.0, angle).exp())
    }

    /// Decomposes a real vector over the complex generators: returns, per
    /// mode k, the coefficients of `z_k` and `z̄_k`.
    ///
    /// From the conversion table, a vector `a·e_{2k-1} + b·e_{2k}` equals
    /// `((a - ib)/√2)·z_k + ((a + ib)/√2)·z̄_k`.
    pub fn complex_decomposition<S: Scalar>(
        &self,
        x: &RealModeVector,
    ) -> Result<Vec<(u32, S, S)>> {
        self.check_vector(x)?;
        let inv_sqrt2 = S::sqrt_nat(2).mul(&S::from_ratio(1, 2));
        let mut out = Vec::new();
        for k in 1..=self.n_modes {
            let a = x.get(2 * k - 1);
            let b = x.get(2 * k);
            if a.is_zero() && b.is_zero() {
                continue;
            }
            let a_s = rational_scalar::<S>(&a);
            let b_s = rational_scalar::<S>(&b);
            let ib = S::i().mul(&b_s);
            let z = a_s.sub(&ib).mul(&inv_sqrt2);
            let z_bar = a_s.add(&ib).mul(&inv_sqrt2);
            out.push((k, z, z_bar));
        }
        Ok(out)
    }
}

/// Embeds an exact rational into the scalar mode.
pub fn rational_scalar<S: Scalar>(q: &BigRational) -> S {
    use num_traits::ToPrimitive;
    if let (Some(n), Some(d)) = (q.numer().to_i64(), q.denom().to_i64()) {
        return S::from_ratio(n, d);
    }
    // Rationals outside i64 range only arise from pathological inputs.
    let v = q.to_f64_lossy();
    let scaled = (v * 1e9).round() as i64;
    S::from_ratio(scaled, 1_000_000_000)
}

trait ToF64Lossy {
    fn to_f64_lossy(&self) -> f64;
}

impl ToF64Lossy for BigRational {
    fn to_f64_lossy(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.to_f64().unwrap_or(f64::NAN)
    }
}
