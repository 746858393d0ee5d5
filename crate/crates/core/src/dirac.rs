//! The algebraic Dirac operator on the tensor product of the dual Fock
//! labels with the wedge module, both cut to modes `1..N` and joint energy
//! ≤ `E_max`:
//!
//! ```text
//! d̸ = i Σ_k √k dρ*(z_k) ⊗ γ(z̄_k)  +  ε′ i Σ_k √k dρ*(z̄_k) ⊗ γ(z_k)
//! ```
//!
//! Both summands conserve the total energy `t = E(m) + E(S)`, so the
//! truncation is exact: every identity below holds on the nose at every
//! cutoff, with no overflow states.
//!
//! The `hermitian_phase` flag selects `ε′ = −1` (default), which makes the
//! operator self-adjoint with `d̸² = 4(N̂ + Ê*) = 4t` per block; the
//! opposite phase `ε′ = +1` gives `d̸² = −4t`. Either way the kernel is the
//! single vacuum line, so the index is `{0: 1}`.
//!
//! Exact kernels are computed per energy block after conjugating by the
//! diagonal rescaling `f(m) = Π_k (√k)^{m_k}`, which clears every radical
//! from the block matrix and reduces the problem to elimination over ℚ(i).

use std::collections::BTreeMap;

use nalgebra::{Complex, DMatrix};
use num_complex::Complex64;

use crate::error::{CoreError, Result};
use crate::fock::{BosonState, FockSpace, Side};
use crate::index::IndexClass;
use crate::linalg::{exact_kernel_dim, float_kernel_dim, SVD_THRESHOLD};
use crate::modes::ModeSpace;
use crate::operator::{Graded, GradedOperator};
use crate::scalar::{GaussianRational, RadicalScalar, Scalar};
use crate::spinor::{SpinorSpace, SpinorState};

/// Basis label `f_m ⊗ z̄_S` of the twisted spinor module.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct TensorState {
    pub boson: BosonState,
    pub spinor: SpinorState,
}

impl TensorState {
    pub fn new(boson: BosonState, spinor: SpinorState) -> Self {
        TensorState { boson, spinor }
    }
}

impl Graded for TensorState {
    fn energy(&self) -> u64 {
        self.boson.energy() + self.spinor.energy()
    }
}

/// The truncated Dirac model over `N` modes with joint energy cutoff.
#[derive(Clone, Copy, Debug)]
pub struct DiracSpace {
    n_modes: u32,
    e_max: u64,
}

impl DiracSpace {
    pub fn new(n_modes: u32, e_max: u64) -> Self {
        DiracSpace { n_modes, e_max }
    }

    pub fn n_modes(&self) -> u32 {
        self.n_modes
    }

    pub fn e_max(&self) -> u64 {
        self.e_max
    }

    fn fock(&self) -> FockSpace {
        FockSpace::new(ModeSpace::new(self.n_modes), self.e_max)
    }

    fn spinors(&self) -> SpinorSpace {
        SpinorSpace::new(self.e_max, Some(self.n_modes))
    }

    /// All tensor labels with `E(m) + E(S) ≤ E_max`, sorted.
    pub fn enumerate(&self) -> Vec<TensorState> {
        let bosons = self.fock().enumerate(Side::Dual);
        let spinors = self.spinors().enumerate();
        let mut out = Vec::new();
        for b in &bosons {
            for s in &spinors {
                if b.energy() + s.energy() <= self.e_max {
                    out.push(TensorState::new(b.clone(), s.clone()));
                }
            }
        }
        out.sort();
        out
    }

    /// Basis labels grouped by total energy.
    pub fn blocks(&self) -> BTreeMap<u64, Vec<TensorState>> {
        let mut blocks: BTreeMap<u64, Vec<TensorState>> = BTreeMap::new();
        for t in self.enumerate() {
            blocks.entry(t.energy()).or_default().push(t);
        }
        blocks
    }

    /// Independent count of the block dimensions: the convolution
    /// `Σ_{a+b=t} p_N(a) q_N(b)` of the parts-≤-N partition counts, plain
    /// for the boson factor and distinct for the wedge factor.
    pub fn block_multiplicities(&self) -> Vec<u64> {
        let len = (self.e_max + 1) as usize;
        let mut p = vec![0u64; len];
        p[0] = 1;
        for k in 1..=self.n_modes as usize {
            for t in k..len {
                let lower = p[t - k];
                p[t] += lower;
            }
        }
        let mut q = vec![0u64; len];
        q[0] = 1;
        for k in 1..=self.n_modes as usize {
            for t in (k..len).rev() {
                let lower = q[t - k];
                q[t] += lower;
            }
        }
        (0..len)
            .map(|t| (0..=t).map(|a| p[a] * q[t - a]).sum())
            .collect()
    }

    /// Assembles d̸ on the truncated tensor basis.
    pub fn dirac<S: Scalar>(&self, hermitian_phase: bool) -> GradedOperator<TensorState, S> {
        let n = self.n_modes;
        let eps = if hermitian_phase { -1 } else { 1 };
        GradedOperator::from_rule(self.e_max, self.enumerate(), move |ts| {
            let mut out = Vec::new();
            for k in 1..=n {
                let sqrt_k = S::sqrt_nat(k as u64);
                // i √k dρ*(z_k) ⊗ γ(z̄_k): lower the boson label, wedge k.
                if ts.boson.occ_at(k) >= 1 && !ts.spinor.contains(k) {
                    let mut occ = ts.boson.occ().to_vec();
                    occ[(k - 1) as usize] -= 1;
                    let mut parts = ts.spinor.parts().to_vec();
                    let pos = parts.partition_point(|&j| j < k);
                    let sign: i64 = if pos % 2 == 0 { 1 } else { -1 };
                    parts.insert(pos, k);
                    let target = TensorState::new(
                        BosonState::new(Side::Dual, occ),
                        SpinorState::new(parts).expect("sorted distinct parts"),
                    );
                    let coeff = S::i().mul(&sqrt_k).mul(&S::from_int(2 * sign));
                    out.push((target, coeff));
                }
                // ε′ i √k dρ*(z̄_k) ⊗ γ(z_k): raise the boson label,
                // contract k; the two −√2 factors cancel to +2(m_k+1).
                if ts.spinor.contains(k) {
                    let m_k = ts.boson.occ_at(k);
                    let mut occ = ts.boson.occ().to_vec();
                    occ[(k - 1) as usize] += 1;
                    let mut parts = ts.spinor.parts().to_vec();
                    let pos = parts.partition_point(|&j| j < k);
                    let sign: i64 = if pos % 2 == 0 { 1 } else { -1 };
                    parts.remove(pos);
                    let target = TensorState::new(
                        BosonState::new(Side::Dual, occ),
                        SpinorState::new(parts).expect("sorted distinct parts"),
                    );
                    let coeff = S::i()
                        .mul(&sqrt_k)
                        .mul(&S::from_int(eps * 2 * (m_k as i64 + 1) * sign));
                    out.push((target, coeff));
                }
            }
            out
        })
    }

    /// Checks `d̸² = ±4t` per block, exactly. The sign is `+` for the
    /// hermitian phase and `−` for the opposite one.
    pub fn verify_square_exact(&self, hermitian_phase: bool) -> Result<()> {
        let d: GradedOperator<TensorState, RadicalScalar> = self.dirac(hermitian_phase);
        if !d.overflow_inputs().is_empty() {
            return Err(CoreError::IdentityFailure {
                entry: "dirac".into(),
                detail: "unexpected cutoff overflow in an energy-conserving operator".into(),
            });
        }
        let sq = d.compose(&d);
        let sign = if hermitian_phase { 4 } else { -4 };
        let expected = GradedOperator::from_rule(self.e_max, self.enumerate(), |ts| {
            let t = ts.energy() as i64;
            if t == 0 {
                vec![]
            } else {
                vec![(ts.clone(), RadicalScalar::from_int(sign * t))]
            }
        });
        if sq.same_transitions(&expected) {
            Ok(())
        } else {
            Err(CoreError::IdentityFailure {
                entry: "dirac square".into(),
                detail: format!(
                    "d̸² deviates from {sign}·t·id (N = {}, E_max = {})",
                    self.n_modes, self.e_max
                ),
            })
        }
    }

    /// Float-mode counterpart: largest entrywise deviation of `d̸² ∓ 4t`.
    pub fn square_deviation_float(&self, hermitian_phase: bool) -> f64 {
        let d: GradedOperator<TensorState, Complex64> = self.dirac(hermitian_phase);
        let sq = d.compose(&d);
        let sign = if hermitian_phase { 4.0 } else { -4.0 };
        let expected = GradedOperator::from_rule(self.e_max, self.enumerate(), |ts| {
            let t = ts.energy() as f64;
            if t == 0.0 {
                vec![]
            } else {
                vec![(ts.clone(), Complex64::new(sign * t, 0.0))]
            }
        });
        sq.max_deviation(&expected)
    }

    /// The diagonal rescaling `f(m) = Π_k (√k)^{m_k}` that rationalizes
    /// every block matrix of d̸.
    fn rescale(ts: &TensorState) -> RadicalScalar {
        let mut f = RadicalScalar::from_int(1);
        for (i, &n) in ts.boson.occ().iter().enumerate() {
            let k = i as u64 + 1;
            for _ in 0..n {
                f = f.mul(&RadicalScalar::sqrt_nat(k));
            }
        }
        f
    }

    /// Block matrix of d̸ after the rationalizing conjugation, as exact
    /// Gaussian rationals. Rows and columns both run over `block`.
    fn rational_block(
        d: &GradedOperator<TensorState, RadicalScalar>,
        block: &[TensorState],
    ) -> Result<Vec<Vec<GaussianRational>>> {
        let index: BTreeMap<&TensorState, usize> =
            block.iter().enumerate().map(|(i, t)| (t, i)).collect();
        let mut m = vec![vec![GaussianRational::from_int(0); block.len()]; block.len()];
        for (c, input) in block.iter().enumerate() {
            let f_in = Self::rescale(input);
            for (r, output) in block.iter().enumerate() {
                let raw = d.entry(input, output);
                if raw.is_zero() {
                    continue;
                }
                let f_out = Self::rescale(output);
                let ratio = f_out.mul(
                    &f_in.single_term_inv().expect("rescaling is a single radical term"),
                );
                let entry = raw.mul(&ratio);
                m[r][c] = entry.as_gaussian().ok_or_else(|| CoreError::IdentityFailure {
                    entry: format!("block entry {output:?} ← {input:?}"),
                    detail: "rationalization left a radical".into(),
                })?;
            }
        }
        debug_assert_eq!(index.len(), block.len());
        Ok(m)
    }

    /// Exact kernel of d̸, reported as `{block energy: kernel dimension}`.
    pub fn kernel_index_exact(&self, hermitian_phase: bool) -> Result<IndexClass> {
        let d: GradedOperator<TensorState, RadicalScalar> = self.dirac(hermitian_phase);
        let mut out = IndexClass::new();
        for (t, block) in self.blocks() {
            let m = Self::rational_block(&d, &block)?;
            let dim = exact_kernel_dim(&m);
            out.add(t as i64, dim as i64);
        }
        Ok(out)
    }

    /// Float kernel of d̸ through per-block SVD.
    pub fn kernel_index_float(&self, hermitian_phase: bool) -> Result<IndexClass> {
        let d: GradedOperator<TensorState, Complex64> = self.dirac(hermitian_phase);
        let mut out = IndexClass::new();
        for (t, block) in self.blocks() {
            let n = block.len();
            let mut m = DMatrix::from_element(n, n, Complex::new(0.0, 0.0));
            for (c, input) in block.iter().enumerate() {
                for (r, output) in block.iter().enumerate() {
                    m[(r, c)] = d.entry(input, output);
                }
            }
            let dim = float_kernel_dim(&m, SVD_THRESHOLD)?;
            out.add(t as i64, dim as i64);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::StateVector;

    #[test]
    fn block_dimensions_match_partition_convolution() {
        for (n, e_max) in [(1u32, 6u64), (2, 6), (3, 8)] {
            let d = DiracSpace::new(n, e_max);
            let blocks = d.blocks();
            let expect = d.block_multiplicities();
            for t in 0..=e_max {
                let dim = blocks.get(&t).map_or(0, Vec::len) as u64;
                assert_eq!(dim, expect[t as usize], "N={n} E_max={e_max} t={t}");
            }
        }
    }

    #[test]
    fn dirac_conserves_energy_and_never_overflows() {
        let sp = DiracSpace::new(3, 6);
        let d: GradedOperator<TensorState, RadicalScalar> = sp.dirac(true);
        assert!(d.overflow_inputs().is_empty());
        let shifts = d.energy_shifts();
        assert!(shifts.iter().all(|&s| s == 0), "shifts = {shifts:?}");
    }

    #[test]
    fn t1_block_matrix_entries() {
        // Basis of the t = 1 block: (m = e_1, ∅) and (m = 0, {1}).
        let sp = DiracSpace::new(2, 4);
        let d: GradedOperator<TensorState, RadicalScalar> = sp.dirac(true);
        let a = TensorState::new(
            BosonState::new(Side::Dual, vec![1, 0]),
            SpinorState::vacuum(),
        );
        let b = TensorState::new(
            BosonState::new(Side::Dual, vec![0, 0]),
            SpinorState::new(vec![1]).unwrap(),
        );
        let two_i = RadicalScalar::i().mul(&RadicalScalar::from_int(2));
        assert_eq!(d.entry(&a, &b), two_i);
        assert_eq!(d.entry(&b, &a), two_i.neg());
        assert!(d.entry(&a, &a).is_zero());
        // With the opposite phase the lower-left entry flips sign.
        let dp: GradedOperator<TensorState, RadicalScalar> = sp.dirac(false);
        assert_eq!(dp.entry(&b, &a), two_i);
    }

    #[test]
    fn square_identity_both_phases() {
        for n in 1..=2u32 {
            for e_max in [2u64, 4] {
                let sp = DiracSpace::new(n, e_max);
                sp.verify_square_exact(true).unwrap();
                sp.verify_square_exact(false).unwrap();
                assert!(sp.square_deviation_float(true) < 1e-12);
            }
        }
    }

    #[test]
    fn self_adjoint_in_hermitian_phase() {
        // ⟨d̸ x, y⟩ = ⟨x, d̸ y⟩ with the dual ⊗ orthonormal weights
        // 1/Π m_k! on the boson factor.
        let sp = DiracSpace::new(2, 5);
        let d: GradedOperator<TensorState, RadicalScalar> = sp.dirac(true);
        let adj = d.adjoint(|input, output| {
            let ratio = input.boson.factorial_weight() / output.boson.factorial_weight();
            crate::modes::rational_scalar(&ratio)
        });
        assert!(adj.same_transitions(&d));
    }

    #[test]
    fn kernel_is_the_vacuum_line() {
        for hermitian in [true, false] {
            let sp = DiracSpace::new(2, 6);
            let exact = sp.kernel_index_exact(hermitian).unwrap();
            let expect: IndexClass = [(0, 1)].into_iter().collect();
            assert_eq!(exact, expect, "hermitian = {hermitian}");
            let float = sp.kernel_index_float(hermitian).unwrap();
            assert_eq!(float, expect);
        }
    }

    #[test]
    fn vacuum_is_annihilated() {
        let sp = DiracSpace::new(3, 6);
        let d: GradedOperator<TensorState, RadicalScalar> = sp.dirac(true);
        let vac = TensorState::new(
            BosonState::vacuum(Side::Dual, 3),
            SpinorState::vacuum(),
        );
        let out = d.apply(&StateVector::basis(vac)).unwrap();
        assert!(out.is_zero());
    }
}
