//! Energy-cut bosonic Fock model: monomial states `z^n = z_1^{n_1}..z_N^{n_N}`
//! with energy `E(n) = Σ k n_k`, the factorial inner product
//! `(z^n, z^m) = δ_{nm} Π n_k!`, the ladder representation
//!
//! ```text
//! dρ(z_k) : n ↦ n + e_k   with coefficient −√2
//! dρ(z̄_k) : n ↦ n − e_k   with coefficient  √2 n_k
//! ```
//!
//! and the dual-side action on the pairing basis `f_m` (bilinear pairing
//! `⟨f_m, z^n⟩ = δ_{mn}`, so `dρ*(X) = −dρ(X)ᵀ`):
//!
//! ```text
//! dρ*(z_k) : m ↦ m − e_k   with coefficient  √2
//! dρ*(z̄_k) : m ↦ m + e_k   with coefficient −√2 (m_k + 1)
//! ```
//!
//! The energy operator is diagonal with eigenvalue `i E(n)` and satisfies
//! `dρ(d) = −(i/2) Σ_k k · dρ(z_k) dρ(z̄_k)` exactly at every cutoff,
//! because the composition never leaves the truncation.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{CoreError, Result};
use crate::modes::{rational_scalar, ModeSpace, RealModeVector};
use crate::operator::{Graded, GradedOperator, StateVector};
use crate::scalar::Scalar;

/// Which copy of the state space a label lives in: the representation space
/// itself or its restricted (graded) dual.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Side {
    Primary,
    Dual,
}

/// Occupation-number label `(n_1, .., n_N)` tagged with its side.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct BosonState {
    pub side: Side,
    occ: Vec<u32>,
}

impl BosonState {
    pub fn new(side: Side, occ: Vec<u32>) -> Self {
        BosonState { side, occ }
    }

    pub fn vacuum(side: Side, n_modes: u32) -> Self {
        BosonState { side, occ: vec![0; n_modes as usize] }
    }

    pub fn occ(&self) -> &[u32] {
        &self.occ
    }

    pub fn occ_at(&self, mode: u32) -> u32 {
        self.occ[(mode - 1) as usize]
    }

    fn shifted(&self, mode: u32, delta: i32) -> Option<Self> {
        let idx = (mode - 1) as usize;
        let n = self.occ[idx] as i32 + delta;
        if n < 0 {
            return None;
        }
        let mut occ = self.occ.clone();
        occ[idx] = n as u32;
        Some(BosonState { side: self.side, occ })
    }

    /// `Π n_k!` as an exact rational.
    pub fn factorial_weight(&self) -> BigRational {
        let mut acc = BigInt::from(1);
        for &n in &self.occ {
            for j in 2..=n as u64 {
                acc *= BigInt::from(j);
            }
        }
        BigRational::from_integer(acc)
    }
}

impl Graded for BosonState {
    fn energy(&self) -> u64 {
        self.occ
            .iter()
            .enumerate()
            .map(|(i, &n)| (i as u64 + 1) * n as u64)
            .sum()
    }
}

/// The truncated Fock model over `N` modes with energy cutoff `E_max`.
#[derive(Clone, Copy, Debug)]
pub struct FockSpace {
    modes: ModeSpace,
    e_max: u64,
}

impl FockSpace {
    pub fn new(modes: ModeSpace, e_max: u64) -> Self {
        FockSpace { modes, e_max }
    }

    pub fn modes(&self) -> ModeSpace {
        self.modes
    }

    pub fn e_max(&self) -> u64 {
        self.e_max
    }

    pub fn n_modes(&self) -> u32 {
        self.modes.n_modes()
    }

    /// All occupation labels with `E(n) ≤ E_max`, in lexicographic order.
    pub fn enumerate(&self, side: Side) -> Vec<BosonState> {
        let n = self.n_modes() as usize;
        let mut out = Vec::new();
        let mut occ = vec![0u32; n];
        loop {
            out.push(BosonState::new(side, occ.clone()));
            // Odometer increment constrained by the energy budget.
            let mut idx = 0;
            loop {
                if idx == n {
                    out.sort();
                    return out;
                }
                occ[idx] += 1;
                let energy: u64 = occ
                    .iter()
                    .enumerate()
                    .map(|(i, &c)| (i as u64 + 1) * c as u64)
                    .sum();
                if energy <= self.e_max {
                    break;
                }
                occ[idx] = 0;
                idx += 1;
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.enumerate(Side::Primary).len()
    }

    pub fn vacuum_state<S: Scalar>(&self, side: Side) -> StateVector<BosonState, S> {
        StateVector::basis(BosonState::vacuum(side, self.n_modes()))
    }

    fn check_mode(&self, mode: u32) -> Result<()> {
        if mode == 0 || mode > self.n_modes() {
            return Err(CoreError::ModeOutOfRange { index: mode, n_modes: self.n_modes() });
        }
        Ok(())
    }

    fn check_side(a: &BosonState, expected: Side) -> Result<()> {
        if a.side != expected {
            return Err(CoreError::SideMismatch {
                left: format!("{:?}", a.side),
                right: format!("{expected:?}"),
            });
        }
        Ok(())
    }

    /// Sesquilinear inner product; both arguments must live on one side.
    /// Primary weight `Π n_k!`, dual weight `1 / Π m_k!`.
    pub fn inner_product<S: Scalar>(
        &self,
        left: &StateVector<BosonState, S>,
        right: &StateVector<BosonState, S>,
    ) -> Result<S> {
        let side = left.iter().chain(right.iter()).map(|(b, _)| b.side).next();
        if let Some(side) = side {
            for (b, _) in left.iter().chain(right.iter()) {
                Self::check_side(b, side)?;
            }
        }
        let mut acc = S::zero();
        for (b, c) in left.iter() {
            let d = right.get(b);
            if d.is_zero() {
                continue;
            }
            let w = b.factorial_weight();
            let weight: S = match b.side {
                Side::Primary => rational_scalar(&w),
                Side::Dual => rational_scalar(&w.recip()),
            };
            acc = acc.add(&c.conj().mul(&d).mul(&weight));
        }
        Ok(acc)
    }

    /// Bilinear duality pairing `⟨f, v⟩` with `f` dual and `v` primary;
    /// `⟨f_m, z^n⟩ = δ_{mn}` (no conjugation, no weight).
    pub fn pairing<S: Scalar>(
        &self,
        dual: &StateVector<BosonState, S>,
        primary: &StateVector<BosonState, S>,
    ) -> Result<S> {
        let mut acc = S::zero();
        for (b, c) in dual.iter() {
            Self::check_side(b, Side::Dual)?;
            let mirror = BosonState::new(Side::Primary, b.occ.clone());
            acc = acc.add(&c.mul(&primary.get(&mirror)));
        }
        for (b, _) in primary.iter() {
            Self::check_side(b, Side::Primary)?;
        }
        Ok(acc)
    }

    /// `dρ(z_k)`: creation with coefficient `−√2`.
    pub fn represent_z<S: Scalar>(&self, mode: u32) -> Result<GradedOperator<BosonState, S>> {
        self.check_mode(mode)?;
        let coeff = S::sqrt_nat(2).neg();
        Ok(GradedOperator::from_rule(self.e_max, self.enumerate(Side::Primary), |b| {
            match b.shifted(mode, 1) {
                Some(up) => vec![(up, coeff.clone())],
                None => vec![],
            }
        }))
    }

    /// `dρ(z̄_k)`: annihilation with coefficient `√2 n_k`.
    pub fn represent_z_bar<S: Scalar>(&self, mode: u32) -> Result<GradedOperator<BosonState, S>> {
        self.check_mode(mode)?;
        let sqrt2 = S::sqrt_nat(2);
        Ok(GradedOperator::from_rule(self.e_max, self.enumerate(Side::Primary), |b| {
            let n = b.occ_at(mode);
            match b.shifted(mode, -1) {
                Some(down) if n > 0 => {
                    vec![(down, sqrt2.mul(&S::from_int(n as i64)))]
                }
                _ => vec![],
            }
        }))
    }

    /// `dρ*(z_k) = −dρ(z_k)ᵀ`: lowers a dual label with coefficient `√2`.
    pub fn dual_z<S: Scalar>(&self, mode: u32) -> Result<GradedOperator<BosonState, S>> {
        self.check_mode(mode)?;
        let sqrt2 = S::sqrt_nat(2);
        Ok(GradedOperator::from_rule(self.e_max, self.enumerate(Side::Dual), |b| {
            match b.shifted(mode, -1) {
                Some(down) => vec![(down, sqrt2.clone())],
                None => vec![],
            }
        }))
    }

    /// `dρ*(z̄_k) = −dρ(z̄_k)ᵀ`: raises a dual label with coefficient
    /// `−√2 (m_k + 1)`.
    pub fn dual_z_bar<S: Scalar>(&self, mode: u32) -> Result<GradedOperator<BosonState, S>> {
        self.check_mode(mode)?;
        let coeff0 = S::sqrt_nat(2).neg();
        Ok(GradedOperator::from_rule(self.e_max, self.enumerate(Side::Dual), |b| {
            let m = b.occ_at(mode);
            match b.shifted(mode, 1) {
                Some(up) => vec![(up, coeff0.mul(&S::from_int(m as i64 + 1)))],
                None => vec![],
            }
        }))
    }

    /// Diagonal energy operator with eigenvalue `i E(n)` on the primary side.
    pub fn energy_operator<S: Scalar>(&self) -> GradedOperator<BosonState, S> {
        GradedOperator::from_rule(self.e_max, self.enumerate(Side::Primary), |b| {
            let e = b.energy() as i64;
            if e == 0 {
                vec![]
            } else {
                vec![(b.clone(), S::i().mul(&S::from_int(e)))]
            }
        })
    }

    /// Diagonal dual energy operator with real eigenvalue `E(m)`.
    pub fn dual_energy_operator<S: Scalar>(&self) -> GradedOperator<BosonState, S> {
        GradedOperator::from_rule(self.e_max, self.enumerate(Side::Dual), |b| {
            let e = b.energy() as i64;
            if e == 0 {
                vec![]
            } else {
                vec![(b.clone(), S::from_int(e))]
            }
        })
    }

    /// `dρ(x)` for a real mode vector, via its complex decomposition.
    pub fn real_field<S: Scalar>(
        &self,
        x: &RealModeVector,
    ) -> Result<GradedOperator<BosonState, S>> {
        let mut op = GradedOperator::new(self.e_max);
        for (k, zc, zbc) in self.modes.complex_decomposition::<S>(x)? {
            op = op.add(&self.represent_z::<S>(k)?.scale(&zc));
            op = op.add(&self.represent_z_bar::<S>(k)?.scale(&zbc));
        }
        Ok(op)
    }
}
