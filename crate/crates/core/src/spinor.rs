//! Fermionic side of the model: the exterior algebra on the generators
//! `z̄_1, z̄_2, ..` with basis labels the finite subsets `S` of mode indices,
//! graded by energy `E(S) = Σ_{k∈S} k`. The Clifford action is
//!
//! ```text
//! γ(z̄_k) :  √2 · (z̄_k ∧ ·)      sign (−1)^{#{j∈S : j<k}}
//! γ(z_k) : −√2 · (z̄_k ⌟ ·)      same position sign
//! ```
//!
//! so the only nonzero anticommutator is `[γ(z_k), γ(z̄_l)]₊ = −2 δ_kl`.
//! The basis is orthonormal; the degree operator is diagonal with eigenvalue
//! `E(S)`, and the dimension of the energy-`n` piece with unbounded parts is
//! the distinct-partition count `q(n)`.

use crate::error::{CoreError, Result};
use crate::operator::{Graded, GradedOperator, StateVector};
use crate::scalar::Scalar;

/// A wedge monomial `z̄_{k_1} ∧ .. ∧ z̄_{k_r}` with `k_1 < .. < k_r`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Default)]
pub struct SpinorState {
    parts: Vec<u32>,
}

impl SpinorState {
    /// Builds from any index list; sorts and rejects duplicates.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        parts.sort_unstable();
        if parts.windows(2).any(|w| w[0] == w[1]) || parts.first() == Some(&0) {
            return Err(CoreError::Config(format!("invalid wedge label {parts:?}")));
        }
        Ok(SpinorState { parts })
    }

    pub fn vacuum() -> Self {
        SpinorState::default()
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn degree(&self) -> usize {
        self.parts.len()
    }

    pub fn contains(&self, k: u32) -> bool {
        self.parts.binary_search(&k).is_ok()
    }

    /// Position sign `(−1)^{#{j∈S : j<k}}` together with the slot for `k`.
    fn slot(&self, k: u32) -> (usize, i64) {
        let pos = self.parts.partition_point(|&j| j < k);
        let sign = if pos % 2 == 0 { 1 } else { -1 };
        (pos, sign)
    }

    fn wedged(&self, k: u32) -> Option<(Self, i64)> {
        if self.contains(k) {
            return None;
        }
        let (pos, sign) = self.slot(k);
        let mut parts = self.parts.clone();
        parts.insert(pos, k);
        Some((SpinorState { parts }, sign))
    }

    fn contracted(&self, k: u32) -> Option<(Self, i64)> {
        if !self.contains(k) {
            return None;
        }
        let (pos, sign) = self.slot(k);
        let mut parts = self.parts.clone();
        parts.remove(pos);
        Some((SpinorState { parts }, sign))
    }
}

impl Graded for SpinorState {
    fn energy(&self) -> u64 {
        self.parts.iter().map(|&k| k as u64).sum()
    }
}

/// The truncated spinor module: wedge labels with energy ≤ `E_max` and,
/// optionally, all parts ≤ `max_part`.
#[derive(Clone, Copy, Debug)]
pub struct SpinorSpace {
    e_max: u64,
    max_part: Option<u32>,
}

impl SpinorSpace {
    pub fn new(e_max: u64, max_part: Option<u32>) -> Self {
        SpinorSpace { e_max, max_part }
    }

    pub fn e_max(&self) -> u64 {
        self.e_max
    }

    pub fn max_part(&self) -> Option<u32> {
        self.max_part
    }

    fn part_limit(&self) -> u32 {
        let cap = self.e_max.min(u32::MAX as u64) as u32;
        match self.max_part {
            Some(m) => m.min(cap),
            None => cap,
        }
    }

    /// All wedge labels in the truncation, sorted.
    pub fn enumerate(&self) -> Vec<SpinorState> {
        let limit = self.part_limit();
        let mut out = Vec::new();
        let mut current: Vec<u32> = Vec::new();
        fn recurse(
            next: u32,
            limit: u32,
            budget: u64,
            current: &mut Vec<u32>,
            out: &mut Vec<SpinorState>,
        ) {
            out.push(SpinorState { parts: current.clone() });
            for k in next..=limit {
                if (k as u64) > budget {
                    break;
                }
                current.push(k);
                recurse(k + 1, limit, budget - k as u64, current, out);
                current.pop();
            }
        }
        recurse(1, limit, self.e_max, &mut current, &mut out);
        out.sort();
        out
    }

    pub fn dim(&self) -> usize {
        self.enumerate().len()
    }

    fn check_part(&self, k: u32) -> Result<()> {
        if k == 0 || k > self.part_limit() {
            return Err(CoreError::ModeOutOfRange { index: k, n_modes: self.part_limit() });
        }
        Ok(())
    }

    /// `γ(z̄_k)`: signed wedge scaled by `√2`.
    pub fn gamma_z_bar<S: Scalar>(&self, k: u32) -> Result<GradedOperator<SpinorState, S>> {
        self.check_part(k)?;
        let sqrt2 = S::sqrt_nat(2);
        Ok(GradedOperator::from_rule(self.e_max, self.enumerate(), |b| {
            match b.wedged(k) {
                Some((up, sign)) => vec![(up, sqrt2.mul(&S::from_int(sign)))],
                None => vec![],
            }
        }))
    }

    /// `γ(z_k)`: signed contraction scaled by `−√2`.
    pub fn gamma_z<S: Scalar>(&self, k: u32) -> Result<GradedOperator<SpinorState, S>> {
        self.check_part(k)?;
        let neg_sqrt2 = S::sqrt_nat(2).neg();
        Ok(GradedOperator::from_rule(self.e_max, self.enumerate(), |b| {
            match b.contracted(k) {
                Some((down, sign)) => vec![(down, neg_sqrt2.mul(&S::from_int(sign)))],
                None => vec![],
            }
        }))
    }

    /// Diagonal degree operator with eigenvalue `E(S)`.
    pub fn number_operator<S: Scalar>(&self) -> GradedOperator<SpinorState, S> {
        GradedOperator::from_rule(self.e_max, self.enumerate(), |b| {
            let e = b.energy() as i64;
            if e == 0 {
                vec![]
            } else {
                vec![(b.clone(), S::from_int(e))]
            }
        })
    }

    /// Orthonormal inner product on wedge labels.
    pub fn inner_product<S: Scalar>(
        &self,
        left: &StateVector<SpinorState, S>,
        right: &StateVector<SpinorState, S>,
    ) -> S {
        let mut acc = S::zero();
        for (b, c) in left.iter() {
            let d = right.get(b);
            if !d.is_zero() {
                acc = acc.add(&c.conj().mul(&d));
            }
        }
        acc
    }
}

/// Distinct-partition counts `q(0..=n_max)` by direct subset enumeration;
/// oracle for the graded dimensions of the spinor module.
pub fn distinct_partitions_brute(n_max: u64) -> Vec<u64> {
    let mut counts = vec![0u64; (n_max + 1) as usize];
    fn recurse(next: u64, remaining_budget: u64, total: u64, counts: &mut [u64]) {
        counts[total as usize] += 1;
        for k in next..=remaining_budget {
            recurse(k + 1, remaining_budget - k, total + k, counts);
        }
    }
    recurse(1, n_max, 0, &mut counts);
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::RadicalScalar;

    type Op = GradedOperator<SpinorState, RadicalScalar>;

    fn rs(n: i64) -> RadicalScalar {
        RadicalScalar::from_int(n)
    }

    fn space() -> SpinorSpace {
        SpinorSpace::new(8, None)
    }

    #[test]
    fn wedge_signs() {
        // γ(z̄_2) on z̄_1∧z̄_3 inserts in slot 1: sign −1.
        let s = SpinorState::new(vec![1, 3]).unwrap();
        let sp = space();
        let g2: Op = sp.gamma_z_bar(2).unwrap();
        let out = g2.apply(&StateVector::basis(s)).unwrap();
        let target = SpinorState::new(vec![1, 2, 3]).unwrap();
        assert_eq!(out.get(&target), RadicalScalar::sqrt_nat(2).neg());
        // On the vacuum the sign is +1.
        let g1: Op = sp.gamma_z_bar(1).unwrap();
        let out = g1.apply(&StateVector::basis(SpinorState::vacuum())).unwrap();
        let t1 = SpinorState::new(vec![1]).unwrap();
        assert_eq!(out.get(&t1), RadicalScalar::sqrt_nat(2));
    }

    #[test]
    fn contraction_signs() {
        // γ(z_3) on z̄_1∧z̄_3 removes slot 1: coefficient −√2·(−1) = √2.
        let s = SpinorState::new(vec![1, 3]).unwrap();
        let sp = space();
        let c3: Op = sp.gamma_z(3).unwrap();
        let out = c3.apply(&StateVector::basis(s)).unwrap();
        let target = SpinorState::new(vec![1]).unwrap();
        assert_eq!(out.get(&target), RadicalScalar::sqrt_nat(2));
        // Absent index annihilates.
        let c2: Op = sp.gamma_z(2).unwrap();
        let s = SpinorState::new(vec![1, 3]).unwrap();
        assert!(c2.apply(&StateVector::basis(s)).unwrap().is_zero());
    }

    #[test]
    fn car_relations() {
        let sp = SpinorSpace::new(6, None);
        let safe: Vec<SpinorState> = sp
            .enumerate()
            .into_iter()
            .filter(|b| b.energy() + 3 <= sp.e_max())
            .collect();
        for k in 1..=3u32 {
            for l in 1..=3u32 {
                let a: Op = sp.gamma_z(k).unwrap();
                let b: Op = sp.gamma_z_bar(l).unwrap();
                let anti = a.anticommutator(&b);
                for s in &safe {
                    let out = anti.apply(&StateVector::basis(s.clone())).unwrap();
                    let expect = if k == l { rs(-2) } else { rs(0) };
                    assert_eq!(out.get(s), expect, "k={k} l={l} at {s:?}");
                    assert!(out.support_len() <= 1);
                }
                // Like-kind generators anticommute to zero.
                let bb: Op = sp.gamma_z_bar(k).unwrap();
                let anti0 = bb.anticommutator(&b);
                for s in &safe {
                    let out = anti0.apply(&StateVector::basis(s.clone())).unwrap();
                    assert!(out.is_zero(), "z̄ pair k={k} l={l} at {s:?}");
                }
                let aa: Op = sp.gamma_z(l).unwrap();
                let anti0 = a.anticommutator(&aa);
                for s in &safe {
                    let out = anti0.apply(&StateVector::basis(s.clone())).unwrap();
                    assert!(out.is_zero(), "z pair k={k} l={l} at {s:?}");
                }
            }
        }
    }

    #[test]
    fn creation_adjoint_on_orthonormal_basis() {
        // γ(z̄_k)† = −γ(z_k) under the orthonormal inner product.
        let sp = space();
        for k in 1..=4u32 {
            let up: Op = sp.gamma_z_bar(k).unwrap();
            let adj = up.adjoint(|_, _| rs(1));
            let down: Op = sp.gamma_z(k).unwrap();
            assert!(adj.same_transitions(&down.scale(&rs(-1))), "k = {k}");
        }
    }

    #[test]
    fn graded_dimensions_are_distinct_partition_counts() {
        let e_max = 12;
        let sp = SpinorSpace::new(e_max, None);
        let mut by_energy = vec![0u64; (e_max + 1) as usize];
        for s in sp.enumerate() {
            by_energy[s.energy() as usize] += 1;
        }
        let oracle = distinct_partitions_brute(e_max);
        assert_eq!(by_energy, oracle);
        // Spot values of q.
        assert_eq!(&oracle[..7], &[1, 1, 1, 2, 2, 3, 4]);
    }

    #[test]
    fn part_bound_restricts_enumeration() {
        let sp = SpinorSpace::new(6, Some(3));
        // Subsets of {1,2,3} with sum ≤ 6: all 8 subsets.
        assert_eq!(sp.dim(), 8);
        assert!(sp.gamma_z_bar::<RadicalScalar>(4).is_err());
    }

    #[test]
    fn number_operator_is_energy_diagonal() {
        let sp = space();
        let n: Op = sp.number_operator();
        for s in sp.enumerate() {
            let out = n.apply(&StateVector::basis(s.clone())).unwrap();
            assert_eq!(out.get(&s), rs(s.energy() as i64));
        }
    }

    #[test]
    fn rejects_duplicate_labels() {
        assert!(SpinorState::new(vec![2, 2]).is_err());
        assert!(SpinorState::new(vec![0]).is_err());
    }
}
