//! Partition-growth probes for the heat-trace side of the model.
//!
//! The graded dimension of the wedge module at energy `n` is the
//! distinct-partition count `q(n)`; the plain partition count `p(n)` enters
//! through the staircase injection
//!
//! ```text
//! (λ_1 ≥ .. ≥ λ_l ≥ 0)  ↦  (λ_1 + l−1 > λ_2 + l−2 > .. > λ_l)
//! ```
//!
//! from partitions of `l` into distinct partitions of `l(l+1)/2`, which
//! pins the chain `p(l) ≤ q(l(l+1)/2) ≤ q(l²)`. Because `q` grows faster
//! than any polynomial, every trace `Σ q(n)/(1+4n)^s` diverges; witnesses
//! are certified by exact integer comparison of `q(n)²` against
//! `B²(1+n)^{2s}`, so half-integer exponents need no radicals.
//!
//! `p` uses the pentagonal-number recurrence; `q` comes from
//! `Π(1+x^k) = P(x)·E(x²)` with `E` the sparse pentagonal series, so both
//! tables cost `O(n√n)` big-integer additions.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{CoreError, Result};
use crate::operator::Graded;
use crate::spinor::SpinorSpace;

/// Tables of `p(0..=n_max)` and `q(0..=n_max)`.
#[derive(Clone, Debug)]
pub struct PartitionTable {
    p: Vec<BigInt>,
    q: Vec<BigInt>,
}

/// Generalized pentagonal numbers `k(3k−1)/2` for `k = 1, −1, 2, −2, ..`
/// paired with the parity of `k`, while they stay ≤ `limit`.
fn pentagonals(limit: u64) -> Vec<(u64, bool)> {
    let mut out = Vec::new();
    let mut k = 1i64;
    loop {
        let mut pushed = false;
        for g in [k * (3 * k - 1) / 2, k * (3 * k + 1) / 2] {
            let g = g as u64;
            if g <= limit {
                out.push((g, k % 2 == 0));
                pushed = true;
            }
        }
        if !pushed {
            return out;
        }
        k += 1;
    }
}

impl PartitionTable {
    pub fn new(n_max: usize) -> Self {
        let pents = pentagonals(n_max as u64);
        let mut p: Vec<BigInt> = Vec::with_capacity(n_max + 1);
        p.push(BigInt::one());
        for n in 1..=n_max {
            let mut acc = BigInt::zero();
            for &(g, even_k) in &pents {
                let g = g as usize;
                if g > n {
                    break;
                }
                if even_k {
                    acc -= &p[n - g];
                } else {
                    acc += &p[n - g];
                }
            }
            p.push(acc);
        }
        // q(n) = Σ_k (−1)^k p(n − 2·g_k) over generalized pentagonal g_k.
        let mut q: Vec<BigInt> = Vec::with_capacity(n_max + 1);
        for n in 0..=n_max {
            let mut acc = p[n].clone();
            for &(g, even_k) in &pents {
                let g2 = 2 * g as usize;
                if g2 > n {
                    continue;
                }
                if even_k {
                    acc += &p[n - g2];
                } else {
                    acc -= &p[n - g2];
                }
            }
            debug_assert!(!acc.is_negative());
            q.push(acc);
        }
        PartitionTable { p, q }
    }

    pub fn n_max(&self) -> usize {
        self.p.len() - 1
    }

    pub fn p(&self, n: usize) -> BigUint {
        self.p[n].magnitude().clone()
    }

    pub fn q(&self, n: usize) -> BigUint {
        self.q[n].magnitude().clone()
    }
}

/// Applies the staircase map to a partition of `l` given as a descending
/// list; returns the strictly descending image (zero tail dropped).
pub fn staircase(l: u32, lambda: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(l as usize);
    for i in 0..l {
        let part = lambda.get(i as usize).copied().unwrap_or(0);
        let image = part + (l - 1 - i);
        if image > 0 {
            out.push(image);
        }
    }
    out
}

/// All partitions of `l` as descending part lists.
pub fn enumerate_partitions(l: u32) -> Vec<Vec<u32>> {
    fn recurse(remaining: u32, max_part: u32, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if remaining == 0 {
            out.push(current.clone());
            return;
        }
        for part in (1..=max_part.min(remaining)).rev() {
            current.push(part);
            recurse(remaining - part, part, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    if l == 0 {
        out.push(Vec::new());
        return out;
    }
    recurse(l, l, &mut Vec::new(), &mut out);
    out
}

/// Checks that the staircase map on partitions of `l` lands in distinct
/// partitions of `l(l+1)/2` and is injective.
pub fn verify_staircase_injection(l: u32) -> Result<()> {
    let source = enumerate_partitions(l);
    let target_total = u64::from(l) * u64::from(l + 1) / 2;
    let mut images: Vec<Vec<u32>> = Vec::with_capacity(source.len());
    for lambda in &source {
        let image = staircase(l, lambda);
        let total: u64 = image.iter().map(|&x| u64::from(x)).sum();
        let strictly_descending = image.windows(2).all(|w| w[0] > w[1]);
        if total != target_total || !strictly_descending {
            return Err(CoreError::IdentityFailure {
                entry: format!("staircase({lambda:?})"),
                detail: format!("image {image:?} is not a distinct partition of {target_total}"),
            });
        }
        images.push(image);
    }
    let count = images.len();
    images.sort();
    images.dedup();
    if images.len() != count {
        return Err(CoreError::IdentityFailure {
            entry: format!("staircase at l = {l}"),
            detail: "collision between images".into(),
        });
    }
    Ok(())
}

/// Which diagonal eigenvalue labels the energy-`n` stratum in the trace.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Normalization {
    /// `1 + 4n`: the eigenvalues of `1 + d̸²` in the hermitian phase.
    OnePlusFourN,
    /// `1 + n`: the bare energy labels.
    OnePlusN,
}

impl Normalization {
    pub fn eigenvalue(&self, n: u64) -> u64 {
        match self {
            Normalization::OnePlusFourN => 1 + 4 * n,
            Normalization::OnePlusN => 1 + n,
        }
    }
}

/// Smallest `n ≤ n_max` with `q(n) > bound·(1+n)^s` where `s = two_s/2`,
/// certified by the exact comparison `q(n)² > bound²·(1+n)^{two_s}`.
/// The witness shows the trace terms `q(n)/(1+n)^s` pass any bound, hence
/// the spectral dimension is infinite for every `s`.
pub fn divergence_witness(
    table: &PartitionTable,
    two_s: u32,
    bound: u64,
    n_max: usize,
) -> Option<usize> {
    let bound_sq = BigUint::from(bound) * BigUint::from(bound);
    for n in 0..=n_max.min(table.n_max()) {
        let q = table.q(n);
        let rhs = &bound_sq * BigUint::from(n as u64 + 1).pow(two_s);
        if &q * &q > rhs {
            return Some(n);
        }
    }
    None
}

/// Exact partial sum `Σ_{n≤n_max} q(n) / eigenvalue(n)^s` at integer `s`.
pub fn trace_partial_sum(
    table: &PartitionTable,
    s: u32,
    norm: Normalization,
    n_max: usize,
) -> BigRational {
    let mut acc = BigRational::zero();
    for n in 0..=n_max.min(table.n_max()) {
        let denom = BigInt::from(norm.eigenvalue(n as u64)).pow(s);
        acc += BigRational::new(BigInt::from(table.q(n)), denom);
    }
    acc
}

/// Crosschecks the trace against a direct sum over the enumerated wedge
/// module with unbounded parts and energy cutoff `e_max`.
pub fn projected_trace_crosscheck(
    e_max: u64,
    s: u32,
    norm: Normalization,
) -> Result<BigRational> {
    let table = PartitionTable::new(e_max as usize);
    let from_table = trace_partial_sum(&table, s, norm, e_max as usize);
    let mut from_states = BigRational::zero();
    for state in SpinorSpace::new(e_max, None).enumerate() {
        let denom = BigInt::from(norm.eigenvalue(state.energy())).pow(s);
        from_states += BigRational::new(BigInt::one(), denom);
    }
    if from_table != from_states {
        return Err(CoreError::IdentityFailure {
            entry: format!("projected trace at E_max = {e_max}, s = {s}"),
            detail: format!("table sum {from_table} vs state sum {from_states}"),
        });
    }
    Ok(from_table)
}
