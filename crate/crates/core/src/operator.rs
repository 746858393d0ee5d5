//! Sparse graded operators over an energy-cut basis.
//!
//! Every basis label carries an integer energy grade. Operators are built
//! from transition rules on an enumerated domain with a cutoff `E_max`;
//! transitions whose target would leave the cutoff are dropped and the
//! offending inputs remembered. Applying such an operator in exact scalar
//! mode to a vector supported on a remembered input is an error
//! ([`crate::CoreError::CutoffOverflow`]); in float mode the result is
//! silently projected and the output vector is marked tainted.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{CoreError, Result};
use crate::scalar::Scalar;

/// Basis labels with an integer energy grade.
pub trait Graded: Clone + Ord + std::fmt::Debug {
    fn energy(&self) -> u64;
}

/// Finite linear combination of basis labels.
#[derive(Clone, PartialEq, Debug)]
pub struct StateVector<B: Graded, S: Scalar> {
    coeffs: BTreeMap<B, S>,
    /// Set when a float-mode application silently projected out a cutoff
    /// overflow; propagates through all further arithmetic.
    tainted: bool,
}

impl<B: Graded, S: Scalar> Default for StateVector<B, S> {
    fn default() -> Self {
        StateVector { coeffs: BTreeMap::new(), tainted: false }
    }
}

impl<B: Graded, S: Scalar> StateVector<B, S> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(label: B) -> Self {
        let mut v = Self::zero();
        v.set(label, S::one());
        v
    }

    pub fn set(&mut self, label: B, value: S) {
        if value.is_zero() {
            self.coeffs.remove(&label);
        } else {
            self.coeffs.insert(label, value);
        }
    }

    pub fn get(&self, label: &B) -> S {
        self.coeffs.get(label).cloned().unwrap_or_else(S::zero)
    }

    pub fn accumulate(&mut self, label: B, value: &S) {
        let current = self.get(&label);
        self.set(label, current.add(value));
    }

    pub fn iter(&self) -> impl Iterator<Item = (&B, &S)> {
        self.coeffs.iter()
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_tainted(&self) -> bool {
        self.tainted
    }

    pub fn mark_tainted(&mut self) {
        self.tainted = true;
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.tainted = self.tainted || other.tainted;
        for (b, c) in other.iter() {
            out.accumulate(b.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&S::from_int(-1)))
    }

    pub fn scale(&self, factor: &S) -> Self {
        let mut out = Self::zero();
        out.tainted = self.tainted;
        for (b, c) in self.iter() {
            out.set(b.clone(), c.mul(factor));
        }
        out
    }

    /// Largest coefficient magnitude, for float-mode tolerance checks.
    pub fn max_abs(&self) -> f64 {
        self.coeffs
            .values()
            .map(|c| c.to_complex().norm())
            .fold(0.0, f64::max)
    }
}

/// Sparse linear operator on the span of labels with energy ≤ `e_max`.
#[derive(Clone, Debug)]
pub struct GradedOperator<B: Graded, S: Scalar> {
    e_max: u64,
    transitions: BTreeMap<B, Vec<(B, S)>>,
    overflow: BTreeSet<B>,
}

impl<B: Graded, S: Scalar> GradedOperator<B, S> {
    pub fn new(e_max: u64) -> Self {
        GradedOperator { e_max, transitions: BTreeMap::new(), overflow: BTreeSet::new() }
    }

    pub fn e_max(&self) -> u64 {
        self.e_max
    }

    pub fn overflow_inputs(&self) -> &BTreeSet<B> {
        &self.overflow
    }

    /// Records `input → output` with the given coefficient. Inputs beyond
    /// the cutoff are ignored entirely; outputs beyond it are dropped and
    /// the input remembered as an overflow source.
    pub fn insert_transition(&mut self, input: B, output: B, coeff: S) {
        if input.energy() > self.e_max || coeff.is_zero() {
            return;
        }
        if output.energy() > self.e_max {
            self.overflow.insert(input);
            return;
        }
        let entries = self.transitions.entry(input).or_default();
        if let Some(slot) = entries.iter_mut().find(|(b, _)| *b == output) {
            slot.1 = slot.1.add(&coeff);
            if slot.1.is_zero() {
                entries.retain(|(_, c)| !c.is_zero());
            }
        } else {
            entries.push((output, coeff));
        }
    }

    /// Builds an operator by evaluating a transition rule on a domain.
    pub fn from_rule<I, F>(e_max: u64, domain: I, mut rule: F) -> Self
    where
        I: IntoIterator<Item = B>,
        F: FnMut(&B) -> Vec<(B, S)>,
    {
        let mut op = Self::new(e_max);
        for input in domain {
            for (output, coeff) in rule(&input) {
                op.insert_transition(input.clone(), output, coeff);
            }
        }
        op
    }

    pub fn identity_on<I: IntoIterator<Item = B>>(e_max: u64, domain: I) -> Self {
        Self::from_rule(e_max, domain, |b| vec![(b.clone(), S::one())])
    }

    pub fn apply(&self, state: &StateVector<B, S>) -> Result<StateVector<B, S>> {
        let mut out = StateVector::zero();
        out.tainted = state.tainted;
        for (b, c) in state.iter() {
            if self.overflow.contains(b) {
                if S::EXACT {
                    return Err(CoreError::CutoffOverflow { energy: b.energy(), e_max: self.e_max });
                }
                out.tainted = true;
            }
            if let Some(entries) = self.transitions.get(b) {
                for (target, t) in entries {
                    out.accumulate(target.clone(), &c.mul(t));
                }
            }
        }
        Ok(out)
    }

    /// Matrix entry `⟨output-slot⟩` of the image of `input`, as a raw
    /// transition coefficient (no inner-product weight applied).
    pub fn entry(&self, input: &B, output: &B) -> S {
        self.transitions
            .get(input)
            .and_then(|es| es.iter().find(|(b, _)| b == output))
            .map(|(_, c)| c.clone())
            .unwrap_or_else(S::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.overflow.extend(other.overflow.iter().cloned());
        for (input, entries) in &other.transitions {
            for (output, coeff) in entries {
                out.insert_transition(input.clone(), output.clone(), coeff.clone());
            }
        }
        out
    }

    pub fn scale(&self, factor: &S) -> Self {
        let mut out = Self::new(self.e_max);
        out.overflow = self.overflow.clone();
        for (input, entries) in &self.transitions {
            for (output, coeff) in entries {
                out.insert_transition(input.clone(), output.clone(), coeff.mul(factor));
            }
        }
        out
    }

    /// `self ∘ other`. Overflow inputs of either factor poison the inputs
    /// that reach them.
    pub fn compose(&self, other: &Self) -> Self {
        let e_max = self.e_max.min(other.e_max);
        let mut out = Self::new(e_max);
        out.overflow.extend(other.overflow.iter().cloned());
        for (input, entries) in &other.transitions {
            for (mid, c1) in entries {
                if self.overflow.contains(mid) {
                    out.overflow.insert(input.clone());
                }
                if let Some(next) = self.transitions.get(mid) {
                    for (output, c2) in next {
                        out.insert_transition(input.clone(), output.clone(), c1.mul(c2));
                    }
                }
            }
        }
        out
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.compose(other).add(&other.compose(self).scale(&S::from_int(-1)))
    }

    pub fn anticommutator(&self, other: &Self) -> Self {
        self.compose(other).add(&other.compose(self))
    }

    /// Transpose-conjugate with respect to a diagonal pairing:
    /// `(A†)_{m→n} = conj(A_{n→m}) · weight_ratio(n, m)` where
    /// `weight_ratio(in, out) = w(out)/w(in)` for the diagonal weights `w`
    /// of the pairing.
    pub fn adjoint<F>(&self, mut weight_ratio: F) -> Self
    where
        F: FnMut(&B, &B) -> S,
    {
        let mut out = Self::new(self.e_max);
        for (input, entries) in &self.transitions {
            for (output, coeff) in entries {
                let ratio = weight_ratio(input, output);
                out.insert_transition(output.clone(), input.clone(), coeff.conj().mul(&ratio));
            }
        }
        out
    }

    /// Plain transpose of the transition matrix (bilinear dual action).
    pub fn transpose(&self) -> Self {
        let mut out = Self::new(self.e_max);
        for (input, entries) in &self.transitions {
            for (output, coeff) in entries {
                out.insert_transition(output.clone(), input.clone(), coeff.clone());
            }
        }
        out
    }

    /// The set of energy jumps `energy(out) - energy(in)` realized by the
    /// stored transitions.
    pub fn energy_shifts(&self) -> BTreeSet<i64> {
        let mut shifts = BTreeSet::new();
        for (input, entries) in &self.transitions {
            for (output, _) in entries {
                shifts.insert(output.energy() as i64 - input.energy() as i64);
            }
        }
        shifts
    }

    pub fn is_zero(&self) -> bool {
        self.transitions.values().all(|es| es.iter().all(|(_, c)| c.is_zero()))
    }

    /// Exact equality of transition data (cutoff and overflow sets ignored).
    pub fn same_transitions(&self, other: &Self) -> bool {
        self.add(&other.scale(&S::from_int(-1))).is_zero()
    }

    /// Largest transition-coefficient deviation from `other`, in float.
    pub fn max_deviation(&self, other: &Self) -> f64 {
        let diff = self.add(&other.scale(&S::from_int(-1)));
        diff.transitions
            .values()
            .flat_map(|es| es.iter().map(|(_, c)| c.to_complex().norm()))
            .fold(0.0, f64::max)
    }

    pub fn transitions(&self) -> impl Iterator<Item = (&B, &Vec<(B, S)>)> {
        self.transitions.iter()
    }
}
