//! Exact scalar arithmetic for coefficients of the form `Σ q_r √r`, where each
//! `q_r` is a Gaussian rational and each radicand `r` is a square-free positive
//! integer. This is the coefficient ring all exact-mode operators live over:
//! the `√2` of the ladder operators and the `√k` of the Dirac assembly multiply
//! into radicals whose cross terms must cancel exactly.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Radicands above this bound abort: square-free factorization is done by
/// trial division, which is only cheap for small numbers. In-scope radicands
/// are products of two mode indices, far below the bound.
pub const RADICAND_BOUND: u64 = 1_000_000;

/// A complex number with rational real and imaginary parts.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn from_int(n: i64) -> Self {
        GaussianRational {
            re: BigRational::from_integer(BigInt::from(n)),
            im: BigRational::zero(),
        }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        GaussianRational {
            re: BigRational::new(BigInt::from(num), BigInt::from(den)),
            im: BigRational::zero(),
        }
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        GaussianRational {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        GaussianRational {
            re: &self.re * &other.re - &self.im * &other.im,
            im: &self.re * &other.im + &self.im * &other.re,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        GaussianRational {
            re: &self.re + &other.re,
            im: &self.im + &other.im,
        }
    }

    pub fn neg(&self) -> Self {
        GaussianRational {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self) -> Self {
        let norm = &self.re * &self.re + &self.im * &self.im;
        assert!(!norm.is_zero(), "division by zero GaussianRational");
        GaussianRational {
            re: &self.re / &norm,
            im: -(&self.im / &norm),
        }
    }
}

/// Splits `n = s² · r` with `r` square-free; returns `(s, r)`.
fn squarefree_split(n: u64) -> (u64, u64) {
    assert!(n >= 1, "radicand must be positive");
    assert!(
        n <= RADICAND_BOUND * RADICAND_BOUND,
        "radicand {n} exceeds the configured factorization bound"
    );
    let mut s = 1u64;
    let mut r = 1u64;
    let mut m = n;
    let mut p = 2u64;
    while p * p <= m {
        let mut e = 0u32;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        if e > 0 {
            s *= p.pow(e / 2);
            if e % 2 == 1 {
                r *= p;
            }
        }
        p += 1;
    }
    r *= m; // leftover prime
    (s, r)
}

/// Exact scalar `Σ_r q_r √r` with square-free radicands `r` and Gaussian
/// rational coefficients `q_r`. The empty sum is zero.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct RadicalScalar {
    terms: BTreeMap<u64, GaussianRational>,
}

impl RadicalScalar {
    pub fn zero() -> Self {
        RadicalScalar {
            terms: BTreeMap::new(),
        }
    }

    pub fn from_gaussian(q: GaussianRational) -> Self {
        let mut s = RadicalScalar::zero();
        s.add_term(1, q);
        s
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_gaussian(GaussianRational::from_int(n))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_gaussian(GaussianRational::from_ratio(num, den))
    }

    pub fn i() -> Self {
        Self::from_gaussian(GaussianRational::i())
    }

    /// `√n` for a positive integer `n`, reduced to square-free form.
    pub fn sqrt_nat(n: u64) -> Self {
        let (s, r) = squarefree_split(n);
        let mut out = RadicalScalar::zero();
        out.add_term(r, GaussianRational::from_int(s as i64));
        out
    }

    fn add_term(&mut self, radicand: u64, q: GaussianRational) {
        if q.is_zero() {
            return;
        }
        let entry = self
            .terms
            .entry(radicand)
            .or_insert_with(GaussianRational::default);
        *entry = entry.add(&q);
        if entry.is_zero() {
            self.terms.remove(&radicand);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when the scalar is a plain Gaussian rational (no radical part).
    pub fn is_rational(&self) -> bool {
        self.terms.keys().all(|&r| r == 1)
    }

    /// The `√1` coefficient, if the scalar is a plain Gaussian rational.
    pub fn as_gaussian(&self) -> Option<GaussianRational> {
        if self.terms.is_empty() {
            return Some(GaussianRational::default());
        }
        if self.is_rational() {
            return self.terms.get(&1).cloned();
        }
        None
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &GaussianRational)> {
        self.terms.iter().map(|(&r, q)| (r, q))
    }

    pub fn conj(&self) -> Self {
        // Radicals are real; only the Gaussian rational parts conjugate.
        RadicalScalar {
            terms: self.terms.iter().map(|(&r, q)| (r, q.conj())).collect(),
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (&r, q) in &self.terms {
            acc += q.to_complex() * (r as f64).sqrt();
        }
        acc
    }

    /// Inverse of a single-term scalar `q √r`. General sums are not invertible
    /// in this representation.
    pub fn single_term_inv(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (&r, q) = self.terms.iter().next().unwrap();
        // 1/(q√r) = (1/(q·r)) √r
        let coeff = q
            .inv()
            .mul(&GaussianRational::from_ratio(1, r as i64));
        let mut out = RadicalScalar::zero();
        out.add_term(r, coeff);
        Some(out)
    }
}

impl Add for &RadicalScalar {
    type Output = RadicalScalar;
    fn add(self, other: &RadicalScalar) -> RadicalScalar {
        let mut out = self.clone();
        for (&r, q) in &other.terms {
            out.add_term(r, q.clone());
        }
        out
    }
}

impl Sub for &RadicalScalar {
    type Output = RadicalScalar;
    fn sub(self, other: &RadicalScalar) -> RadicalScalar {
        let mut out = self.clone();
        for (&r, q) in &other.terms {
            out.add_term(r, q.neg());
        }
        out
    }
}

impl Neg for &RadicalScalar {
    type Output = RadicalScalar;
    fn neg(self) -> RadicalScalar {
        RadicalScalar {
            terms: self.terms.iter().map(|(&r, q)| (r, q.neg())).collect(),
        }
    }
}

impl Mul for &RadicalScalar {
    type Output = RadicalScalar;
    fn mul(self, other: &RadicalScalar) -> RadicalScalar {
        let mut out = RadicalScalar::zero();
        for (&ra, qa) in &self.terms {
            for (&rb, qb) in &other.terms {
                // ra, rb square-free: √ra·√rb = g·√(ab) with g = gcd and
                // a·b square-free (a = ra/g, b = rb/g are coprime).
                let g = num_integer::gcd(ra, rb);
                let a = ra / g;
                let b = rb / g;
                let rad = a
                    .checked_mul(b)
                    .filter(|&x| x <= RADICAND_BOUND)
                    .unwrap_or_else(|| {
                        panic!("radicand {a}*{b} exceeds the configured bound")
                    });
                let coeff = qa.mul(qb).mul(&GaussianRational::from_int(g as i64));
                out.add_term(rad, coeff);
            }
        }
        out
    }
}

impl fmt::Display for RadicalScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&r, q) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if r == 1 {
                write!(f, "({}+{}i)", q.re, q.im)?;
            } else {
                write!(f, "({}+{}i)√{}", q.re, q.im, r)?;
            }
        }
        Ok(())
    }
}

/// The common interface of the exact and float coefficient modes. Exact mode
/// backs the identity suites; float mode is for larger truncations where exact
/// arithmetic is not worth the cost.
pub trait Scalar: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(n: i64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    /// The imaginary unit.
    fn i() -> Self;
    /// `√n` for a positive integer `n`.
    fn sqrt_nat(n: u64) -> Self;

    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn conj(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn to_complex(&self) -> Complex64;
}

impl Scalar for RadicalScalar {
    const EXACT: bool = true;

    fn zero() -> Self {
        RadicalScalar::zero()
    }
    fn one() -> Self {
        RadicalScalar::from_int(1)
    }
    fn from_int(n: i64) -> Self {
        RadicalScalar::from_int(n)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        RadicalScalar::from_ratio(num, den)
    }
    fn i() -> Self {
        RadicalScalar::i()
    }
    fn sqrt_nat(n: u64) -> Self {
        RadicalScalar::sqrt_nat(n)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn conj(&self) -> Self {
        RadicalScalar::conj(self)
    }
    fn is_zero(&self) -> bool {
        RadicalScalar::is_zero(self)
    }
    fn to_complex(&self) -> Complex64 {
        RadicalScalar::to_complex(self)
    }
}

impl Scalar for Complex64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_int(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Complex64::new(num as f64 / den as f64, 0.0)
    }
    fn i() -> Self {
        Complex64::new(0.0, 1.0)
    }
    fn sqrt_nat(n: u64) -> Self {
        Complex64::new((n as f64).sqrt(), 0.0)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn to_complex(&self) -> Complex64 {
        *self
    }
}
