//! The level-k twisted convolution algebra of `T × Π` on the basis
//! `δ_n θ^l (t, m) = δ_{n,m} t^l`, with `Π ≅ Λ ≅ ℤ` and the level constant
//! `c` encoding `κ(n) = c·n`.
//!
//! The closed-form product is fixed by exact character orthogonality
//! (`∫_T t^a dt = δ_{a,0}`) applied to the defining integral:
//!
//! ```text
//! δ_n θ^l *_k δ_{n′} θ^{l′} = [l = l′ + kcn] · δ_{n+n′} θ^l
//! ```
//!
//! Note the surviving exponent is `l` itself (`= l′ + kcn` under the
//! matching condition); a naive reading of the product as shifting the
//! second exponent is inconsistent with the integral. The matching
//! condition forces `l ≡ l′ (mod c|k|)`, so the algebra splits into
//! `c·|k|` orbit blocks that annihilate each other.
//!
//! The truncated matrix representation on the weight ladder
//! `{e_μ : μ ∈ λ + kcℤ, |μ − λ| ≤ W·|kc|}` acts by
//! `π(δ_n θ^l) e_μ = [μ − kcn + l = 0] · e_{μ − kcn}`: every basis element
//! is a matrix unit, and the assignment is an exact homomorphism on
//! elements supported well inside the window.

use std::collections::BTreeMap;

use nalgebra::{Complex, DMatrix};
use num_complex::Complex64;

use crate::error::{CoreError, Result};
use crate::index::IndexClass;

/// Level data: the cocycle constant `c ≥ 1` and the effective level `k`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct LevelData {
    pub c: i64,
    pub k: i64,
}

impl LevelData {
    pub fn new(c: i64, k: i64) -> Result<Self> {
        if c < 1 {
            return Err(CoreError::Config(format!("level constant c = {c} must be ≥ 1")));
        }
        Ok(LevelData { c, k })
    }

    /// Number of orbit classes `|Λ / kcΠ| = c·|k|`; requires `k ≠ 0`.
    pub fn orbit_count(&self) -> Result<i64> {
        if self.k == 0 {
            return Err(CoreError::UntwistedLevel);
        }
        Ok(self.c * self.k.abs())
    }

    /// The weight step `k·c` of a unit lattice shift.
    pub fn stride(&self) -> i64 {
        self.k * self.c
    }
}

/// Finite combination `Σ c_{n,l} δ_n θ^l` at a fixed level.
#[derive(Clone, PartialEq, Debug)]
pub struct TwistedElement {
    level: LevelData,
    coeffs: BTreeMap<(i64, i64), Complex64>,
}

impl TwistedElement {
    pub fn zero(level: LevelData) -> Self {
        TwistedElement { level, coeffs: BTreeMap::new() }
    }

    pub fn basis(level: LevelData, n: i64, l: i64) -> Self {
        let mut e = Self::zero(level);
        e.set(n, l, Complex64::new(1.0, 0.0));
        e
    }

    pub fn level(&self) -> LevelData {
        self.level
    }

    pub fn set(&mut self, n: i64, l: i64, value: Complex64) {
        if value == Complex64::new(0.0, 0.0) {
            self.coeffs.remove(&(n, l));
        } else {
            self.coeffs.insert((n, l), value);
        }
    }

    pub fn accumulate(&mut self, n: i64, l: i64, value: Complex64) {
        let v = self.get(n, l) + value;
        self.set(n, l, v);
    }

    pub fn get(&self, n: i64, l: i64) -> Complex64 {
        self.coeffs.get(&(n, l)).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn iter(&self) -> impl Iterator<Item = ((i64, i64), Complex64)> + '_ {
        self.coeffs.iter().map(|(&k, &v)| (k, v))
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_levels(self.level, other.level)?;
        let mut out = self.clone();
        for ((n, l), v) in other.iter() {
            out.accumulate(n, l, v);
        }
        Ok(out)
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        let mut out = Self::zero(self.level);
        for ((n, l), v) in self.iter() {
            out.set(n, l, v * factor);
        }
        out
    }

    /// One support entry per line: `n l re im`.
    pub fn to_lines(&self) -> String {
        let mut out = String::new();
        for ((n, l), v) in self.iter() {
            out.push_str(&format!("{} {} {} {}\n", n, l, v.re, v.im));
        }
        out
    }

    /// Parses the `to_lines` format; blank lines are skipped.
    pub fn from_lines(level: LevelData, text: &str) -> Result<Self> {
        let mut out = Self::zero(level);
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 4 {
                return Err(CoreError::Config(format!(
                    "line {}: expected \"n l re im\", got {line:?}",
                    lineno + 1
                )));
            }
            let parse_err = |what: &str| {
                CoreError::Config(format!("line {}: bad {what} in {line:?}", lineno + 1))
            };
            let n: i64 = fields[0].parse().map_err(|_| parse_err("n"))?;
            let l: i64 = fields[1].parse().map_err(|_| parse_err("l"))?;
            let re: f64 = fields[2].parse().map_err(|_| parse_err("re"))?;
            let im: f64 = fields[3].parse().map_err(|_| parse_err("im"))?;
            out.accumulate(n, l, Complex64::new(re, im));
        }
        Ok(out)
    }
}

fn check_levels(a: LevelData, b: LevelData) -> Result<()> {
    if a.k != b.k {
        return Err(CoreError::LevelMismatch { left: a.k, right: b.k });
    }
    if a.c != b.c {
        return Err(CoreError::LevelMismatch { left: a.c, right: b.c });
    }
    Ok(())
}

/// Closed-form twisted convolution.
pub fn convolve(f: &TwistedElement, g: &TwistedElement) -> Result<TwistedElement> {
    check_levels(f.level, g.level)?;
    let stride = f.level.stride();
    let mut out = TwistedElement::zero(f.level);
    for ((n, l), a) in f.iter() {
        for ((n2, l2), b) in g.iter() {
            if l == l2 + stride * n {
                out.accumulate(n + n2, l, a * b);
            }
        }
    }
    Ok(out)
}

/// Ground-truth convolution straight from the defining integral
/// `(f * g)(t, m) = ∫ f(t′, m′) g(t′⁻¹t, m′−m′) κ(m′)(t′t⁻¹)^{−k} dt′ dm′`:
/// the `t′`-integral of `t′^{l−l′−kcn}` vanishes unless the exponent is 0,
/// and what survives is the character `t^{l′+kcn}` at lattice site `n+n′`.
pub fn convolve_oracle(f: &TwistedElement, g: &TwistedElement) -> Result<TwistedElement> {
    check_levels(f.level, g.level)?;
    let stride = f.level.stride();
    let mut out = TwistedElement::zero(f.level);
    for ((n, l), a) in f.iter() {
        for ((n2, l2), b) in g.iter() {
            let t_prime_exponent = l - l2 - stride * n;
            if t_prime_exponent == 0 {
                out.accumulate(n + n2, l2 + stride * n, a * b);
            }
        }
    }
    Ok(out)
}

/// Splits an element into its orbit blocks `l mod c|k|`.
pub fn orbit_decompose(f: &TwistedElement) -> Result<BTreeMap<i64, TwistedElement>> {
    let classes = f.level.orbit_count()?;
    let mut out: BTreeMap<i64, TwistedElement> = BTreeMap::new();
    for ((n, l), v) in f.iter() {
        let class = l.rem_euclid(classes);
        out.entry(class)
            .or_insert_with(|| TwistedElement::zero(f.level))
            .set(n, l, v);
    }
    Ok(out)
}

/// Truncated weight ladder `{e_μ : μ = λ + kc·j, |j| ≤ W}` carrying the
/// matrix representation `π`. Row/column index `j + W` corresponds to `μ`.
#[derive(Clone, Copy, Debug)]
pub struct WeightWindow {
    pub level: LevelData,
    pub lambda: i64,
    pub half_width: i64,
}

impl WeightWindow {
    pub fn new(level: LevelData, lambda: i64, half_width: i64) -> Result<Self> {
        if level.k == 0 {
            return Err(CoreError::UntwistedLevel);
        }
        if half_width < 0 {
            return Err(CoreError::Config(format!("negative window {half_width}")));
        }
        Ok(WeightWindow { level, lambda, half_width })
    }

    pub fn dim(&self) -> usize {
        (2 * self.half_width + 1) as usize
    }

    /// The T-weight carried by ladder index `i ∈ 0..dim`.
    pub fn weight(&self, i: usize) -> i64 {
        self.lambda + self.level.stride() * (i as i64 - self.half_width)
    }

    fn index_of_weight(&self, mu: i64) -> Option<usize> {
        let stride = self.level.stride();
        let offset = mu - self.lambda;
        if offset.rem_euclid(stride) != 0 {
            return None;
        }
        let j = offset / stride;
        if j.abs() > self.half_width {
            return None;
        }
        Some((j + self.half_width) as usize)
    }
}

/// The matrix `π(f)` on a weight window. Each basis element acts as the
/// matrix unit `e_μ ↦ e_{μ−kcn}` on the unique `μ = kcn − l`.
pub fn represent(f: &TwistedElement, window: &WeightWindow) -> Result<DMatrix<Complex64>> {
    check_levels(f.level, window.level)?;
    // A lattice shift by n moves the weight by kcn; anything beyond the
    // window diameter can never connect two retained states.
    let needed = f.iter().map(|((n, _), _)| n.abs()).max().unwrap_or(0);
    if needed > 2 * window.half_width {
        return Err(CoreError::WindowTooSmall { window: window.half_width, needed });
    }
    let dim = window.dim();
    let mut m = DMatrix::from_element(dim, dim, Complex::new(0.0, 0.0));
    let stride = f.level.stride();
    for ((n, l), v) in f.iter() {
        let mu = stride * n - l;
        let Some(col) = window.index_of_weight(mu) else { continue };
        let Some(row) = window.index_of_weight(mu - stride * n) else { continue };
        m[(row, col)] += v;
    }
    Ok(m)
}

/// Lowest-weight index bookkeeping at level `k = 1`: the class `[λ mod c]`
/// with multiplicity one, plus the weight ladder of the truncated model
/// `L²(Π) ⊗ ℂ_λ` for comparison against the window.
pub fn borel_weil_index(
    lambda: i64,
    level: LevelData,
    half_width: i64,
) -> Result<(IndexClass, Vec<i64>)> {
    if level.k != 1 {
        return Err(CoreError::Config(format!(
            "lowest-weight index is stated at level k = 1, got k = {}",
            level.k
        )));
    }
    let classes = level.orbit_count()?;
    let mut ix = IndexClass::new();
    ix.add(lambda.rem_euclid(classes), 1);
    let weights: Vec<i64> = (-half_width..=half_width)
        .map(|n| lambda + level.c * n)
        .collect();
    Ok((ix, weights))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn lvl(c: i64, k: i64) -> LevelData {
        LevelData::new(c, k).unwrap()
    }

    fn c64(re: i64, im: i64) -> Complex64 {
        Complex64::new(re as f64, im as f64)
    }

    /// Random element with small Gaussian-integer coefficients, so every
    /// float operation in the tests is exact.
    fn random_element(level: LevelData, rng: &mut ChaCha8Rng, terms: usize) -> TwistedElement {
        let mut e = TwistedElement::zero(level);
        for _ in 0..terms {
            let n = rng.gen_range(-3..=3);
            let l = rng.gen_range(-6..=6);
            e.accumulate(n, l, c64(rng.gen_range(-4..=4), rng.gen_range(-4..=4)));
        }
        e
    }

    #[test]
    fn identity_like_product() {
        let level = lvl(1, 1);
        let e = TwistedElement::basis(level, 0, 0);
        let p = convolve(&e, &e).unwrap();
        assert_eq!(p, e);
        assert_eq!(convolve_oracle(&e, &e).unwrap(), e);
    }

    #[test]
    fn mismatched_frequencies_vanish() {
        let level = lvl(1, 1);
        let a = TwistedElement::basis(level, 0, 1);
        let b = TwistedElement::basis(level, 0, 2);
        assert!(convolve(&a, &b).unwrap().is_zero());
        assert!(convolve_oracle(&a, &b).unwrap().is_zero());
    }

    #[test]
    fn basis_rule_at_unit_level() {
        // c=1, k=1: δ_1θ^l * δ_0θ^{l′} survives iff l = l′ + 1, landing at
        // n = 1 with exponent l.
        let level = lvl(1, 1);
        for l in -3..=3i64 {
            for l2 in -3..=3i64 {
                let a = TwistedElement::basis(level, 1, l);
                let b = TwistedElement::basis(level, 0, l2);
                let p = convolve(&a, &b).unwrap();
                let oracle = convolve_oracle(&a, &b).unwrap();
                assert_eq!(p, oracle, "l={l} l2={l2}");
                if l == l2 + 1 {
                    assert_eq!(p.get(1, l), c64(1, 0));
                    assert_eq!(p.support_len(), 1);
                } else {
                    assert!(p.is_zero());
                }
            }
        }
    }

    #[test]
    fn convolve_matches_oracle_on_random_elements() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for c in 1..=3i64 {
            for k in 1..=3i64 {
                let level = lvl(c, k);
                for _ in 0..50 {
                    let f = random_element(level, &mut rng, 4);
                    let g = random_element(level, &mut rng, 4);
                    assert_eq!(
                        convolve(&f, &g).unwrap(),
                        convolve_oracle(&f, &g).unwrap(),
                        "c={c} k={k}"
                    );
                }
            }
        }
    }

    #[test]
    fn oracle_is_associative_and_bilinear() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let level = lvl(2, 3);
        for _ in 0..40 {
            let f = random_element(level, &mut rng, 3);
            let g = random_element(level, &mut rng, 3);
            let h = random_element(level, &mut rng, 3);
            let left = convolve_oracle(&convolve_oracle(&f, &g).unwrap(), &h).unwrap();
            let right = convolve_oracle(&f, &convolve_oracle(&g, &h).unwrap()).unwrap();
            assert_eq!(left, right);
            let sum = f.add(&g).unwrap();
            let distributed = convolve_oracle(&sum, &h).unwrap();
            let separate = convolve_oracle(&f, &h)
                .unwrap()
                .add(&convolve_oracle(&g, &h).unwrap())
                .unwrap();
            assert_eq!(distributed, separate);
        }
    }

    #[test]
    fn level_mismatch_is_rejected() {
        let a = TwistedElement::basis(lvl(1, 1), 0, 0);
        let b = TwistedElement::basis(lvl(1, 2), 0, 0);
        assert!(matches!(convolve(&a, &b), Err(CoreError::LevelMismatch { .. })));
    }

    #[test]
    fn orbit_blocks_and_cross_class_annihilation() {
        let level = lvl(1, 2);
        let mut f = TwistedElement::basis(level, 0, 0);
        f.accumulate(0, 1, c64(1, 0));
        let blocks = orbit_decompose(&f).unwrap();
        assert_eq!(blocks.len(), 2);
        assert!(blocks.contains_key(&0) && blocks.contains_key(&1));
        let p = convolve(&blocks[&0], &blocks[&1]).unwrap();
        assert!(p.is_zero());
        // Single basis element lands in a single block.
        let single = orbit_decompose(&TwistedElement::basis(level, 2, 5)).unwrap();
        assert_eq!(single.len(), 1);
        assert!(single.contains_key(&1));
    }

    #[test]
    fn untwisted_level_is_rejected() {
        let f = TwistedElement::basis(lvl(1, 0), 0, 0);
        assert!(matches!(orbit_decompose(&f), Err(CoreError::UntwistedLevel)));
    }

    #[test]
    fn matrix_units_and_condition() {
        // c=1, k=1, λ=0, W=3: the condition μ − kcn + l = 0 for δ_1θ^1
        // singles out μ = 0, so π sends e_0 to e_{−1} and kills the rest.
        let level = lvl(1, 1);
        let window = WeightWindow::new(level, 0, 3).unwrap();
        let m = represent(&TwistedElement::basis(level, 1, 1), &window).unwrap();
        for col in 0..window.dim() {
            for row in 0..window.dim() {
                let expect = if window.weight(col) == 0 && window.weight(row) == -1 {
                    c64(1, 0)
                } else {
                    c64(0, 0)
                };
                assert_eq!(m[(row, col)], expect, "row {row} col {col}");
            }
        }
        // π(δ_0θ^0) projects onto e_0.
        let p = represent(&TwistedElement::basis(level, 0, 0), &window).unwrap();
        for i in 0..window.dim() {
            let expect = if window.weight(i) == 0 { c64(1, 0) } else { c64(0, 0) };
            assert_eq!(p[(i, i)], expect);
        }
    }

    #[test]
    fn representation_is_a_homomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let window = WeightWindow::new(lvl(1, 1), 0, 8).unwrap();
        for _ in 0..60 {
            // Support within half the window keeps all images inside.
            let f = random_element(window.level, &mut rng, 3);
            let g = random_element(window.level, &mut rng, 3);
            let product = convolve_oracle(&f, &g).unwrap();
            let lhs = represent(&product, &window).unwrap();
            let rhs = represent(&f, &window).unwrap() * represent(&g, &window).unwrap();
            // Discrepancies may only involve weights outside the safe core.
            let stride = window.level.stride();
            for col in 0..window.dim() {
                for row in 0..window.dim() {
                    let safe = (window.weight(col) - window.lambda).abs() <= 4 * stride
                        && (window.weight(row) - window.lambda).abs() <= 4 * stride;
                    if safe {
                        assert_eq!(lhs[(row, col)], rhs[(row, col)], "row {row} col {col}");
                    }
                }
            }
        }
    }

    #[test]
    fn weight_shift_matches_level() {
        // π(δ_nθ^0) moves the T-weight down by kcn.
        for (c, k) in [(1i64, 1i64), (2, 1), (1, 3), (2, 2)] {
            let level = lvl(c, k);
            let window = WeightWindow::new(level, 0, 6).unwrap();
            for n in -2..=2i64 {
                let m = represent(&TwistedElement::basis(level, n, 0), &window).unwrap();
                for col in 0..window.dim() {
                    for row in 0..window.dim() {
                        if m[(row, col)] != c64(0, 0) {
                            assert_eq!(
                                window.weight(row),
                                window.weight(col) - level.stride() * n
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn matrix_units_span_the_window() {
        // Every window matrix unit e_row←col is hit by some δ_nθ^l.
        let level = lvl(2, 1);
        let window = WeightWindow::new(level, 1, 2).unwrap();
        let stride = level.stride();
        for col in 0..window.dim() {
            for row in 0..window.dim() {
                let mu = window.weight(col);
                let n = (mu - window.weight(row)) / stride;
                let l = stride * n - mu;
                let m = represent(&TwistedElement::basis(level, n, l), &window).unwrap();
                for c2 in 0..window.dim() {
                    for r2 in 0..window.dim() {
                        let expect = if (r2, c2) == (row, col) { c64(1, 0) } else { c64(0, 0) };
                        assert_eq!(m[(r2, c2)], expect);
                    }
                }
            }
        }
    }

    #[test]
    fn window_too_small_for_support() {
        let level = lvl(1, 1);
        let window = WeightWindow::new(level, 0, 2).unwrap();
        let f = TwistedElement::basis(level, 5, 0);
        assert!(matches!(
            represent(&f, &window),
            Err(CoreError::WindowTooSmall { window: 2, needed: 5 })
        ));
    }

    #[test]
    fn lowest_weight_index() {
        let (ix, _) = borel_weil_index(2, lvl(3, 1), 2).unwrap();
        let expect: IndexClass = [(2, 1)].into_iter().collect();
        assert_eq!(ix, expect);
        let (ix, _) = borel_weil_index(0, lvl(1, 1), 2).unwrap();
        let expect: IndexClass = [(0, 1)].into_iter().collect();
        assert_eq!(ix, expect);
        // Weight ladder example: W=2, c=2, λ=1.
        let (_, weights) = borel_weil_index(1, lvl(2, 1), 2).unwrap();
        assert_eq!(weights, vec![-3, -1, 1, 3, 5]);
        // Negative λ classes reduce into 0..c.
        let (ix, _) = borel_weil_index(-1, lvl(3, 1), 1).unwrap();
        let expect: IndexClass = [(2, 1)].into_iter().collect();
        assert_eq!(ix, expect);
        assert!(borel_weil_index(0, lvl(2, 2), 1).is_err());
    }

    #[test]
    fn serialization_round_trip() {
        let level = lvl(2, 3);
        let mut f = TwistedElement::zero(level);
        f.set(-1, 4, Complex64::new(0.5, -2.0));
        f.set(3, -2, Complex64::new(-1.0, 0.25));
        let text = f.to_lines();
        assert_eq!(text, "-1 4 0.5 -2\n3 -2 -1 0.25\n");
        let back = TwistedElement::from_lines(level, &text).unwrap();
        assert_eq!(back, f);
        assert!(TwistedElement::from_lines(level, "1 2 3").is_err());
        assert!(TwistedElement::from_lines(level, "a 2 3 4").is_err());
    }
}
