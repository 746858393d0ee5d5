//! The one-mode desk model: the projective Heisenberg action on L²(ℝ),
//!
//! ```text
//! ρ_{(a,b)}(φ)(x) = e^{i(2bx+ab)} φ(x+a),   ρ_{g₁}ρ_{g₂} = e^{iω(g₁,g₂)} ρ_{g₁+g₂}
//! ```
//!
//! with `ω((a,b),(a′,b′)) = ab′ − a′b`, matrix coefficients
//! `Ψ(φ⊗ψ)(x) = (√2/π)⟨φ, ρ_{−x}ψ⟩` landing in L²(ℝ²), the ladder
//! generators `dL`/`dR` on the plane, the 2×2 block Dirac operator, and the
//! group-algebra action with its rank-one Gaussian projection.
//!
//! Basis conventions: L²(ℝ) states live in the width-√2 Hermite basis
//! `φ_n(x) = 2^{1/4} h_n(√2 x)` whose vacuum `φ_0 ∝ e^{−x²}` is the lowest
//! vector of ρ; L²(ℝ²) states live in the standard product basis
//! `h_m ⊗ h_n`, where `Ψ(e^{−x²} ⊗ e^{−x²}) = h_0 ⊗ h_0` on the nose.
//! Ladder arithmetic uses `a_j = ∂_j + x_j` with `a h_m = √(2m) h_{m−1}`
//! and `[a, a*] = 2`, so
//!
//! ```text
//! dR(z) = (a₁+ia₂)/√2      dR(z̄) = (−a₁*+ia₂*)/√2
//! dL(z) = (a₁*+ia₂*)/√2    dL(z̄) = (−a₁+ia₂)/√2
//! ```
//!
//! All analytic statements are checked against Gauss–Hermite quadrature
//! oracles; all algebraic ones against the ladder arithmetic.

use nalgebra::{Complex, DMatrix};
use num_complex::Complex64;

use crate::error::{CoreError, Result};
use crate::operator::{Graded, GradedOperator, StateVector};
use crate::quad::{hermite_values, phi_values, QuadratureGrid};

const SQRT_2: f64 = std::f64::consts::SQRT_2;

/// Finite expansion in the φ-basis of L²(ℝ).
#[derive(Clone, PartialEq, Debug)]
pub struct HermiteState {
    coeffs: Vec<Complex64>,
}

impl HermiteState {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        HermiteState { coeffs }
    }

    pub fn basis(n: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
        coeffs[n] = Complex64::new(1.0, 0.0);
        HermiteState { coeffs }
    }

    pub fn vacuum() -> Self {
        Self::basis(0)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn inner(&self, other: &Self) -> Complex64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Largest coefficient distance, padding the shorter state with zeros.
    pub fn max_distance(&self, other: &Self) -> f64 {
        let len = self.coeffs.len().max(other.coeffs.len());
        (0..len)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(Complex64::new(0.0, 0.0));
                let b = other.coeffs.get(i).copied().unwrap_or(Complex64::new(0.0, 0.0));
                (a - b).norm()
            })
            .fold(0.0, f64::max)
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        HermiteState { coeffs: self.coeffs.iter().map(|c| c * factor).collect() }
    }
}

/// Product-basis label `h_m ⊗ h_n` on the plane.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct PlaneLabel {
    pub m: u32,
    pub n: u32,
}

impl Graded for PlaneLabel {
    fn energy(&self) -> u64 {
        u64::from(self.m) + u64::from(self.n)
    }
}

/// Plane label doubled by the 2×2 block grading of the Dirac operator.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct U1Label {
    pub m: u32,
    pub n: u32,
    pub lower: bool,
}

impl Graded for U1Label {
    fn energy(&self) -> u64 {
        u64::from(self.m) + u64::from(self.n)
    }
}

/// The four plane ladder generators.
pub struct Generators {
    pub dl_z: GradedOperator<PlaneLabel, Complex64>,
    pub dl_z_bar: GradedOperator<PlaneLabel, Complex64>,
    pub dr_z: GradedOperator<PlaneLabel, Complex64>,
    pub dr_z_bar: GradedOperator<PlaneLabel, Complex64>,
}

/// One row of the isometry table.
#[derive(Clone, Copy, Debug)]
pub struct IsometryEntry {
    pub k: usize,
    pub l: usize,
    pub m: usize,
    pub n: usize,
    /// Quadrature value of `⟨v_{kl}, v_{mn}⟩ / ⟨Ω, Ω⟩`.
    pub ratio: Complex64,
    /// `2^k k!·2^l l!·δ_{km}δ_{ln}`.
    pub expected: f64,
}

#[derive(Clone, Debug)]
pub struct IsometryTable {
    pub entries: Vec<IsometryEntry>,
}

impl IsometryTable {
    pub fn max_diagonal_relative_error(&self) -> f64 {
        self.entries
            .iter()
            .filter(|e| (e.k, e.l) == (e.m, e.n))
            .map(|e| (e.ratio - Complex64::new(e.expected, 0.0)).norm() / e.expected)
            .fold(0.0, f64::max)
    }

    pub fn max_off_diagonal_error(&self) -> f64 {
        self.entries
            .iter()
            .filter(|e| (e.k, e.l) != (e.m, e.n))
            .map(|e| e.ratio.norm())
            .fold(0.0, f64::max)
    }
}

/// Result of probing `π(e^{−|g|²/2})` for its rank-one structure.
#[derive(Clone, Debug)]
pub struct RankOneReport {
    pub singular_values: Vec<f64>,
    /// `σ₂/σ₁`.
    pub ratio: f64,
    /// `|⟨top left-singular vector, φ_0⟩|`.
    pub vacuum_overlap: f64,
    /// The unasserted proportionality constant `σ₁`.
    pub constant: f64,
    /// Whether the quadrature order was doubled to reach the tolerance.
    pub doubled: bool,
}

pub const DEFAULT_QUAD_ORDER: usize = 64;
pub const DEFAULT_N_MAX: usize = 24;

/// The oscillator model: truncation order plus a quadrature grid.
pub struct OscillatorModel {
    n_max: usize,
    grid: QuadratureGrid,
}

impl OscillatorModel {
    pub fn new(n_max: usize, quad_order: usize) -> Result<Self> {
        if n_max < 2 {
            return Err(CoreError::Config(format!("n_max = {n_max} too small")));
        }
        Ok(OscillatorModel { n_max, grid: QuadratureGrid::gauss_hermite(quad_order)? })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn grid(&self) -> &QuadratureGrid {
        &self.grid
    }

    /// Pointwise evaluation of a φ-basis state.
    pub fn evaluate(&self, state: &HermiteState, x: f64) -> Complex64 {
        let deg = state.coeffs.len().saturating_sub(1);
        let phi = phi_values(deg, x);
        state
            .coeffs
            .iter()
            .zip(&phi)
            .map(|(c, &p)| c * p)
            .sum()
    }

    /// `ρ_{(a,b)}`, re-expanded in the φ-basis by quadrature. Fails when
    /// the truncated expansion loses more than `1e−6` of the norm.
    pub fn heisenberg_act(&self, g: (f64, f64), state: &HermiteState) -> Result<HermiteState> {
        let (a, b) = g;
        let norm_in = state.norm_sq();
        // Integrand envelope e^{−x²−(x+a)²} = e^{−2(x+a/2)²}·const.
        let center = -a / 2.0;
        let scale = 1.0 / SQRT_2;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); self.n_max + 1];
        for (&node, &w) in self.grid.nodes().iter().zip(self.grid.bare_weights()) {
            let x = center + scale * node;
            let phase = Complex64::new(0.0, 2.0 * b * x + a * b).exp();
            let shifted = self.evaluate(state, x + a);
            let weighted = scale * w * phase * shifted;
            for (n, &p) in phi_values(self.n_max, x).iter().enumerate() {
                coeffs[n] += weighted * p;
            }
        }
        let out = HermiteState::new(coeffs);
        let tail = (norm_in - out.norm_sq()).abs();
        if tail > 1e-6 * norm_in.max(f64::MIN_POSITIVE) {
            return Err(CoreError::QuadratureTail { tail, limit: 1e-6 * norm_in });
        }
        Ok(out)
    }

    /// `Ψ(φ⊗ψ)(x) = (√2/π)⟨φ, ρ_{−x}ψ⟩`, evaluated by quadrature.
    pub fn matrix_coefficient(
        &self,
        phi: &HermiteState,
        psi: &HermiteState,
        x: (f64, f64),
    ) -> Complex64 {
        let (x1, x2) = x;
        let center = x1 / 2.0;
        let scale = 1.0 / SQRT_2;
        let mut acc = Complex64::new(0.0, 0.0);
        for (&node, &w) in self.grid.nodes().iter().zip(self.grid.bare_weights()) {
            let u = center + scale * node;
            let phase = Complex64::new(0.0, -2.0 * x2 * u + x1 * x2).exp();
            let left = self.evaluate(phi, u).conj();
            let right = self.evaluate(psi, u - x1);
            acc += w * left * phase * right;
        }
        scale * acc * SQRT_2 / std::f64::consts::PI
    }

    fn plane_domain(&self) -> Vec<PlaneLabel> {
        let cut = self.n_max as u32;
        let mut out = Vec::new();
        for m in 0..=cut {
            for n in 0..=(cut - m) {
                out.push(PlaneLabel { m, n });
            }
        }
        out
    }

    /// `Ω = Ψ(e^{−x²}⊗e^{−x²}) = h_0⊗h_0`.
    pub fn omega2(&self) -> StateVector<PlaneLabel, Complex64> {
        StateVector::basis(PlaneLabel { m: 0, n: 0 })
    }

    /// Builds a plane operator `c₁·A₁ + c₂·A₂` where each `A_j` moves axis
    /// `j` by `±1` with the `a`/`a*` ladder coefficients.
    fn axis_combination(
        &self,
        raise: bool,
        c1: Complex64,
        c2: Complex64,
    ) -> GradedOperator<PlaneLabel, Complex64> {
        GradedOperator::from_rule(self.n_max as u64, self.plane_domain(), move |p| {
            let mut out = Vec::new();
            if raise {
                let cm = (2.0 * (p.m as f64 + 1.0)).sqrt();
                out.push((PlaneLabel { m: p.m + 1, n: p.n }, c1 * cm));
                let cn = (2.0 * (p.n as f64 + 1.0)).sqrt();
                out.push((PlaneLabel { m: p.m, n: p.n + 1 }, c2 * cn));
            } else {
                if p.m > 0 {
                    let cm = (2.0 * p.m as f64).sqrt();
                    out.push((PlaneLabel { m: p.m - 1, n: p.n }, c1 * cm));
                }
                if p.n > 0 {
                    let cn = (2.0 * p.n as f64).sqrt();
                    out.push((PlaneLabel { m: p.m, n: p.n - 1 }, c2 * cn));
                }
            }
            out
        })
    }

    pub fn generators(&self) -> Generators {
        let inv = Complex64::new(1.0 / SQRT_2, 0.0);
        let i_inv = Complex64::new(0.0, 1.0 / SQRT_2);
        Generators {
            // dL(z) = (a₁* + i a₂*)/√2.
            dl_z: self.axis_combination(true, inv, i_inv),
            // dL(z̄) = (−a₁ + i a₂)/√2.
            dl_z_bar: self.axis_combination(false, -inv, i_inv),
            // dR(z) = (a₁ + i a₂)/√2.
            dr_z: self.axis_combination(false, inv, i_inv),
            // dR(z̄) = (−a₁* + i a₂*)/√2.
            dr_z_bar: self.axis_combination(true, -inv, i_inv),
        }
    }

    /// Quadrature inner product `∫∫ conj(F) G` of plane states.
    pub fn plane_inner_quadrature(
        &self,
        f: &StateVector<PlaneLabel, Complex64>,
        g: &StateVector<PlaneLabel, Complex64>,
    ) -> Complex64 {
        let deg = f
            .iter()
            .chain(g.iter())
            .map(|(p, _)| p.m.max(p.n) as usize)
            .max()
            .unwrap_or(0);
        let nodes = self.grid.nodes();
        let weights = self.grid.bare_weights();
        let table: Vec<Vec<f64>> =
            nodes.iter().map(|&x| hermite_values(deg, x)).collect();
        let eval = |s: &StateVector<PlaneLabel, Complex64>, i: usize, j: usize| {
            s.iter()
                .map(|(p, c)| c * table[i][p.m as usize] * table[j][p.n as usize])
                .sum::<Complex64>()
        };
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..nodes.len() {
            for j in 0..nodes.len() {
                let w = weights[i] * weights[j];
                acc += w * eval(f, i, j).conj() * eval(g, i, j);
            }
        }
        acc
    }

    /// Gram table of `v_{kl} = dR(z̄)^k dL(z)^l Ω` against the closed form
    /// `2^k k!·2^l l!·δ`, with all inner products taken by quadrature.
    pub fn isometry_table(&self, k_max: usize, l_max: usize) -> Result<IsometryTable> {
        if k_max + l_max > self.n_max {
            return Err(CoreError::Config(format!(
                "isometry degree {k_max}+{l_max} exceeds n_max = {}",
                self.n_max
            )));
        }
        let gens = self.generators();
        let mut states: Vec<Vec<StateVector<PlaneLabel, Complex64>>> = Vec::new();
        for k in 0..=k_max {
            let mut row = Vec::new();
            for l in 0..=l_max {
                let mut v = self.omega2();
                for _ in 0..l {
                    v = gens.dl_z.apply(&v)?;
                }
                for _ in 0..k {
                    v = gens.dr_z_bar.apply(&v)?;
                }
                row.push(v);
            }
            states.push(row);
        }
        let omega_norm = self.plane_inner_quadrature(&self.omega2(), &self.omega2());
        let mut entries = Vec::new();
        for k in 0..=k_max {
            for l in 0..=l_max {
                for m in 0..=k_max {
                    for n in 0..=l_max {
                        let ip = self.plane_inner_quadrature(&states[k][l], &states[m][n]);
                        let ratio = ip / omega_norm;
                        let expected = if (k, l) == (m, n) {
                            (2.0f64).powi(k as i32)
                                * factorial(k)
                                * (2.0f64).powi(l as i32)
                                * factorial(l)
                        } else {
                            0.0
                        };
                        entries.push(IsometryEntry { k, l, m, n, ratio, expected });
                    }
                }
            }
        }
        Ok(IsometryTable { entries })
    }

    fn u1_domain(&self) -> Vec<U1Label> {
        let mut out = Vec::new();
        for p in self.plane_domain() {
            for lower in [false, true] {
                out.push(U1Label { m: p.m, n: p.n, lower });
            }
        }
        out
    }

    /// `∂̸ = i·[[0, −a₁*+ia₂*], [a₁+ia₂, 0]]` on the block-doubled basis.
    pub fn dirac_u1(&self) -> GradedOperator<U1Label, Complex64> {
        GradedOperator::from_rule(self.n_max as u64, self.u1_domain(), |s| {
            let mut out = Vec::new();
            if !s.lower {
                // i(a₁+ia₂): upper block feeds the lower one.
                if s.m > 0 {
                    let c = Complex64::new(0.0, (2.0 * s.m as f64).sqrt());
                    out.push((U1Label { m: s.m - 1, n: s.n, lower: true }, c));
                }
                if s.n > 0 {
                    let c = Complex64::new(-(2.0 * s.n as f64).sqrt(), 0.0);
                    out.push((U1Label { m: s.m, n: s.n - 1, lower: true }, c));
                }
            } else {
                // i(−a₁*+ia₂*): lower block feeds the upper one.
                let cm = Complex64::new(0.0, -(2.0 * (s.m as f64 + 1.0)).sqrt());
                out.push((U1Label { m: s.m + 1, n: s.n, lower: false }, cm));
                let cn = Complex64::new(-(2.0 * (s.n as f64 + 1.0)).sqrt(), 0.0);
                out.push((U1Label { m: s.m, n: s.n + 1, lower: false }, cn));
            }
            out
        })
    }

    /// Extends a plane operator blockwise (`A ⊗ id` on the 2-block space).
    fn blockwise(
        &self,
        op: &GradedOperator<PlaneLabel, Complex64>,
    ) -> GradedOperator<U1Label, Complex64> {
        let mut out = GradedOperator::new(self.n_max as u64);
        for (input, entries) in op.transitions() {
            for (output, coeff) in entries {
                for lower in [false, true] {
                    out.insert_transition(
                        U1Label { m: input.m, n: input.n, lower },
                        U1Label { m: output.m, n: output.n, lower },
                        *coeff,
                    );
                }
            }
        }
        out
    }

    /// `max_{v∈{z,z̄}} ‖[dL(v)⊗id, ∂̸]‖` over the safe basis states
    /// (energy ≤ n_max − 2, where no truncation interferes).
    pub fn equivariance_norm(&self) -> f64 {
        let dirac = self.dirac_u1();
        let gens = self.generators();
        let safe: Vec<U1Label> = self
            .u1_domain()
            .into_iter()
            .filter(|s| s.energy() + 2 <= self.n_max as u64)
            .collect();
        let mut worst: f64 = 0.0;
        for plane_op in [&gens.dl_z, &gens.dl_z_bar] {
            let comm = self.blockwise(plane_op).commutator(&dirac);
            for s in &safe {
                let out = comm.apply(&StateVector::basis(*s)).expect("float mode");
                let norm_sq: f64 = out.iter().map(|(_, c)| c.norm_sqr()).sum();
                worst = worst.max(norm_sq.sqrt());
            }
        }
        worst
    }

    /// Hermite-basis matrix of `π(f)(φ)(x) = ∫ f(a,b) e^{i(2bx+ab)} φ(x+a)`
    /// on the first `dim` basis states, by nested quadrature. The kernel
    /// must decay at least like `e^{−|g|²/2}` for the default scaling.
    pub fn group_algebra_matrix<F: Fn(f64, f64) -> Complex64>(
        &self,
        f: F,
        dim: usize,
    ) -> DMatrix<Complex64> {
        self.group_algebra_matrix_on(&self.grid, f, dim)
    }

    fn group_algebra_matrix_on<F: Fn(f64, f64) -> Complex64>(
        &self,
        grid: &QuadratureGrid,
        f: F,
        dim: usize,
    ) -> DMatrix<Complex64> {
        let order = grid.order();
        let nodes = grid.nodes();
        let weights = grid.bare_weights();
        let mut m = DMatrix::from_element(dim, dim, Complex::new(0.0, 0.0));
        // Outer substitution a = √2 u, b = √2 v matches e^{−|g|²/2} decay;
        // inner x-integral is centered at −a/2 with width 1/√2.
        for (ja, &ua) in nodes.iter().enumerate() {
            let a = SQRT_2 * ua;
            let wa = SQRT_2 * weights[ja];
            let xs: Vec<f64> = nodes.iter().map(|&u| -a / 2.0 + u / SQRT_2).collect();
            let pm: Vec<Vec<f64>> = xs.iter().map(|&x| phi_values(dim - 1, x)).collect();
            let pn: Vec<Vec<f64>> = xs.iter().map(|&x| phi_values(dim - 1, x + a)).collect();
            // b-sums first: S_i = ∫ f(a,b) e^{i(ab+2b x_i)} db per node i.
            let mut s = vec![Complex64::new(0.0, 0.0); order];
            for (jb, &vb) in nodes.iter().enumerate() {
                let b = SQRT_2 * vb;
                let wb = SQRT_2 * weights[jb];
                let fv = f(a, b) * wb;
                if fv == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for i in 0..order {
                    s[i] += fv * Complex64::new(0.0, a * b + 2.0 * b * xs[i]).exp();
                }
            }
            let inner_scale = 1.0 / SQRT_2;
            for i in 0..order {
                let w = wa * inner_scale * weights[i] * s[i];
                if w == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for r in 0..dim {
                    for c in 0..dim {
                        m[(r, c)] += w * pm[i][r] * pn[i][c];
                    }
                }
            }
        }
        m
    }

    /// Pointwise `π(f)(φ)(x)`, for transport-identity checks.
    pub fn group_algebra_pointwise<F: Fn(f64, f64) -> Complex64>(
        &self,
        f: F,
        phi: &HermiteState,
        x: f64,
    ) -> Complex64 {
        let nodes = self.grid.nodes();
        let weights = self.grid.bare_weights();
        let mut acc = Complex64::new(0.0, 0.0);
        for (ja, &ua) in nodes.iter().enumerate() {
            let a = SQRT_2 * ua;
            let shifted = self.evaluate(phi, x + a);
            for (jb, &vb) in nodes.iter().enumerate() {
                let b = SQRT_2 * vb;
                let w = 2.0 * weights[ja] * weights[jb];
                acc += w * f(a, b) * Complex64::new(0.0, 2.0 * b * x + a * b).exp() * shifted;
            }
        }
        acc
    }

    /// Probes `π(e^{−|g|²/2})` for rank one; doubles the quadrature order
    /// once if the first pass misses the `1e−4` ratio target.
    pub fn rank_one_check(&self, dim: usize) -> Result<RankOneReport> {
        let gaussian =
            |a: f64, b: f64| Complex64::new((-(a * a + b * b) / 2.0).exp(), 0.0);
        let mut doubled = false;
        let mut matrix = self.group_algebra_matrix(gaussian, dim);
        let mut report = Self::svd_report(&matrix, doubled);
        if report.ratio > 1e-4 || report.vacuum_overlap < 1.0 - 1e-4 {
            doubled = true;
            let fine = QuadratureGrid::gauss_hermite(2 * self.grid.order())?;
            matrix = self.group_algebra_matrix_on(&fine, gaussian, dim);
            report = Self::svd_report(&matrix, doubled);
        }
        Ok(report)
    }

    fn svd_report(matrix: &DMatrix<Complex64>, doubled: bool) -> RankOneReport {
        let svd = matrix.clone().svd(true, false);
        let mut singular_values: Vec<f64> = svd.singular_values.iter().cloned().collect();
        singular_values.sort_by(|a, b| b.total_cmp(a));
        let sigma1 = singular_values[0];
        let ratio = if sigma1 > 0.0 { singular_values[1] / sigma1 } else { f64::INFINITY };
        let u = svd.u.expect("requested");
        // Column ordering of nalgebra's SVD matches its singular values,
        // which are not sorted; find the column of the largest one.
        let top = svd
            .singular_values
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let vacuum_overlap = u[(0, top)].norm();
        RankOneReport { singular_values, ratio, vacuum_overlap, constant: sigma1, doubled }
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// `ω((a,b),(a′,b′)) = ab′ − a′b`, the phase exponent of the projective
/// relation.
pub fn heisenberg_omega(g1: (f64, f64), g2: (f64, f64)) -> f64 {
    g1.0 * g2.1 - g2.0 * g1.1
}
