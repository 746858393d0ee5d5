//! The `verify` suites: identity checks across every module at the
//! configured size, with per-suite status and worst deviation.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use looplab_core::spectral::{
    projected_trace_crosscheck, verify_staircase_injection,
};
use looplab_core::twistalg::{convolve, convolve_oracle, represent};
use looplab_core::{
    DiracSpace, FockSpace, Graded, GradedOperator, LevelData, ModeSpace,
    Normalization, OscillatorModel, PartitionTable, RadicalScalar, Scalar, Side, SpinorSpace,
    StateVector, TwistedElement, WeightWindow,
};

use crate::config::RunConfig;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SuiteStatus {
    Pass,
    Fail,
    Trivial,
}

impl SuiteStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            SuiteStatus::Pass => "pass",
            SuiteStatus::Fail => "fail",
            SuiteStatus::Trivial => "trivial",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteResult {
    pub name: &'static str,
    pub status: SuiteStatus,
    pub max_deviation: f64,
    pub detail: String,
}

impl SuiteResult {
    fn judged(name: &'static str, deviation: f64, tolerance: f64, detail: String) -> Self {
        let status = if deviation <= tolerance {
            SuiteStatus::Pass
        } else {
            SuiteStatus::Fail
        };
        SuiteResult { name, status, max_deviation: deviation, detail }
    }

    fn failed(name: &'static str, detail: String) -> Self {
        SuiteResult { name, status: SuiteStatus::Fail, max_deviation: f64::INFINITY, detail }
    }

    fn trivial(name: &'static str) -> Self {
        SuiteResult {
            name,
            status: SuiteStatus::Trivial,
            max_deviation: 0.0,
            detail: "degenerate at this size".into(),
        }
    }
}

pub fn run_all(cfg: &RunConfig) -> Vec<SuiteResult> {
    vec![
        ccr_car(cfg),
        dirac_square(cfg),
        kernel_index(cfg),
        equivariance(cfg),
        isometry(cfg),
        rank_one(cfg),
        convolve_vs_oracle(cfg),
        partitions(cfg),
    ]
}

/// Worst deviation of `op` from `expected·id` over the listed basis inputs.
fn scalar_deviation<B, S>(
    op: &GradedOperator<B, S>,
    inputs: impl IntoIterator<Item = B>,
    expected: f64,
) -> looplab_core::Result<f64>
where
    B: Graded + Ord + Clone + std::fmt::Debug + Send + Sync + 'static,
    S: Scalar,
{
    let mut worst: f64 = 0.0;
    for b in inputs {
        let out = op.apply(&StateVector::basis(b.clone()))?;
        let mut seen_diag = false;
        for (label, coeff) in out.iter() {
            let target = if *label == b {
                seen_diag = true;
                Complex64::new(expected, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
            worst = worst.max((coeff.to_complex() - target).norm());
        }
        if !seen_diag {
            worst = worst.max(expected.abs());
        }
    }
    Ok(worst)
}

fn ccr_car_deviation<S: Scalar>(cfg: &RunConfig) -> looplab_core::Result<f64> {
    let fock = FockSpace::new(ModeSpace::new(cfg.modes), cfg.emax);
    let spinor = SpinorSpace::new(cfg.emax, None);
    let mut worst: f64 = 0.0;
    for k in 1..=cfg.modes {
        for l in 1..=cfg.modes {
            let expected = if k == l { 2.0 } else { 0.0 };
            // [dρ(z_k), dρ(z̄_l)] = 2δ; safe inputs keep the raise inside.
            let comm = fock
                .represent_z::<S>(k)?
                .commutator(&fock.represent_z_bar(l)?);
            let safe = fock
                .enumerate(Side::Primary)
                .into_iter()
                .filter(|b| b.energy() + u64::from(k) <= cfg.emax);
            worst = worst.max(scalar_deviation(&comm, safe, expected)?);
            // Dual CCR carries the opposite sign; the raise is by l.
            let dual = fock.dual_z::<S>(k)?.commutator(&fock.dual_z_bar(l)?);
            let safe = fock
                .enumerate(Side::Dual)
                .into_iter()
                .filter(|b| b.energy() + u64::from(l) <= cfg.emax);
            worst = worst.max(scalar_deviation(&dual, safe, -expected)?);
            // CAR: {γ(z_k), γ(z̄_l)} = −2δ; the wedge raises by l.
            let car = spinor
                .gamma_z::<S>(k)?
                .anticommutator(&spinor.gamma_z_bar(l)?);
            let safe = spinor
                .enumerate()
                .into_iter()
                .filter(|s| s.energy() + u64::from(l) <= cfg.emax);
            worst = worst.max(scalar_deviation(&car, safe, -expected)?);
        }
    }
    // Energy formula dρ(d) = −(i/2) Σ_k k·dρ(z_k)dρ(z̄_k), exact at every
    // cutoff because the composite never leaves the truncation.
    let mut sum: GradedOperator<_, S> = GradedOperator::new(cfg.emax);
    for k in 1..=cfg.modes {
        let term = fock
            .represent_z::<S>(k)?
            .compose(&fock.represent_z_bar(k)?)
            .scale(&S::i().mul(&S::from_ratio(-(i64::from(k)), 2)));
        sum = sum.add(&term);
    }
    worst = worst.max(sum.max_deviation(&fock.energy_operator::<S>()));
    Ok(worst)
}

fn ccr_car(cfg: &RunConfig) -> SuiteResult {
    if cfg.emax == 0 {
        return SuiteResult::trivial("ccr_car");
    }
    let result = if cfg.exact {
        ccr_car_deviation::<RadicalScalar>(cfg)
    } else {
        ccr_car_deviation::<Complex64>(cfg)
    };
    match result {
        Ok(dev) => {
            let tol = if cfg.exact { 0.0 } else { cfg.tolerance };
            SuiteResult::judged("ccr_car", dev, tol, "CCR, dual CCR, CAR, energy formula".into())
        }
        Err(e) => SuiteResult::failed("ccr_car", e.to_string()),
    }
}

fn dirac_square(cfg: &RunConfig) -> SuiteResult {
    if cfg.emax == 0 {
        return SuiteResult::trivial("dirac_square");
    }
    let space = DiracSpace::new(cfg.modes, cfg.emax);
    if cfg.exact {
        match space.verify_square_exact(true) {
            Ok(()) => SuiteResult::judged(
                "dirac_square",
                0.0,
                0.0,
                "exact symbolic cancellation to 4t per block".into(),
            ),
            Err(e) => SuiteResult::failed("dirac_square", e.to_string()),
        }
    } else {
        let dev = space.square_deviation_float(true);
        SuiteResult::judged("dirac_square", dev, cfg.tolerance, "float residual of d²−4t".into())
    }
}

fn kernel_index(cfg: &RunConfig) -> SuiteResult {
    let space = DiracSpace::new(cfg.modes, cfg.emax);
    let result = if cfg.exact {
        space.kernel_index_exact(true)
    } else {
        space.kernel_index_float(true)
    };
    match result {
        Ok(index) => {
            let expect: looplab_core::IndexClass = [(0i64, 1i64)].into_iter().collect();
            if index == expect {
                SuiteResult::judged("kernel_index", 0.0, 0.0, format!("index {}", index.to_json()))
            } else {
                SuiteResult::failed("kernel_index", format!("got {}", index.to_json()))
            }
        }
        Err(e) => SuiteResult::failed("kernel_index", e.to_string()),
    }
}

fn equivariance(cfg: &RunConfig) -> SuiteResult {
    match OscillatorModel::new(looplab_core::oscillator::DEFAULT_N_MAX, cfg.quad_order) {
        Ok(model) => {
            let dev = model.equivariance_norm();
            SuiteResult::judged(
                "equivariance",
                dev,
                cfg.tolerance,
                "commutator of block Dirac with the left ladders".into(),
            )
        }
        Err(e) => SuiteResult::failed("equivariance", e.to_string()),
    }
}

fn isometry(cfg: &RunConfig) -> SuiteResult {
    let model = match OscillatorModel::new(looplab_core::oscillator::DEFAULT_N_MAX, cfg.quad_order)
    {
        Ok(m) => m,
        Err(e) => return SuiteResult::failed("isometry", e.to_string()),
    };
    match model.isometry_table(4, 4) {
        Ok(table) => {
            let dev = table
                .max_diagonal_relative_error()
                .max(table.max_off_diagonal_error());
            SuiteResult::judged(
                "isometry",
                dev,
                cfg.tolerance.max(1e-6),
                "Gram table against 2^k k!·2^l l!".into(),
            )
        }
        Err(e) => SuiteResult::failed("isometry", e.to_string()),
    }
}

fn rank_one(cfg: &RunConfig) -> SuiteResult {
    let model = match OscillatorModel::new(looplab_core::oscillator::DEFAULT_N_MAX, cfg.quad_order)
    {
        Ok(m) => m,
        Err(e) => return SuiteResult::failed("rank_one", e.to_string()),
    };
    match model.rank_one_check(16) {
        Ok(report) => {
            let dev = report.ratio.max(1.0 - report.vacuum_overlap);
            SuiteResult::judged(
                "rank_one",
                dev,
                1e-4,
                format!("sigma1 = {:.6e}, doubled = {}", report.constant, report.doubled),
            )
        }
        Err(e) => SuiteResult::failed("rank_one", e.to_string()),
    }
}

fn random_element(rng: &mut ChaCha8Rng, level: LevelData) -> TwistedElement {
    let mut f = TwistedElement::zero(level);
    for _ in 0..5 {
        f.accumulate(
            rng.gen_range(-4..=4),
            rng.gen_range(-6..=6),
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
        );
    }
    f
}

fn elements_equal(a: &TwistedElement, b: &TwistedElement) -> bool {
    a.iter().collect::<Vec<_>>() == b.iter().collect::<Vec<_>>()
}

fn convolve_vs_oracle(cfg: &RunConfig) -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(1729);
    for c in 1..=3 {
        for k in 1..=3 {
            let level = match LevelData::new(c, k) {
                Ok(l) => l,
                Err(e) => return SuiteResult::failed("convolve_oracle", e.to_string()),
            };
            for trial in 0..120 {
                let f = random_element(&mut rng, level);
                let g = random_element(&mut rng, level);
                let direct = convolve(&f, &g);
                let oracle = convolve_oracle(&f, &g);
                match (direct, oracle) {
                    (Ok(d), Ok(o)) if elements_equal(&d, &o) => {}
                    _ => {
                        return SuiteResult::failed(
                            "convolve_oracle",
                            format!("mismatch at c = {c}, k = {k}, trial {trial}"),
                        )
                    }
                }
            }
        }
    }
    // Representation homomorphism spot-check on a window interior.
    let level = LevelData::new(cfg.level_c, cfg.level_k).unwrap_or_else(|_| {
        LevelData::new(1, 1).expect("unit level")
    });
    if level.k != 0 {
        let window = match WeightWindow::new(level, 0, cfg.window) {
            Ok(w) => w,
            Err(e) => return SuiteResult::failed("convolve_oracle", e.to_string()),
        };
        let f = TwistedElement::basis(level, 1, level.stride());
        let g = TwistedElement::basis(level, 1, 2 * level.stride());
        let lhs = convolve(&f, &g).and_then(|p| represent(&p, &window));
        let rhs = represent(&f, &window)
            .and_then(|mf| represent(&g, &window).map(|mg| mf * mg));
        match (lhs, rhs) {
            (Ok(l), Ok(r)) => {
                // Interior rows only: the product matrix may differ where
                // the window truncates.
                let stride = level.stride();
                let mut dev: f64 = 0.0;
                for row in 0..window.dim() {
                    let w = window.weight(row);
                    if w.abs() + 2 * stride.abs() <= stride.abs() * cfg.window {
                        for col in 0..window.dim() {
                            dev = dev.max((l[(row, col)] - r[(row, col)]).norm());
                        }
                    }
                }
                if dev > 0.0 {
                    return SuiteResult::failed(
                        "convolve_oracle",
                        format!("homomorphism deviation {dev:e}"),
                    );
                }
            }
            _ => return SuiteResult::failed("convolve_oracle", "represent failed".into()),
        }
    }
    SuiteResult::judged("convolve_oracle", 0.0, 0.0, "1080 random pairs, exact".into())
}

fn partitions(cfg: &RunConfig) -> SuiteResult {
    for l in 1..=12 {
        if let Err(e) = verify_staircase_injection(l) {
            return SuiteResult::failed("partitions", e.to_string());
        }
    }
    let table = PartitionTable::new(3600);
    for l in 1..=60usize {
        let mid = l * (l + 1) / 2;
        if !(table.p(l) <= table.q(mid) && table.q(mid) <= table.q(l * l)) {
            return SuiteResult::failed("partitions", format!("chain fails at l = {l}"));
        }
    }
    for s in [1u32, 2] {
        for norm in [Normalization::OnePlusFourN, Normalization::OnePlusN] {
            if let Err(e) = projected_trace_crosscheck(cfg.emax.min(8), s, norm) {
                return SuiteResult::failed("partitions", e.to_string());
            }
        }
    }
    SuiteResult::judged("partitions", 0.0, 0.0, "injection, chain, trace crosscheck".into())
}
