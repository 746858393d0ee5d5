//! Acceptance gate: one test per criterion, each printing a single
//! pass/fail line. Run with `--nocapture` to see the lines on success.

use std::process::Command;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use looplab_core::spectral::{
    divergence_witness, projected_trace_crosscheck, verify_staircase_injection,
};
use looplab_core::twistalg::{convolve, convolve_oracle, represent};
use looplab_core::{
    DiracSpace, FockSpace, Graded, GradedOperator, IndexClass, LevelData, ModeSpace,
    Normalization, OscillatorModel, PartitionTable, RadicalScalar, Scalar, Side, SpinorSpace,
    StateVector, TwistedElement, WeightWindow,
};

fn report(n: u32, failures: &[String]) {
    if failures.is_empty() {
        println!("criterion {n}: PASS");
    } else {
        println!("criterion {n}: FAIL");
    }
    assert!(failures.is_empty(), "criterion {n}: {failures:?}");
}

#[test]
fn criterion_1_dirac_square_identity() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for n in 1..=3u32 {
        for e_max in [2u64, 4, 6, 8] {
            let space = DiracSpace::new(n, e_max);
            if let Err(e) = space.verify_square_exact(true) {
                failures.push(format!("exact (N={n}, E={e_max}): {e}"));
            }
            let dev = space.square_deviation_float(true);
            if dev > 1e-10 {
                failures.push(format!("float (N={n}, E={e_max}): deviation {dev:e}"));
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    if elapsed > 10.0 {
        failures.push(format!("runtime {elapsed:.1}s exceeds 10s"));
    }
    report(1, &failures);
}

#[test]
fn criterion_2_kernel_index() {
    let mut failures = Vec::new();
    let expect: IndexClass = [(0i64, 1i64)].into_iter().collect();
    for n in 1..=3u32 {
        for e_max in [2u64, 4, 6, 8] {
            let space = DiracSpace::new(n, e_max);
            match space.kernel_index_exact(true) {
                Ok(idx) if idx == expect => {}
                other => failures.push(format!("exact (N={n}, E={e_max}): {other:?}")),
            }
            match space.kernel_index_float(true) {
                Ok(idx) if idx == expect => {}
                other => failures.push(format!("float (N={n}, E={e_max}): {other:?}")),
            }
        }
    }
    report(2, &failures);
}

/// Worst deviation of `op` from `expected·id` over the given basis inputs.
fn scalar_deviation<B, S>(
    op: &GradedOperator<B, S>,
    inputs: impl IntoIterator<Item = B>,
    expected: f64,
) -> f64
where
    B: Graded + Ord + Clone + std::fmt::Debug + Send + Sync + 'static,
    S: Scalar,
{
    let mut worst: f64 = 0.0;
    for b in inputs {
        let out = op.apply(&StateVector::basis(b.clone())).expect("safe input");
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
    worst
}

#[test]
fn criterion_3_ccr_car_suites() {
    let mut failures = Vec::new();
    let e_max = 8u64;
    for modes in 1..=3u32 {
        let fock = FockSpace::new(ModeSpace::new(modes), e_max);
        let spinor = SpinorSpace::new(e_max, None);
        let mut worst: f64 = 0.0;
        for k in 1..=modes {
            for l in 1..=modes {
                let expected = if k == l { 2.0 } else { 0.0 };
                let comm = fock
                    .represent_z::<RadicalScalar>(k)
                    .unwrap()
                    .commutator(&fock.represent_z_bar(l).unwrap());
                let safe = fock
                    .enumerate(Side::Primary)
                    .into_iter()
                    .filter(|b| b.energy() + u64::from(k) <= e_max);
                worst = worst.max(scalar_deviation(&comm, safe, expected));
                let dual = fock
                    .dual_z::<RadicalScalar>(k)
                    .unwrap()
                    .commutator(&fock.dual_z_bar(l).unwrap());
                let safe = fock
                    .enumerate(Side::Dual)
                    .into_iter()
                    .filter(|b| b.energy() + u64::from(l) <= e_max);
                worst = worst.max(scalar_deviation(&dual, safe, -expected));
                let car = spinor
                    .gamma_z::<RadicalScalar>(k)
                    .unwrap()
                    .anticommutator(&spinor.gamma_z_bar(l).unwrap());
                let safe = spinor
                    .enumerate()
                    .into_iter()
                    .filter(|s| s.energy() + u64::from(l) <= e_max);
                worst = worst.max(scalar_deviation(&car, safe, -expected));
            }
        }
        // Energy formula, exact on the whole truncation.
        let mut sum: GradedOperator<_, RadicalScalar> = GradedOperator::new(e_max);
        for k in 1..=modes {
            let term = fock
                .represent_z::<RadicalScalar>(k)
                .unwrap()
                .compose(&fock.represent_z_bar(k).unwrap())
                .scale(&RadicalScalar::i().mul(&RadicalScalar::from_ratio(-i64::from(k), 2)));
            sum = sum.add(&term);
        }
        worst = worst.max(sum.max_deviation(&fock.energy_operator::<RadicalScalar>()));
        if worst != 0.0 {
            failures.push(format!("N = {modes}: deviation {worst:e}"));
        }
    }
    report(3, &failures);
}

#[test]
fn criterion_4_oscillator_isometry() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let model = OscillatorModel::new(24, 64).unwrap();
    match model.isometry_table(4, 4) {
        Ok(table) => {
            let diag = table.max_diagonal_relative_error();
            let off = table.max_off_diagonal_error();
            if diag > 1e-6 {
                failures.push(format!("diagonal relative error {diag:e}"));
            }
            if off > 1e-6 {
                failures.push(format!("off-diagonal error {off:e}"));
            }
        }
        Err(e) => failures.push(format!("isometry table: {e}")),
    }
    let equiv = model.equivariance_norm();
    if equiv > 1e-8 {
        failures.push(format!("equivariance norm {equiv:e}"));
    }
    // Cocycle defect on 100 random pairs.
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let phi = looplab_core::HermiteState::basis(1);
    for trial in 0..100 {
        let g1 = (rng.gen_range(-0.8..0.8), rng.gen_range(-0.8..0.8));
        let g2 = (rng.gen_range(-0.8..0.8), rng.gen_range(-0.8..0.8));
        let two = model
            .heisenberg_act(g1, &model.heisenberg_act(g2, &phi).unwrap())
            .unwrap();
        let omega = looplab_core::oscillator::heisenberg_omega(g1, g2);
        let one = model
            .heisenberg_act((g1.0 + g2.0, g1.1 + g2.1), &phi)
            .unwrap()
            .scale(Complex64::new(0.0, omega).exp());
        let defect = two.max_distance(&one);
        if defect > 1e-6 {
            failures.push(format!("cocycle defect {defect:e} at trial {trial}"));
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    if elapsed > 30.0 {
        failures.push(format!("runtime {elapsed:.1}s exceeds 30s"));
    }
    report(4, &failures);
}

#[test]
fn criterion_5_rank_one_gaussian() {
    let mut failures = Vec::new();
    let model = OscillatorModel::new(24, 64).unwrap();
    match model.rank_one_check(16) {
        Ok(r) => {
            if r.ratio > 1e-4 {
                failures.push(format!("sigma2/sigma1 = {:e}", r.ratio));
            }
            if r.vacuum_overlap < 1.0 - 1e-4 {
                failures.push(format!("vacuum overlap {}", r.vacuum_overlap));
            }
        }
        Err(e) => failures.push(format!("rank-one check: {e}")),
    }
    report(5, &failures);
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

fn same_support(a: &TwistedElement, b: &TwistedElement) -> bool {
    a.iter().collect::<Vec<_>>() == b.iter().collect::<Vec<_>>()
}

#[test]
fn criterion_6_twisted_algebra() {
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for c in 1..=3i64 {
        for k in 1..=3i64 {
            let level = LevelData::new(c, k).unwrap();
            for trial in 0..112 {
                let f = random_element(&mut rng, level);
                let g = random_element(&mut rng, level);
                let direct = convolve(&f, &g).unwrap();
                let oracle = convolve_oracle(&f, &g).unwrap();
                if !same_support(&direct, &oracle) {
                    failures.push(format!("oracle mismatch c={c} k={k} trial {trial}"));
                }
            }
            // Cross-orbit products vanish exactly when the classes differ.
            let classes = level.orbit_count().unwrap();
            if classes > 1 {
                let f = TwistedElement::basis(level, 1, level.stride());
                let g = TwistedElement::basis(level, 0, 1);
                if !convolve(&f, &g).unwrap().is_zero()
                    || !convolve(&g, &f).unwrap().is_zero()
                {
                    failures.push(format!("orbit mixing at c={c} k={k}"));
                }
                // Representations of distinct classes annihilate each other.
                let w0 = WeightWindow::new(level, 0, 8).unwrap();
                let mf = represent(&f, &w0).unwrap();
                let mg = represent(&g, &w0).unwrap();
                if (&mf * &mg).iter().any(|z| z.norm() != 0.0) {
                    failures.push(format!("cross-orbit product nonzero c={c} k={k}"));
                }
            }
        }
    }
    // Representation homomorphism on window interiors, W = 8.
    for (c, k) in [(1i64, 1i64), (2, 1), (3, 2)] {
        let level = LevelData::new(c, k).unwrap();
        let stride = level.stride();
        let window = WeightWindow::new(level, 0, 8).unwrap();
        for (n1, n2) in [(1i64, 1i64), (1, 2), (2, 1), (-1, 1)] {
            let f = TwistedElement::basis(level, n1, (n1 + n2) * stride);
            let g = TwistedElement::basis(level, n2, n2 * stride);
            let product = convolve(&f, &g).unwrap();
            let lhs = represent(&product, &window).unwrap();
            let rhs = represent(&f, &window).unwrap() * represent(&g, &window).unwrap();
            let reach = (n1.abs() + n2.abs()) * stride.abs();
            for row in 0..window.dim() {
                if window.weight(row).abs() + reach > stride.abs() * 8 {
                    continue;
                }
                for col in 0..window.dim() {
                    if lhs[(row, col)] != rhs[(row, col)] {
                        failures.push(format!(
                            "homomorphism breaks at c={c} k={k} n1={n1} n2={n2} ({row},{col})"
                        ));
                    }
                }
            }
        }
    }
    report(6, &failures);
}

#[test]
fn criterion_7_borel_weil_via_binary() {
    let mut failures = Vec::new();
    let bin = env!("CARGO_BIN_EXE_looplab");
    let out_dir = std::env::temp_dir().join("looplab-acceptance");
    for c in 1..=5i64 {
        for lambda in 0..c {
            let output = Command::new(bin)
                .args([
                    "index",
                    "--borel-weil",
                    &lambda.to_string(),
                    "--level-c",
                    &c.to_string(),
                    "--out",
                ])
                .arg(&out_dir)
                .output()
                .expect("binary runs");
            if !output.status.success() {
                failures.push(format!("exit status {:?} at c={c} λ={lambda}", output.status));
                continue;
            }
            let text = String::from_utf8_lossy(&output.stdout);
            let json: serde_json::Value = serde_json::from_str(&text).expect("JSON output");
            let index = json["index"].as_object().expect("index object");
            let expect_key = (lambda.rem_euclid(c)).to_string();
            if index.len() != 1 || index.get(&expect_key).and_then(|v| v.as_i64()) != Some(1) {
                failures.push(format!("index {index:?} at c={c} λ={lambda}"));
            }
            let weights: Vec<i64> = json["weights"]
                .as_array()
                .expect("weights array")
                .iter()
                .map(|v| v.as_i64().unwrap())
                .collect();
            let mut expect: Vec<i64> = (-8..=8).map(|n| lambda + c * n).collect();
            expect.sort_unstable();
            if weights != expect {
                failures.push(format!("weights at c={c} λ={lambda}: {weights:?}"));
            }
        }
    }
    report(7, &failures);
}

#[test]
fn criterion_8_spectral_divergence() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for l in 1..=12 {
        if let Err(e) = verify_staircase_injection(l) {
            failures.push(format!("injection at l = {l}: {e}"));
        }
    }
    let table = PartitionTable::new(5000);
    for l in 1..=60usize {
        if table.p(l) > table.q(l * (l + 1) / 2) {
            failures.push(format!("chain fails at l = {l}"));
        }
    }
    for two_s in [1u32, 2, 4, 10, 20] {
        match divergence_witness(&table, two_s, 1_000_000, 5000) {
            Some(_) => {}
            None => failures.push(format!("no witness for 2s = {two_s}")),
        }
    }
    for e_max in 0..=8u64 {
        for s in [1u32, 2] {
            for norm in [Normalization::OnePlusFourN, Normalization::OnePlusN] {
                if let Err(e) = projected_trace_crosscheck(e_max, s, norm) {
                    failures.push(format!("crosscheck E={e_max} s={s}: {e}"));
                }
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    if elapsed > 10.0 {
        failures.push(format!("runtime {elapsed:.1}s exceeds 10s"));
    }
    report(8, &failures);
}
