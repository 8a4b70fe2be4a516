//! The verification battery behind `slhkit verify`.
//!
//! Every check reports the worst error it measured next to its tolerance.
//! Random inputs come from a ChaCha stream seeded per check, so a given
//! seed and scale always produce the same report.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI, TAU};
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use slhkit::feedback::{
    build_feedback_selector, chain_feedback_selectors,
    feedback_selector_scattering, weighted_output_phase, weighted_small_mu_gain,
    weighted_tangent, SingularPolicy,
};
use slhkit::phase::{circular_distance, wrap_symmetric};
use slhkit::random::random_circuit;
use slhkit::selector::{
    compile_selector, eval_matrix_product, eval_selector, mz, read_selector, recover_selector,
    simulate_matrix_product, CompilationMatrices, MatrixProductSpec, SelectorMatrix, SelectorSpec,
    SelectorVector,
};
use slhkit::slh::unitarity_error;
use slhkit::{beamsplitter, coherent_drive, series, DriveAmplitudes};

use crate::sweep::{render_csv, SweepGrid};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scale {
    Quick,
    #[default]
    Full,
}

/// Which denominator the closed-form feedback check uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Denominator {
    #[default]
    Corrected,
    /// `2 - e^{iμ} + e^{i(φ+μ)}`, kept to show the check catches it.
    SignFlipped,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct VerifyOptions {
    pub seed: u64,
    pub scale: Scale,
    /// Restrict the exhaustive selector sweep to this one length.
    pub exhaustive: Option<usize>,
    pub denominator: Denominator,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub measured: f64,
    pub tolerance: f64,
    pub cases: usize,
}

impl Check {
    fn new(name: &'static str, measured: f64, tolerance: f64, cases: usize) -> Self {
        Self { name, measured, tolerance, cases }
    }

    pub fn passed(&self) -> bool {
        self.measured <= self.tolerance
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(
                f,
                "{} {:<28} error {:>12.3e}  tol {:>8.1e}  cases {}",
                if c.passed() { "PASS" } else { "FAIL" },
                c.name,
                c.measured,
                c.tolerance,
                c.cases
            )?;
        }
        let failed = self.checks.iter().filter(|c| !c.passed()).count();
        writeln!(f, "{} checks, {} failed", self.checks.len(), failed)
    }
}

fn rng_for(opts: &VerifyOptions, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    rng.set_stream(stream);
    rng
}

fn max_entry_error(a: &DMatrix<Complex64>, b: &[[f64; 2]; 2]) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            worst = worst.max((a[(i, j)] - b[i][j]).norm());
        }
    }
    worst
}

fn switch_dichotomy() -> Check {
    let id = [[1.0, 0.0], [0.0, 1.0]];
    let swap = [[0.0, 1.0], [1.0, 0.0]];
    let e0 = max_entry_error(mz(FRAC_PI_4, -FRAC_PI_4, 0.0).expect("finite").scattering(), &id);
    let e1 = max_entry_error(mz(FRAC_PI_4, -FRAC_PI_4, PI).expect("finite").scattering(), &swap);
    Check::new("switch_dichotomy", e0.max(e1), 1e-14, 2)
}

fn driven_beamsplitter(rng: &mut ChaCha8Rng, count: usize) -> Check {
    let b = beamsplitter(FRAC_PI_4).expect("finite");
    let mut worst: f64 = 0.0;
    for _ in 0..count {
        let a1 = Complex64::new(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0));
        let a2 = Complex64::new(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0));
        let w = coherent_drive(&DriveAmplitudes::new(vec![a1, a2])).expect("two ports");
        let g = series(&b, &w).expect("two ports");
        let expected = [(a1 - a2) * FRAC_1_SQRT_2, (a1 + a2) * FRAC_1_SQRT_2];
        for (got, want) in g.coupling().iter().zip(expected) {
            worst = worst.max((got - want).norm());
        }
        worst = worst.max(g.hamiltonian().abs());
    }
    Check::new("driven_beamsplitter", worst, 1e-12, count)
}

fn selector_sweep(rng: &mut ChaCha8Rng, lengths: &[usize], draws: usize) -> [Check; 2] {
    let (mut phase_err, mut right_amp): (f64, f64) = (0.0, 0.0);
    let mut cases = 0;
    for &n in lengths {
        for _ in 0..draws {
            let mu: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..TAU)).collect();
            for mask in 0..(1u64 << n) {
                let s = SelectorVector::from_mask(n, mask);
                let spec = SelectorSpec::from_selector(mu.clone(), &s).expect("valid spec");
                let r = read_selector(&spec, Complex64::new(1.0, 0.0)).expect("nonzero drive");
                let expected = eval_selector(&mu, &s).expect("same length");
                phase_err = phase_err.max(circular_distance(r.phase(), expected));
                right_amp = right_amp.max(r.right.norm());
            }
        }
        cases += 1usize << n;
    }
    [
        Check::new("selector_phase", phase_err, 1e-9, cases),
        Check::new("selector_left_exit", right_amp, 1e-10, cases),
    ]
}

fn compilation_algebra(max_n: usize) -> Check {
    let mut mismatches = 0usize;
    let mut cases = 0;
    for n in 0..=max_n {
        let m = CompilationMatrices::new(n);
        if m.lower_times_gamma() != DMatrix::identity(n, n) {
            mismatches += 1;
        }
        for mask in 0..(1u64 << n) {
            let s = SelectorVector::from_mask(n, mask);
            let (phi, _) = compile_selector(&s);
            if recover_selector(&phi) != s {
                mismatches += 1;
            }
            cases += 1;
        }
    }
    Check::new("compilation_round_trip", mismatches as f64, 0.0, cases)
}

fn matrix_products(rng: &mut ChaCha8Rng, count: usize) -> Check {
    let mut worst: f64 = 0.0;
    for _ in 0..count {
        let (n, m, k) = (rng.random_range(1..=6), rng.random_range(1..=6), rng.random_range(1..=6));
        let memory = DMatrix::from_fn(n, m, |_, _| rng.random_range(0.0..TAU));
        let rows: Vec<Vec<i64>> = (0..n).map(|_| (0..k).map(|_| rng.random_range(0..2)).collect()).collect();
        let s = SelectorMatrix::from_rows(&rows).expect("binary");
        let spec = MatrixProductSpec::from_selector_matrix(memory, &s).expect("valid");
        let closed = eval_matrix_product(&spec);
        let sim = simulate_matrix_product(&spec, Complex64::new(1.0, 0.0)).expect("valid");
        for (a, b) in closed.iter().zip(sim.phases.iter()) {
            worst = worst.max(circular_distance(*a, *b));
        }
        worst = worst.max(sim.max_residual_power.sqrt());
    }
    Check::new("matrix_product", worst, 1e-9, count)
}

fn closed_form(phi: f64, mu: f64, denominator: Denominator) -> Option<Complex64> {
    match denominator {
        Denominator::Corrected => feedback_selector_scattering(phi, mu).ok(),
        Denominator::SignFlipped => {
            let e = |x: f64| Complex64::from_polar(1.0, x);
            let den = 2.0 - e(mu) + e(phi + mu);
            (den.norm() > 1e-9).then(|| (1.0 + e(phi) - 2.0 * e(phi + mu)) / den)
        }
    }
}

fn feedback_checks(rng: &mut ChaCha8Rng, grid: usize, samples: usize, denominator: Denominator) -> [Check; 3] {
    let (mut agree, mut modulus): (f64, f64) = (0.0, 0.0);
    let mut cases = 0;
    // offset grid over [0, 2π)² keeps off the removable point (0, 0)
    let step = TAU / grid as f64;
    for i in 0..grid {
        for j in 0..grid {
            let (phi, mu) = ((i as f64 + 0.5) * step, (j as f64 + 0.5) * step);
            let built = build_feedback_selector(phi, mu, SingularPolicy::Reject).expect("off the singular set");
            let s = built.s(1, 1);
            let closed = closed_form(phi, mu, denominator).unwrap_or(Complex64::new(f64::NAN, f64::NAN));
            agree = agree.max(nan_as_inf((closed - s).norm()));
            modulus = modulus.max((s.norm() - 1.0).abs());
            cases += 1;
        }
    }
    let mut dichotomy: f64 = 0.0;
    for _ in 0..samples {
        let mu = rng.random_range(1e-3..TAU - 1e-3);
        let zero = closed_form(0.0, mu, denominator).unwrap_or(Complex64::new(f64::NAN, 0.0));
        let pi = closed_form(PI, mu, denominator).unwrap_or(Complex64::new(f64::NAN, 0.0));
        dichotomy = dichotomy
            .max(nan_as_inf((zero - 1.0).norm()))
            .max(nan_as_inf((pi - Complex64::from_polar(1.0, mu)).norm()));
    }
    [
        Check::new("feedback_closed_form", agree, 1e-12, cases),
        Check::new("feedback_unit_modulus", modulus, 1e-10, cases),
        Check::new("feedback_binary_controls", dichotomy, 1e-12, samples),
    ]
}

fn nan_as_inf(x: f64) -> f64 {
    if x.is_nan() {
        f64::INFINITY
    } else {
        x
    }
}

fn weighted_checks(rng: &mut ChaCha8Rng, samples: usize) -> [Check; 3] {
    let (mut half, mut full, mut tangent): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for _ in 0..samples {
        let mu = rng.random_range(-3.0..3.0);
        half = half.max((weighted_output_phase(FRAC_PI_2, mu).expect("regular") - mu).abs());
        full = full.max(weighted_output_phase(PI, mu).expect("regular").abs());
        let phi = rng.random_range(0.1..TAU - 0.1);
        if let Ok(out) = weighted_output_phase(phi, mu) {
            let (num, den) = weighted_tangent(phi, mu);
            // compare modulo π: the arctangent only fixes the phase up to a half turn
            let from_ratio = num.atan2(den);
            let d = wrap_symmetric(2.0 * (out - from_ratio)).abs() / 2.0;
            tangent = tangent.max(d);
        }
    }
    [
        Check::new("weighted_half_pi_identity", half, 1e-12, samples),
        Check::new("weighted_pi_blocks", full, 1e-12, samples),
        Check::new("weighted_arctan_form", tangent, 1e-9, samples),
    ]
}

/// Central difference of the weighted output phase at `μ = 0`.
pub fn finite_difference_gain(phi: f64, eps: f64) -> f64 {
    let plus = weighted_output_phase(phi, eps).expect("regular");
    let minus = weighted_output_phase(phi, -eps).expect("regular");
    (plus - minus) / (2.0 * eps)
}

fn gain_checks() -> [Check; 2] {
    let mut rel: f64 = 0.0;
    for k in 2..=10 {
        let phi = k as f64 * PI / 12.0;
        let exact = weighted_small_mu_gain(phi).expect("phi away from 0");
        rel = rel.max(((finite_difference_gain(phi, 1e-5) - exact) / exact).abs());
    }
    // d/dφ cot²(φ/2) = -2 at π/2, so the first-order gain is 1 - 2(φ - π/2)
    let mut slope: f64 = 0.0;
    for delta in [-0.01, 0.01] {
        let gain = finite_difference_gain(FRAC_PI_2 + delta, 1e-5);
        slope = slope.max((gain - (1.0 - 2.0 * delta)).abs());
    }
    [
        Check::new("small_mu_gain", rel, 1e-4, 9),
        Check::new("gain_slope_near_half_pi", slope, 1e-3, 2),
    ]
}

fn feedback_chain(rng: &mut ChaCha8Rng, max_n: usize) -> Check {
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for n in 1..=max_n {
        let mu: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..TAU)).collect();
        for mask in 0..(1u64 << n) {
            let s = SelectorVector::from_mask(n, mask);
            let phi: Vec<f64> = s.bits().iter().map(|&b| if b { PI } else { 0.0 }).collect();
            let chained = chain_feedback_selectors(&mu, &phi).expect("binary controls");
            worst = worst.max(circular_distance(chained, eval_selector(&mu, &s).expect("same length")));
            cases += 1;
        }
    }
    Check::new("feedback_chain", worst, 1e-9, cases)
}

fn unitarity_closure(rng: &mut ChaCha8Rng, count: usize) -> Check {
    let mut worst: f64 = 0.0;
    for _ in 0..count {
        let depth = rng.random_range(1..=20);
        let g = random_circuit(rng, depth);
        worst = worst.max(unitarity_error(g.scattering()).expect("square"));
    }
    Check::new("unitarity_closure", worst, 1e-10, count)
}

fn transfer_sweep() -> [Check; 2] {
    let grid = SweepGrid::default();
    let first = render_csv(&grid).expect("grid avoids singular points");
    let second = render_csv(&grid).expect("grid avoids singular points");
    let mut worst: f64 = 0.0;
    let mut rows = 0;
    for line in first.lines().skip(1) {
        let cols: Vec<f64> = line.split(',').map(|c| c.parse().expect("numeric csv")).collect();
        let (phi, mu, out) = (cols[0], cols[1], cols[2]);
        if (phi - FRAC_PI_2).abs() < 1e-9 {
            worst = worst.max((out - mu).abs());
        } else if (phi - PI).abs() < 1e-9 {
            worst = worst.max(out.abs());
        }
        rows += 1;
    }
    let identical = if first == second { 0.0 } else { 1.0 };
    [
        Check::new("sweep_special_columns", worst, 1e-12, rows),
        Check::new("sweep_deterministic", identical, 0.0, 2),
    ]
}

pub fn run(opts: &VerifyOptions) -> Report {
    let full = opts.scale == Scale::Full;
    let pick = |f: usize, q: usize| if full { f } else { q };
    let mut checks = Vec::new();

    checks.push(switch_dichotomy());
    checks.push(driven_beamsplitter(&mut rng_for(opts, 2), pick(100, 20)));
    let lengths: Vec<usize> = match opts.exhaustive {
        Some(n) => vec![n],
        None => (1..=pick(8, 5)).collect(),
    };
    checks.extend(selector_sweep(&mut rng_for(opts, 3), &lengths, pick(10, 2)));
    checks.push(compilation_algebra(10));
    checks.push(matrix_products(&mut rng_for(opts, 5), pick(50, 10)));
    checks.extend(feedback_checks(&mut rng_for(opts, 6), pick(100, 20), pick(1000, 100), opts.denominator));
    checks.extend(weighted_checks(&mut rng_for(opts, 7), pick(1000, 100)));
    checks.extend(gain_checks());
    checks.push(feedback_chain(&mut rng_for(opts, 9), pick(8, 5)));
    checks.push(unitarity_closure(&mut rng_for(opts, 10), pick(1000, 100)));
    checks.extend(transfer_sweep());

    Report { checks }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_battery_passes() {
        let report = run(&VerifyOptions { scale: Scale::Quick, ..Default::default() });
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn sign_flipped_denominator_is_caught() {
        let report = run(&VerifyOptions {
            scale: Scale::Quick,
            denominator: Denominator::SignFlipped,
            ..Default::default()
        });
        assert!(!report.passed());
        assert!(!report.get("feedback_binary_controls").unwrap().passed());
        assert!(!report.get("feedback_closed_form").unwrap().passed());
        assert!(report.get("switch_dichotomy").unwrap().passed());
    }

    #[test]
    fn exhaustive_flag_counts_cases() {
        let report = run(&VerifyOptions { scale: Scale::Quick, exhaustive: Some(6), ..Default::default() });
        assert_eq!(report.get("selector_phase").unwrap().cases, 64);
    }

    #[test]
    fn reports_are_reproducible() {
        let opts = VerifyOptions { seed: 99, scale: Scale::Quick, ..Default::default() };
        assert_eq!(run(&opts).to_string(), run(&opts).to_string());
    }
}
