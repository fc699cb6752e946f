//! Randomized certificate suites: finite-difference gradient checks, the
//! sign-split energy and pairing decompositions, and the inequality zoo.
//! Each check reports its worst slack over all samples.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dump::format_f64;
use crate::energy::{decomposition_residuals, energy_unchecked, gradient, pairing};
use crate::error::Result;
use crate::inequalities::{
    corollary23_slack, decreasing_quotient, growth_bound_fit, lemma22_slack, scalar_log_inequality,
    theta, theta_prime, theta_ratio, ThetaInputs, ThetaVariant, GROWTH_SAMPLE_RANGE,
};
use crate::lattice::{CoefficientProfile, LatticeWindow, ProblemParams, Sequence};

/// Windows the random profiles are drawn on, alternating by sample index.
pub const SAMPLE_RADII: [usize; 2] = [8, 32];

pub const GRADIENT_TOL: f64 = 1e-6;
pub const DECOMPOSITION_TOL: f64 = 1e-10;
pub const THETA_TOL: f64 = 1e-12;
pub const ENERGY_INEQUALITY_TOL: f64 = 1e-9;

/// Which group of checks to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Decomposition,
    Inequalities,
    Gradient,
    All,
}

impl Suite {
    pub fn tag(&self) -> &'static str {
        match self {
            Suite::Decomposition => "decomposition",
            Suite::Inequalities => "inequalities",
            Suite::Gradient => "gradient",
            Suite::All => "all",
        }
    }
}

/// Worst case of one check over its samples. `min_slack >= -tolerance` passes,
/// except for strict checks where `min_slack > 0` is required.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckRow {
    pub check: String,
    pub samples: usize,
    pub min_slack: f64,
    pub tolerance: f64,
    pub argmin: String,
    pub pass: bool,
}

impl CheckRow {
    pub const CSV_HEADER: [&'static str; 6] = ["check", "samples", "min_slack", "tolerance", "argmin", "pass"];

    pub fn csv_record(&self) -> [String; 6] {
        [
            self.check.clone(),
            self.samples.to_string(),
            format_f64(self.min_slack),
            format_f64(self.tolerance),
            self.argmin.clone(),
            self.pass.to_string(),
        ]
    }
}

/// Running minimum of a slack with a description of where it occurred.
struct Worst {
    check: String,
    samples: usize,
    min: f64,
    at: String,
}

impl Worst {
    fn new(check: impl Into<String>) -> Self {
        Self { check: check.into(), samples: 0, min: f64::INFINITY, at: String::new() }
    }

    fn see(&mut self, slack: f64, at: impl FnOnce() -> String) {
        self.samples += 1;
        if slack < self.min || slack.is_nan() {
            self.min = slack;
            self.at = at();
        }
    }

    /// Passes when the slack never drops below `-tol`.
    fn tolerant(self, tol: f64) -> CheckRow {
        let pass = self.samples > 0 && self.min >= -tol;
        CheckRow { check: self.check, samples: self.samples, min_slack: self.min, tolerance: tol, argmin: self.at, pass }
    }

    /// Passes only when the slack stays strictly positive.
    fn strict(self) -> CheckRow {
        let pass = self.samples > 0 && self.min > 0.0;
        CheckRow { check: self.check, samples: self.samples, min_slack: self.min, tolerance: 0.0, argmin: self.at, pass }
    }
}

/// Entries uniform on `[-2, 2]`.
pub fn random_sequence(window: LatticeWindow, rng: &mut impl Rng) -> Sequence {
    Sequence::from_fn(window, |_| rng.gen_range(-2.0..=2.0)).expect("finite samples")
}

/// Like [`random_sequence`], but if the draw is one-signed a random half of
/// the entries is negated so both signs occur.
pub fn random_sign_changing(window: LatticeWindow, rng: &mut impl Rng) -> Sequence {
    loop {
        let mut vals = random_sequence(window, rng).into_values();
        let pos = vals.iter().any(|&v| v > 0.0);
        let neg = vals.iter().any(|&v| v < 0.0);
        if !(pos && neg) {
            for v in vals.iter_mut() {
                if rng.gen_bool(0.5) {
                    *v = -*v;
                }
            }
        }
        if vals.iter().any(|&v| v > 0.0) && vals.iter().any(|&v| v < 0.0) {
            return Sequence::new(window, vals).expect("finite samples");
        }
    }
}

fn sample_window(k: usize) -> LatticeWindow {
    LatticeWindow::new(SAMPLE_RADII[k % SAMPLE_RADII.len()]).expect("positive radius")
}

fn describe(u: &Sequence) -> String {
    format!("N={} max|u|={}", u.radius(), u.max_abs())
}

/// `|FD - ⟨I'(u), v⟩| / max(|⟨I'(u), v⟩|, Σ_n |∇I(u)(n) v(n)|)` for the central
/// difference with `h = 1e-6 ‖u‖₂ / ‖v‖₂`.
pub fn finite_difference_error(
    u: &Sequence,
    v: &Sequence,
    coeff: &CoefficientProfile,
    params: &ProblemParams,
) -> Result<f64> {
    let exact = pairing(u, v, coeff, params)?;
    let g = gradient(u, coeff, params)?;
    let spread: f64 = g.values().iter().zip(v.values()).map(|(a, b)| (a * b).abs()).sum();
    let nu = u.dot(u)?.sqrt();
    let nv = v.dot(v)?.sqrt();
    let h = 1e-6 * nu.max(f64::MIN_POSITIVE) / nv.max(f64::MIN_POSITIVE);
    let plus = energy_unchecked(&u.combine(1.0, v, h)?, coeff, params).total;
    let minus = energy_unchecked(&u.combine(1.0, v, -h)?, coeff, params).total;
    let fd = (plus - minus) / (2.0 * h);
    let scale = exact.abs().max(spread).max(f64::MIN_POSITIVE);
    Ok((fd - exact).abs() / scale)
}

pub fn gradient_suite(params: &ProblemParams, samples: usize, seed: u64) -> Result<Vec<CheckRow>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = Worst::new("gradient_fd");
    for k in 0..samples {
        let w = sample_window(k);
        let coeff = CoefficientProfile::unit(w);
        let u = random_sequence(w, &mut rng);
        let v = random_sequence(w, &mut rng);
        let err = finite_difference_error(&u, &v, &coeff, params)?;
        worst.see(GRADIENT_TOL - err, || format!("sample={k} {} rel_err={err}", describe(&u)));
    }
    Ok(vec![worst.tolerant(0.0)])
}

pub fn decomposition_suite(params: &ProblemParams, samples: usize, seed: u64) -> Result<Vec<CheckRow>> {
    params.require_even_p()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = [
        Worst::new("decomposition_energy"),
        Worst::new("decomposition_pairing_plus"),
        Worst::new("decomposition_pairing_minus"),
    ];
    for k in 0..samples {
        let w = sample_window(k);
        let coeff = CoefficientProfile::unit(w);
        let u = random_sign_changing(w, &mut rng);
        let res = decomposition_residuals(&u, &coeff, params)?.relative();
        for (row, r) in rows.iter_mut().zip(res) {
            row.see(DECOMPOSITION_TOL - r, || format!("sample={k} {} rel_residual={r}", describe(&u)));
        }
    }
    Ok(rows.into_iter().map(|w| w.tolerant(0.0)).collect())
}

/// Even exponents for which the combinatorial checks are run.
pub const THETA_EXPONENTS: [usize; 4] = [2, 4, 6, 8];

pub fn inequality_suite(params: &ProblemParams, samples: usize, seed: u64) -> Result<Vec<CheckRow>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    let (q, r) = (params.q, params.r);

    let mut scalar = Worst::new("scalar_log");
    for k in 0..10_000usize {
        let tau = 10f64.powf(rng.gen_range(-3.0..3.0));
        if (tau - 1.0).abs() < 1e-6 {
            continue;
        }
        let v = scalar_log_inequality(tau, q, r)?;
        scalar.see(v, || format!("sample={k} tau={tau}"));
    }
    rows.push(scalar.strict());

    for variant in ThetaVariant::ALL {
        let mut worst = Worst::new(variant.name());
        for _ in 0..samples {
            let (s, t) = (rng.gen_range(0.0..3.0), rng.gen_range(0.0..3.0));
            for p in THETA_EXPONENTS {
                let h = (p / 2) as i64;
                for i in 0..=h {
                    for j in 0..=h {
                        let th = theta(&ThetaInputs { p, i, j, s, t }, variant)?;
                        worst.see(th.value / th.scale.max(f64::MIN_POSITIVE), || {
                            format!("p={p} i={i} j={j} s={s} t={t}")
                        });
                    }
                }
            }
        }
        rows.push(worst.tolerant(THETA_TOL));
    }

    let mut ratio = Worst::new("theta_ratio");
    for _ in 0..samples {
        let v: [f64; 4] = std::array::from_fn(|_| rng.gen_range(0.1..3.0));
        for p in THETA_EXPONENTS {
            let h = (p / 2) as i64;
            for i in 0..=h {
                for j in 0..=h {
                    let th = theta_ratio(p, i, j, v[0], v[1], v[2], v[3])?;
                    ratio.see(th.value / th.scale.max(f64::MIN_POSITIVE), || {
                        format!("p={p} i={i} j={j} s1={} s2={} t1={} t2={}", v[0], v[1], v[2], v[3])
                    });
                }
            }
        }
    }
    rows.push(ratio.tolerant(THETA_TOL));

    let mut prime = Worst::new("theta_prime");
    for p in THETA_EXPONENTS {
        let h = (p / 2) as i64;
        for i in 0..=h {
            for j in 0..=h {
                let v = theta_prime(p, i, j)?;
                prime.see(-v.abs(), || format!("p={p} i={i} j={j}"));
            }
        }
    }
    rows.push(prime.tolerant(0.0));

    if params.even_p() {
        let mut worst = Worst::new("lemma22_slack");
        for k in 0..samples {
            let w = sample_window(k);
            let coeff = CoefficientProfile::unit(w);
            let u = random_sign_changing(w, &mut rng);
            let (s, t) = (rng.gen_range(0.0..3.0), rng.gen_range(0.0..3.0));
            let sl = lemma22_slack(&u, s, t, &coeff, params)?;
            worst.see(sl.relative(), || format!("sample={k} {} s={s} t={t}", describe(&u)));
        }
        rows.push(worst.tolerant(ENERGY_INEQUALITY_TOL));
    }

    let mut ray = Worst::new("corollary23_slack");
    for k in 0..samples {
        let w = sample_window(k);
        let coeff = CoefficientProfile::unit(w);
        let u = random_sequence(w, &mut rng);
        let t = rng.gen_range(0.0..3.0);
        let sl = corollary23_slack(&u, t, &coeff, params)?.slack;
        ray.see(sl.relative(), || format!("sample={k} {} t={t}", describe(&u)));
    }
    rows.push(ray.tolerant(ENERGY_INEQUALITY_TOL));

    let mut growth = Worst::new("growth_bound");
    for eps in [1.0, 0.1, 0.01] {
        let fit = growth_bound_fit(params, eps, GROWTH_SAMPLE_RANGE)?;
        for _ in 0..samples {
            let t = 10f64.powf(rng.gen_range(-12.0..3.0));
            let lhs = t.powf(q - 1.0) * (r * t.ln()).abs();
            let rhs = eps * t.powf(params.p - 1.0) + fit.c_epsilon * t.powf(params.zeta - 1.0);
            growth.see((rhs - lhs) / rhs, || format!("epsilon={eps} t={t} c_epsilon={}", fit.c_epsilon));
        }
    }
    rows.push(growth.tolerant(1e-12));

    let mut quotient = Worst::new("decreasing_quotient");
    for _ in 0..samples {
        let a = 10f64.powf(rng.gen_range(-2.0..2.0));
        if (a - 1.0).abs() < 1e-3 {
            continue;
        }
        let x1 = rng.gen_range(0.05..5.0);
        let x2 = x1 + rng.gen_range(0.01..1.0);
        let (f1, f2) = (decreasing_quotient(a, x1), decreasing_quotient(a, x2));
        quotient.see((f1 - f2) / f1.abs().max(f2.abs()), || format!("a={a} x1={x1} x2={x2}"));
    }
    rows.push(quotient.strict());

    Ok(rows)
}

/// Runs the selected suites; the decomposition suite is skipped under `All`
/// when `p` is not an even integer.
pub fn run_suite(suite: Suite, params: &ProblemParams, samples: usize, seed: u64) -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    if matches!(suite, Suite::Gradient | Suite::All) {
        rows.extend(gradient_suite(params, samples, seed)?);
    }
    if suite == Suite::Decomposition || (suite == Suite::All && params.even_p()) {
        rows.extend(decomposition_suite(params, samples, seed.wrapping_add(1))?);
    }
    if matches!(suite, Suite::Inequalities | Suite::All) {
        rows.extend(inequality_suite(params, samples, seed.wrapping_add(2))?);
    }
    Ok(rows)
}
