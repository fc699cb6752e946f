//! Multi-start projected descent for the ground-state level `c* = inf_𝒩 I`
//! and the sign-changing level `m* = inf_ℳ I`.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::energy::{energy_unchecked, gradient_unchecked};
use crate::error::{Error, Result};
use crate::lattice::{
    norm_pow_unchecked, sign_change_count, sign_split, CoefficientProfile, LatticeWindow, ProblemParams,
    Sequence,
};
use crate::nehari::{
    cone_residuals, nehari_residual, project_nehari, project_sign_changing, DEFAULT_PROJECTION_TOL,
};

pub const MIN_STEP: f64 = 1e-14;
const ENERGY_SLACK: f64 = 1e-12;
/// Energy changes below this (relative) are treated as roundoff; such steps
/// must also lower the stationarity residual to be accepted.
const ENERGY_NOISE: f64 = 1e-13;
const STEP_GROWTH: f64 = 2.0;
/// Upper bound on the step along the preconditioned direction. At or below
/// one half the linearized update is a totally nonnegative tridiagonal map,
/// so it cannot create new sign changes in the tails.
pub const MAX_STEP: f64 = 0.5;

/// Which constrained infimum to estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Ground,
    SignChanging,
}

impl Mode {
    pub fn tag(&self) -> &'static str {
        match self {
            Mode::Ground => "ground",
            Mode::SignChanging => "sign_changing",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveConfig {
    pub radius: usize,
    pub starts: usize,
    pub max_iter: usize,
    /// Initial step as a multiple of `‖u‖ / max(1, ‖d‖∞)` for the first search
    /// direction `d`.
    pub step0: f64,
    pub tol_grad: f64,
    pub tol_proj: f64,
    pub seed: u64,
}

impl SolveConfig {
    pub fn new(radius: usize) -> Self {
        Self {
            radius,
            starts: 16,
            max_iter: 5000,
            step0: 1e-2,
            tol_grad: 1e-8,
            tol_proj: DEFAULT_PROJECTION_TOL,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.radius < 1 {
            return Err(Error::InvalidWindow(self.radius));
        }
        if self.starts < 1 || self.max_iter < 1 {
            return Err(Error::Config("starts and max_iter must be at least 1".into()));
        }
        for (name, v) in [("step0", self.step0), ("tol_grad", self.tol_grad), ("tol_proj", self.tol_proj)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub mode: Mode,
    pub minimizer: Sequence,
    /// Estimate of `c*` or `m*`.
    pub energy: f64,
    /// `‖∇I‖∞ / max(1, ‖u‖^(p-1))` at the minimizer.
    pub stationarity: f64,
    /// Membership residual (largest of the two for the sign-changing set).
    pub residual: f64,
    pub sign_changes: usize,
    pub iterations: usize,
    pub converged: bool,
    /// Index of the start that produced the minimizer.
    pub start: usize,
    /// One line per start.
    pub diagnostics: Vec<String>,
}

/// `‖∇I(u)‖∞ / max(1, ‖u‖^(p-1))`.
pub fn stationarity_residual(u: &Sequence, coeff: &CoefficientProfile, params: &ProblemParams) -> Result<f64> {
    coeff.check_window(u)?;
    Ok(stationarity_unchecked(u, coeff, params))
}

fn stationarity_unchecked(u: &Sequence, coeff: &CoefficientProfile, params: &ProblemParams) -> f64 {
    let g = gradient_unchecked(u, coeff, params).max_abs();
    let norm = norm_pow_unchecked(u, coeff, params.p).powf((params.p - 1.0) / params.p);
    g / norm.max(1.0)
}

fn project(
    u: &Sequence,
    coeff: &CoefficientProfile,
    params: &ProblemParams,
    mode: Mode,
    tol: f64,
) -> Result<(Sequence, f64)> {
    match mode {
        Mode::Ground => project_nehari(u, coeff, params, tol).map(|pt| (pt.u, pt.energy)),
        Mode::SignChanging => project_sign_changing(u, coeff, params, tol).map(|pt| (pt.u, pt.energy)),
    }
}

fn membership_residual(u: &Sequence, coeff: &CoefficientProfile, params: &ProblemParams, mode: Mode) -> f64 {
    match mode {
        Mode::Ground => nehari_residual(u, coeff, params),
        Mode::SignChanging => {
            let r = cone_residuals(u, coeff, params);
            r[0].max(r[1])
        }
    }
}

/// Magnitudes below this fraction of `‖u‖∞` are clamped in the preconditioner.
const PRECONDITIONER_FLOOR: f64 = 1e-4;

/// Gradient scaled by the inverse of the diagonal of the Hessian of `‖u‖^p / p`,
/// `(p-1) (a(n-1)|Δu(n-1)|^(p-2) + a(n)|Δu(n)|^(p-2) + b(n)|u(n)|^(p-2))`,
/// with magnitudes clamped away from zero.
fn search_direction(u: &Sequence, coeff: &CoefficientProfile, params: &ProblemParams) -> Sequence {
    let g = gradient_unchecked(u, coeff, params);
    let p = params.p;
    let floor = PRECONDITIONER_FLOOR * u.max_abs();
    let weight = |x: f64| {
        if p == 2.0 {
            1.0
        } else {
            x.abs().max(floor).powf(p - 2.0)
        }
    };
    Sequence::from_fn(u.window(), |n| {
        let d = coeff.a(n - 1) * weight(u.difference_at(n - 1))
            + coeff.a(n) * weight(u.difference_at(n))
            + coeff.b(n) * weight(u.get(n));
        g.get(n) / ((p - 1.0) * d)
    })
    .expect("finite direction")
}

/// An accepted descent step.
#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub u: Sequence,
    pub energy: f64,
    /// The step length that was accepted.
    pub step: f64,
}

/// One projected descent step from an on-manifold `u`: move against the
/// preconditioned gradient, re-project, and halve the step until the energy
/// does not increase by more than `1e-12 |I(u)|`. When the energy change is
/// at roundoff level the step must also reduce the stationarity residual.
pub fn descent_step(
    u: &Sequence,
    step: f64,
    coeff: &CoefficientProfile,
    params: &ProblemParams,
    mode: Mode,
    tol_proj: f64,
) -> Result<Step> {
    coeff.check_window(u)?;
    let e0 = energy_unchecked(u, coeff, params).total;
    let d = search_direction(u, coeff, params);
    if d.is_zero() {
        return Ok(Step { u: u.clone(), energy: e0, step });
    }
    let stat0 = stationarity_unchecked(u, coeff, params);
    descend_along(u, e0, stat0, &d, step, coeff, params, mode, tol_proj)
}

#[allow(clippy::too_many_arguments)]
fn descend_along(
    u: &Sequence,
    e0: f64,
    stat0: f64,
    d: &Sequence,
    step: f64,
    coeff: &CoefficientProfile,
    params: &ProblemParams,
    mode: Mode,
    tol_proj: f64,
) -> Result<Step> {
    let mut h = step.min(MAX_STEP);
    while h >= MIN_STEP {
        let trial = u.combine(1.0, d, -h)?;
        if let Ok((v, e)) = project(&trial, coeff, params, mode, tol_proj) {
            let clear_decrease = e < e0 - ENERGY_NOISE * e0.abs();
            if clear_decrease
                || (e <= e0 + ENERGY_SLACK * e0.abs() && stationarity_unchecked(&v, coeff, params) < stat0)
            {
                return Ok(Step { u: v, energy: e, step: h });
            }
        }
        h *= 0.5;
    }
    Err(Error::Stalled(MIN_STEP))
}

struct StartOutcome {
    u: Sequence,
    energy: f64,
    stationarity: f64,
    residual: f64,
    iterations: usize,
    converged: bool,
    note: String,
}

fn run_start(
    seed_profile: &Sequence,
    coeff: &CoefficientProfile,
    params: &ProblemParams,
    config: &SolveConfig,
    mode: Mode,
) -> Result<StartOutcome> {
    let (mut u, mut energy) = project(seed_profile, coeff, params, mode, config.tol_proj)?;
    let mut step = f64::NAN;
    let mut stationarity = stationarity_unchecked(&u, coeff, params);
    let mut iterations = 0;
    let mut note = String::from("max_iter reached");
    while stationarity > config.tol_grad {
        if iterations >= config.max_iter {
            break;
        }
        let d = search_direction(&u, coeff, params);
        if step.is_nan() {
            let norm = norm_pow_unchecked(&u, coeff, params.p).powf(1.0 / params.p);
            step = config.step0 * norm / d.max_abs().max(1.0);
        }
        match descend_along(&u, energy, stationarity, &d, step, coeff, params, mode, config.tol_proj) {
            Ok(next) => {
                u = next.u;
                energy = next.energy;
                step = next.step * STEP_GROWTH;
            }
            Err(Error::Stalled(_)) => {
                note = "stalled".into();
                break;
            }
            Err(e) => return Err(e),
        }
        iterations += 1;
        stationarity = stationarity_unchecked(&u, coeff, params);
    }
    let converged = stationarity <= config.tol_grad;
    if converged {
        note = "converged".into();
    }
    let residual = membership_residual(&u, coeff, params, mode);
    Ok(StartOutcome { u, energy, stationarity, residual, iterations, converged, note })
}

fn bump(center: f64, width: f64, amplitude: f64) -> impl Fn(i64) -> f64 {
    move |n| {
        let z = (n as f64 - center) / width;
        amplitude * (-z * z).exp()
    }
}

/// Signed offset `±round(r · U³)` for uniform `U`, concentrating random
/// centres near the origin at every window size.
fn near_origin(rng: &mut ChaCha8Rng, r: i64) -> i64 {
    let x: f64 = rng.gen();
    let m = (r as f64 * x * x * x).round() as i64;
    if rng.gen_bool(0.5) {
        m
    } else {
        -m
    }
}

/// Small sites in the order 0, -1, 1, -2, 2, ...
fn spiral(k: usize) -> i64 {
    let m = k.div_ceil(2) as i64;
    if k % 2 == 1 {
        -m
    } else {
        m
    }
}

const STRUCTURED_GROUND: usize = 6;

/// Spike pairs `(positive site, negative site)` tried before random pairs:
/// separations one to three near the origin, both orientations.
const STRUCTURED_PAIRS: [(i64, i64); 14] = [
    (0, 1),
    (1, 0),
    (-1, 0),
    (0, -1),
    (-1, 1),
    (1, -1),
    (0, 2),
    (2, 0),
    (-2, 0),
    (0, -2),
    (-1, 2),
    (2, -1),
    (-2, 1),
    (1, -2),
];

/// Starting profile number `k` for the ground-state search: unit spikes at
/// the sites nearest the origin first, then random bumps and spikes.
pub fn ground_seed(window: LatticeWindow, seed: u64, k: usize) -> Sequence {
    let r = window.radius() as i64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(k as u64));
    let (center, width) = if k == 1 {
        (0, 1.0)
    } else if k < STRUCTURED_GROUND {
        (spiral(k.saturating_sub(1)).clamp(-r, r), 0.0)
    } else {
        let c = near_origin(&mut rng, r / 2);
        let w = if rng.gen_bool(0.5) { rng.gen_range(0.5..3.0) } else { 0.0 };
        (c, w)
    };
    if width == 0.0 {
        Sequence::spike(window, center, 1.0).expect("centre inside the window")
    } else {
        Sequence::from_fn(window, bump(center as f64, width, 1.0)).expect("finite bump")
    }
}

/// Starting profile number `k` for the sign-changing search: a positive and a
/// negative bump at separation at least one. Close spike pairs near the
/// origin and one widely separated pair come first.
pub fn sign_changing_seed(window: LatticeWindow, seed: u64, k: usize) -> Sequence {
    let r = window.radius() as i64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(k as u64));
    loop {
        let structured = match k {
            0 => Some(STRUCTURED_PAIRS[0]),
            1 => Some((-(r / 3), (r / 3).max(1))),
            _ => STRUCTURED_PAIRS.get(k - 1).copied(),
        }
        .map(|(a, b)| (a.clamp(-r, r), b.clamp(-r, r)))
        .filter(|(a, b)| a != b);
        let (pos, neg, width) = match structured {
            Some((a, b)) => (a, b, 0.0),
            None => {
                let sep = 1 + near_origin(&mut rng, r / 2).abs();
                let left = near_origin(&mut rng, r / 2).clamp(-r, r - sep);
                let w = if rng.gen_bool(0.5) { rng.gen_range(0.5..2.0) } else { 0.0 };
                if rng.gen_bool(0.5) {
                    (left, left + sep, w)
                } else {
                    (left + sep, left, w)
                }
            }
        };
        let u = if width == 0.0 {
            Sequence::from_fn(window, |m| {
                if m == pos {
                    1.0
                } else if m == neg {
                    -1.0
                } else {
                    0.0
                }
            })
        } else {
            let a = bump(pos as f64, width, 1.0);
            let b = bump(neg as f64, width, 1.0);
            Sequence::from_fn(window, |m| a(m) - b(m))
        }
        .expect("finite seed");
        let (up, um) = sign_split(&u);
        if !up.is_zero() && !um.is_zero() {
            return u;
        }
    }
}

fn minimize(coeff: &CoefficientProfile, params: &ProblemParams, config: &SolveConfig, mode: Mode) -> Result<SolveResult> {
    config.validate()?;
    if coeff.radius() != config.radius {
        return Err(Error::WindowMismatch { expected: config.radius, actual: coeff.radius() });
    }
    let window = coeff.window();
    let outcomes: Vec<Result<StartOutcome>> = (0..config.starts)
        .into_par_iter()
        .map(|k| {
            let seed = match mode {
                Mode::Ground => ground_seed(window, config.seed, k),
                Mode::SignChanging => sign_changing_seed(window, config.seed, k),
            };
            run_start(&seed, coeff, params, config, mode)
        })
        .collect();

    let mut diagnostics = Vec::with_capacity(outcomes.len());
    let mut best: Option<(usize, &StartOutcome)> = None;
    for (k, outcome) in outcomes.iter().enumerate() {
        match outcome {
            Ok(o) => {
                diagnostics.push(format!(
                    "start {k}: {} energy={} stationarity={:e} iterations={}",
                    o.note, o.energy, o.stationarity, o.iterations
                ));
                if o.converged && best.is_none_or(|(_, b)| o.energy < b.energy) {
                    best = Some((k, o));
                }
            }
            Err(e) => diagnostics.push(format!("start {k}: failed: {e}")),
        }
    }
    let Some((start, o)) = best else {
        return Err(Error::NoConvergedStart { starts: config.starts, diagnostics });
    };
    Ok(SolveResult {
        mode,
        minimizer: o.u.clone(),
        energy: o.energy,
        stationarity: o.stationarity,
        residual: o.residual,
        sign_changes: sign_change_count(&o.u),
        iterations: o.iterations,
        converged: o.converged,
        start,
        diagnostics,
    })
}

/// Lowest converged energy over `config.starts` projected descents on `𝒩`.
pub fn minimize_ground_state(
    coeff: &CoefficientProfile,
    params: &ProblemParams,
    config: &SolveConfig,
) -> Result<SolveResult> {
    minimize(coeff, params, config, Mode::Ground)
}

/// Lowest converged energy over `config.starts` projected descents on `ℳ`.
pub fn minimize_sign_changing(
    coeff: &CoefficientProfile,
    params: &ProblemParams,
    config: &SolveConfig,
) -> Result<SolveResult> {
    minimize(coeff, params, config, Mode::SignChanging)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticeWindow;

    fn setup(radius: usize) -> (CoefficientProfile, ProblemParams) {
        let w = LatticeWindow::new(radius).unwrap();
        (CoefficientProfile::unit(w), ProblemParams::new(2.0, 3.0, 1.0, 4.0).unwrap())
    }

    #[test]
    fn zero_has_zero_stationarity() {
        let (c, params) = setup(3);
        assert_eq!(stationarity_residual(&Sequence::zeros(c.window()), &c, &params).unwrap(), 0.0);
    }

    #[test]
    fn descent_step_does_not_raise_energy() {
        let (c, params) = setup(6);
        let u = Sequence::embed(c.window(), -2, &[0.2, 0.9, 1.1, 0.4, 0.1]).unwrap();
        let pt = project_nehari(&u, &c, &params, 1e-10).unwrap();
        let step = descent_step(&pt.u, 0.5, &c, &params, Mode::Ground, 1e-10).unwrap();
        assert!(step.energy <= pt.energy * (1.0 + 1e-12));
        assert!(nehari_residual(&step.u, &c, &params) <= 1e-10);
    }

    #[test]
    fn small_ground_state_converges() {
        let (c, params) = setup(12);
        let mut cfg = SolveConfig::new(12);
        cfg.starts = 4;
        let res = minimize_ground_state(&c, &params, &cfg).unwrap();
        assert!(res.converged && res.energy > 0.0);
        assert_eq!(res.sign_changes, 0);
        let spike = project_nehari(&Sequence::spike(c.window(), 0, 1.0).unwrap(), &c, &params, 1e-10).unwrap();
        assert!(res.energy <= spike.energy);
    }

    #[test]
    fn seeds_are_reproducible() {
        let w = LatticeWindow::new(10).unwrap();
        for k in 0..6 {
            assert_eq!(ground_seed(w, 9, k), ground_seed(w, 9, k));
            let s = sign_changing_seed(w, 9, k);
            assert_eq!(s, sign_changing_seed(w, 9, k));
            assert!(sign_change_count(&s) >= 1);
        }
    }

    #[test]
    fn window_mismatch_rejected() {
        let (c, params) = setup(5);
        let cfg = SolveConfig::new(6);
        assert!(matches!(minimize_ground_state(&c, &params, &cfg), Err(Error::WindowMismatch { .. })));
    }
}
