//! Projection onto the Nehari set `𝒩 = {u ≠ 0 : ⟨I'(u), u⟩ = 0}` along rays
//! and onto the sign-changing set
//! `ℳ = {u : u± ≠ 0, ⟨I'(u), u⁺⟩ = ⟨I'(u), u⁻⟩ = 0}` along two-parameter cones,
//! with membership residuals recomputed on the returned point.

use rayon::prelude::*;

use crate::energy::{energy_unchecked, log_density, pairing_unchecked, RaySums};
use crate::error::{Error, Result};
use crate::inequalities::{growth_bound_fit, EpsilonBound, GROWTH_SAMPLE_RANGE};
use crate::lattice::{
    norm_pow_unchecked, phi_p, pow_abs, sign_split, CoefficientProfile, ProblemParams, Sequence,
};

pub const DEFAULT_PROJECTION_TOL: f64 = 1e-10;

const BRACKET_LOW: f64 = 1e-6;
const BRACKET_CAP: f64 = (1u64 << 60) as f64;
const NEWTON_MAX_ITER: usize = 200;

/// A profile on `𝒩` obtained as `t0 · u`.
#[derive(Debug, Clone, PartialEq)]
pub struct NehariPoint {
    pub u: Sequence,
    pub t0: f64,
    /// `|⟨I'(t0 u), t0 u⟩| / ‖t0 u‖^p`.
    pub residual: f64,
    pub energy: f64,
}

/// A profile on `ℳ` obtained as `s0 u⁺ + t0 u⁻`.
#[derive(Debug, Clone, PartialEq)]
pub struct SignChangingPoint {
    pub u: Sequence,
    pub s0: f64,
    pub t0: f64,
    /// `|⟨I'(w), w⁺⟩| / ‖w⁺‖^p` and `|⟨I'(w), w⁻⟩| / ‖w⁻‖^p` at the returned `w`.
    pub residuals: [f64; 2],
    pub energy: f64,
}

impl SignChangingPoint {
    pub fn max_residual(&self) -> f64 {
        self.residuals[0].max(self.residuals[1])
    }
}

/// Relative Nehari residual `|⟨I'(w), w⟩| / ‖w‖^p`.
pub(crate) fn nehari_residual(w: &Sequence, coeff: &CoefficientProfile, params: &ProblemParams) -> f64 {
    let norm = norm_pow_unchecked(w, coeff, params.p);
    if norm == 0.0 {
        return f64::INFINITY;
    }
    pairing_unchecked(w, w, coeff, params).abs() / norm
}

/// Relative residuals of both sign-split conditions at `w`.
pub(crate) fn cone_residuals(w: &Sequence, coeff: &CoefficientProfile, params: &ProblemParams) -> [f64; 2] {
    let (wp, wm) = sign_split(w);
    let one = |part: &Sequence| {
        let norm = norm_pow_unchecked(part, coeff, params.p);
        if norm == 0.0 {
            f64::INFINITY
        } else {
            pairing_unchecked(w, part, coeff, params).abs() / norm
        }
    };
    [one(&wp), one(&wm)]
}

/// Scales `u ≠ 0` onto `𝒩`: the unique `t0 > 0` with `⟨I'(t0 u), t0 u⟩ = 0`.
pub fn project_nehari(
    u: &Sequence,
    coeff: &CoefficientProfile,
    params: &ProblemParams,
    tol: f64,
) -> Result<NehariPoint> {
    coeff.check_window(u)?;
    if u.is_zero() {
        return Err(Error::ZeroSequence);
    }
    let sums = RaySums::new_unchecked(u, coeff, params);
    let t0 = ray_root(&sums)?;
    let w = u.scaled(t0);
    let residual = nehari_residual(&w, coeff, params);
    if !(residual <= tol) {
        return Err(Error::ProjectionFailure(residual, 0.0));
    }
    let energy = energy_unchecked(&w, coeff, params).total;
    Ok(NehariPoint { u: w, t0, residual, energy })
}

/// Root of `g(t)/t^p` by bracket expansion and bisection.
fn ray_root(sums: &RaySums) -> Result<f64> {
    let f = |t: f64| sums.g_scaled(t);
    let mut lo = BRACKET_LOW;
    while !(f(lo) > 0.0) {
        lo *= 0.5;
        if lo < 1.0 / BRACKET_CAP {
            return Err(Error::BracketFailure);
        }
    }
    let mut hi = 1.0f64.max(lo * 2.0);
    while !(f(hi) < 0.0) {
        lo = hi;
        hi *= 2.0;
        if hi > BRACKET_CAP {
            return Err(Error::BracketFailure);
        }
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Number of sign changes of `g(t)` over a log-spaced scan of `t ∈ [1e-12, 1e12]`.
pub fn ray_sign_changes(
    u: &Sequence,
    coeff: &CoefficientProfile,
    params: &ProblemParams,
    samples: usize,
) -> Result<usize> {
    coeff.check_window(u)?;
    if u.is_zero() {
        return Err(Error::ZeroSequence);
    }
    let sums = RaySums::new_unchecked(u, coeff, params);
    let (lo, hi) = (1e-12f64.ln(), 1e12f64.ln());
    let n = samples.max(2);
    let mut last = 0.0f64;
    let mut changes = 0;
    for k in 0..n {
        let t = (lo + (hi - lo) * k as f64 / (n - 1) as f64).exp();
        let v = sums.g_scaled(t);
        if v == 0.0 {
            continue;
        }
        if last != 0.0 && (v > 0.0) != (last > 0.0) {
            changes += 1;
        }
        last = v;
    }
    Ok(changes)
}

/// `(h1, h2)` on the cone `s u⁺ + t u⁻`, assembled from the sites where `Δu±`
/// are not both zero.
#[derive(Debug, Clone)]
pub(crate) struct ConeSystem {
    a: Vec<f64>,
    x: Vec<f64>,
    y: Vec<f64>,
    mass: [f64; 2],
    q_mass: [f64; 2],
    log_mass: [f64; 2],
    norm: [f64; 2],
    p: f64,
    q: f64,
    r: f64,
}

impl ConeSystem {
    pub(crate) fn new(u: &Sequence, coeff: &CoefficientProfile, params: &ProblemParams) -> Result<Self> {
        let (up, um) = sign_split(u);
        if up.is_zero() || um.is_zero() {
            return Err(Error::OneSigned);
        }
        let (p, q, r) = (params.p, params.q, params.r);
        let (mut a, mut x, mut y) = (Vec::new(), Vec::new(), Vec::new());
        let mut diff = [0.0; 2];
        for n in u.window().first() - 1..=u.window().last() {
            let (dx, dy) = (up.difference_at(n), um.difference_at(n));
            if dx == 0.0 && dy == 0.0 {
                continue;
            }
            let an = coeff.a(n);
            diff[0] += an * pow_abs(dx, p);
            diff[1] += an * pow_abs(dy, p);
            a.push(an);
            x.push(dx);
            y.push(dy);
        }
        let mut mass = [0.0; 2];
        let mut q_mass = [0.0; 2];
        let mut log_mass = [0.0; 2];
        for (k, &v) in u.values().iter().enumerate() {
            let side = if v > 0.0 {
                0
            } else if v < 0.0 {
                1
            } else {
                continue;
            };
            let n = u.window().site(k);
            mass[side] += coeff.b(n) * pow_abs(v, p);
            q_mass[side] += coeff.c(n) * pow_abs(v, q);
            log_mass[side] += coeff.c(n) * log_density(v, q, r);
        }
        let norm = [diff[0] + mass[0], diff[1] + mass[1]];
        Ok(Self { a, x, y, mass, q_mass, log_mass, norm, p, q, r })
    }

    /// `σ^p B - σ^q (L + r Q ln σ)` and its derivative in `σ`.
    fn local(&self, side: usize, sigma: f64) -> (f64, f64) {
        let (p, q, r) = (self.p, self.q, self.r);
        let lm = self.log_mass[side] + r * self.q_mass[side] * sigma.ln();
        let v = sigma.powf(p) * self.mass[side] - sigma.powf(q) * lm;
        let d = p * sigma.powf(p - 1.0) * self.mass[side]
            - q * sigma.powf(q - 1.0) * lm
            - sigma.powf(q - 1.0) * r * self.q_mass[side];
        (v, d)
    }

    pub(crate) fn h(&self, s: f64, t: f64) -> [f64; 2] {
        let mut h = [self.local(0, s).0, self.local(1, t).0];
        for k in 0..self.a.len() {
            let (sx, ty) = (s * self.x[k], t * self.y[k]);
            let f = self.a[k] * phi_p(sx + ty, self.p);
            h[0] += f * sx;
            h[1] += f * ty;
        }
        h
    }

    /// Normalized residual map `(h1 / (s^p ‖u⁺‖^p), h2 / (t^p ‖u⁻‖^p))` and its Jacobian.
    fn normalized_with_jacobian(&self, s: f64, t: f64) -> ([f64; 2], [[f64; 2]; 2]) {
        let p = self.p;
        let (l0, d0) = self.local(0, s);
        let (l1, d1) = self.local(1, t);
        let mut h = [l0, l1];
        let mut j = [[d0, 0.0], [0.0, d1]];
        for k in 0..self.a.len() {
            let (x, y) = (self.x[k], self.y[k]);
            let (sx, ty) = (s * x, t * y);
            let w = sx + ty;
            let f = self.a[k] * phi_p(w, p);
            let slope = if w == 0.0 { 0.0 } else { self.a[k] * (p - 1.0) * pow_abs(w, p - 2.0) };
            h[0] += f * sx;
            h[1] += f * ty;
            j[0][0] += slope * x * sx + f * x;
            j[0][1] += slope * y * sx;
            j[1][0] += slope * x * ty;
            j[1][1] += slope * y * ty + f * y;
        }
        let n0 = s.powf(p) * self.norm[0];
        let n1 = t.powf(p) * self.norm[1];
        let g = [h[0] / n0, h[1] / n1];
        let jac = [
            [j[0][0] / n0 - p * g[0] / s, j[0][1] / n0],
            [j[1][0] / n1, j[1][1] / n1 - p * g[1] / t],
        ];
        (g, jac)
    }

    pub(crate) fn normalized(&self, s: f64, t: f64) -> [f64; 2] {
        let h = self.h(s, t);
        [h[0] / (s.powf(self.p) * self.norm[0]), h[1] / (t.powf(self.p) * self.norm[1])]
    }

    /// `θ1 < θ2` with `h1, h2 > 0` at `(θ1, θ1)` and `h1, h2 < 0` at `(θ2, θ2)`.
    /// Since `h1` increases in `t` and `h2` in `s`, these diagonal signs give the
    /// full box conditions on `[θ1, θ2]²`.
    pub(crate) fn diagonal_box(&self) -> Result<(f64, f64)> {
        let mut lo = 1.0f64;
        loop {
            let h = self.h(lo, lo);
            if h[0] > 0.0 && h[1] > 0.0 {
                break;
            }
            lo *= 0.5;
            if lo < 1.0 / BRACKET_CAP {
                return Err(Error::BoxFailure);
            }
        }
        let mut hi = 1.0f64.max(2.0 * lo);
        loop {
            let h = self.h(hi, hi);
            if h[0] < 0.0 && h[1] < 0.0 {
                break;
            }
            hi *= 2.0;
            if hi > BRACKET_CAP {
                return Err(Error::BoxFailure);
            }
        }
        Ok((lo, hi))
    }

    /// Where `h1 + h2` (normalized) changes sign along the diagonal of the box.
    fn diagonal_crossing(&self, lo: f64, hi: f64) -> f64 {
        let (mut a, mut b) = (lo.ln(), hi.ln());
        for _ in 0..40 {
            let m = 0.5 * (a + b);
            let g = self.normalized(m.exp(), m.exp());
            if g[0] + g[1] > 0.0 {
                a = m;
            } else {
                b = m;
            }
        }
        (0.5 * (a + b)).exp()
    }

    /// Damped Newton on the normalized residuals, confined to the box.
    fn newton(&self, seed: (f64, f64), lo: f64, hi: f64) -> ((f64, f64), f64) {
        let (mut s, mut t) = seed;
        let (mut g, mut jac) = self.normalized_with_jacobian(s, t);
        let mut res = g[0].abs().max(g[1].abs());
        for _ in 0..NEWTON_MAX_ITER {
            if res <= 1e-15 {
                break;
            }
            let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
            if det == 0.0 || !det.is_finite() {
                break;
            }
            let ds = -(g[0] * jac[1][1] - g[1] * jac[0][1]) / det;
            let dt = -(jac[0][0] * g[1] - jac[1][0] * g[0]) / det;
            let mut lambda = 1.0;
            let mut accepted = false;
            while lambda > 1e-10 {
                let (s1, t1) = (s + lambda * ds, t + lambda * dt);
                if s1 >= lo && s1 <= hi && t1 >= lo && t1 <= hi {
                    let (g1, jac1) = self.normalized_with_jacobian(s1, t1);
                    let r1 = g1[0].abs().max(g1[1].abs());
                    if r1 < res {
                        s = s1;
                        t = t1;
                        g = g1;
                        jac = jac1;
                        res = r1;
                        accepted = true;
                        break;
                    }
                }
                lambda *= 0.5;
            }
            if !accepted {
                break;
            }
        }
        ((s, t), res)
    }

    /// Nested bisection: for each `t` the root `s(t)` of `h1(·, t)` in the box,
    /// then the root of `h2(s(t), t)` in `t`. The box conditions guarantee
    /// sign changes at both levels.
    fn nested_bisection(&self, lo: f64, hi: f64) -> (f64, f64) {
        let s_of = |t: f64| {
            let (mut a, mut b) = (lo, hi);
            for _ in 0..200 {
                let m = 0.5 * (a + b);
                if m <= a || m >= b {
                    break;
                }
                if self.h(m, t)[0] > 0.0 {
                    a = m;
                } else {
                    b = m;
                }
            }
            0.5 * (a + b)
        };
        let (mut a, mut b) = (lo, hi);
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if m <= a || m >= b {
                break;
            }
            if self.h(s_of(m), m)[1] > 0.0 {
                a = m;
            } else {
                b = m;
            }
        }
        let t = 0.5 * (a + b);
        (s_of(t), t)
    }

    /// Newton from `seed` (clamped into the box), with the nested bisection as
    /// the fallback when Newton stalls above `tol`.
    fn solve(&self, seed: Option<(f64, f64)>, tol: f64) -> Result<(f64, f64)> {
        let (lo, hi) = self.diagonal_box()?;
        let seed = match seed {
            Some((s, t)) => (s.clamp(lo, hi), t.clamp(lo, hi)),
            None => {
                let d = self.diagonal_crossing(lo, hi);
                (d, d)
            }
        };
        let (st, res) = self.newton(seed, lo, hi);
        if res <= tol * 1e-3 {
            return Ok(st);
        }
        let fallback = self.nested_bisection(lo, hi);
        let (st2, res2) = self.newton(fallback, lo, hi);
        Ok(if res2 <= res { st2 } else { st })
    }
}

fn finish_cone(
    u: &Sequence,
    (s0, t0): (f64, f64),
    coeff: &CoefficientProfile,
    params: &ProblemParams,
    tol: f64,
) -> Result<SignChangingPoint> {
    let (up, um) = sign_split(u);
    let w = up.combine(s0, &um, t0)?;
    let residuals = cone_residuals(&w, coeff, params);
    if !(residuals[0] <= tol && residuals[1] <= tol) {
        return Err(Error::ProjectionFailure(residuals[0], residuals[1]));
    }
    let energy = energy_unchecked(&w, coeff, params).total;
    Ok(SignChangingPoint { u: w, s0, t0, residuals, energy })
}

/// Scales the sign-split parts of `u` onto `ℳ`: the unique `(s0, t0)` with
/// `s0 u⁺ + t0 u⁻ ∈ ℳ`.
pub fn project_sign_changing(
    u: &Sequence,
    coeff: &CoefficientProfile,
    params: &ProblemParams,
    tol: f64,
) -> Result<SignChangingPoint> {
    coeff.check_window(u)?;
    let sys = ConeSystem::new(u, coeff, params)?;
    let st = sys.solve(None, tol)?;
    finish_cone(u, st, coeff, params, tol)
}

/// Like [`project_sign_changing`] but starting Newton from `seed`.
pub fn project_sign_changing_from(
    u: &Sequence,
    seed: (f64, f64),
    coeff: &CoefficientProfile,
    params: &ProblemParams,
    tol: f64,
) -> Result<SignChangingPoint> {
    coeff.check_window(u)?;
    let sys = ConeSystem::new(u, coeff, params)?;
    let st = sys.solve(Some(seed), tol)?;
    finish_cone(u, st, coeff, params, tol)
}

/// Projections of one profile started from several seeds.
#[derive(Debug, Clone)]
pub struct MultiStartProjection {
    pub points: Vec<SignChangingPoint>,
    /// Largest relative deviation of any `(s0, t0)` from the first start.
    pub spread: f64,
}

/// Runs the cone projection from every seed concurrently; results keep seed order.
pub fn project_sign_changing_multistart(
    u: &Sequence,
    seeds: &[(f64, f64)],
    coeff: &CoefficientProfile,
    params: &ProblemParams,
    tol: f64,
) -> Result<MultiStartProjection> {
    coeff.check_window(u)?;
    let sys = ConeSystem::new(u, coeff, params)?;
    let points = seeds
        .par_iter()
        .map(|&seed| sys.solve(Some(seed), tol).and_then(|st| finish_cone(u, st, coeff, params, tol)))
        .collect::<Result<Vec<_>>>()?;
    let spread = match points.first() {
        None => 0.0,
        Some(first) => points
            .iter()
            .map(|pt| {
                ((pt.s0 - first.s0).abs() / first.s0).max((pt.t0 - first.t0).abs() / first.t0)
            })
            .fold(0.0, f64::max),
    };
    Ok(MultiStartProjection { points, spread })
}

/// Points that maximize `I` over their own fiber.
pub trait FiberMaximum {
    /// `(max over the grid of I on the fiber - I(point)) / |I(point)|`.
    fn fiber_max_excess(&self, coeff: &CoefficientProfile, params: &ProblemParams, grid: usize) -> Result<f64>;
}

impl FiberMaximum for NehariPoint {
    /// Scans `t ∈ [0, 4]` with `grid` equally spaced points.
    fn fiber_max_excess(&self, coeff: &CoefficientProfile, params: &ProblemParams, grid: usize) -> Result<f64> {
        coeff.check_window(&self.u)?;
        let n = grid.max(2);
        let best = (0..n)
            .map(|k| 4.0 * k as f64 / (n - 1) as f64)
            .map(|t| energy_unchecked(&self.u.scaled(t), coeff, params).total)
            .fold(f64::NEG_INFINITY, f64::max);
        Ok((best - self.energy) / self.energy.abs().max(f64::MIN_POSITIVE))
    }
}

impl FiberMaximum for SignChangingPoint {
    /// Scans `(s, t) ∈ [0, 4]²` on a `grid × grid` lattice.
    fn fiber_max_excess(&self, coeff: &CoefficientProfile, params: &ProblemParams, grid: usize) -> Result<f64> {
        coeff.check_window(&self.u)?;
        let (up, um) = sign_split(&self.u);
        let n = grid.max(2);
        let axis: Vec<f64> = (0..n).map(|k| 4.0 * k as f64 / (n - 1) as f64).collect();
        let best = axis
            .par_iter()
            .map(|&s| {
                axis.iter()
                    .map(|&t| {
                        let w = up.combine(s, &um, t).expect("same window");
                        energy_unchecked(&w, coeff, params).total
                    })
                    .fold(f64::NEG_INFINITY, f64::max)
            })
            .collect::<Vec<_>>()
            .into_iter()
            .fold(f64::NEG_INFINITY, f64::max);
        Ok((best - self.energy) / self.energy.abs().max(f64::MIN_POSITIVE))
    }
}

/// Relative amount by which some fiber point exceeds the projected point's energy.
pub fn fiber_max_check<P: FiberMaximum>(
    point: &P,
    coeff: &CoefficientProfile,
    params: &ProblemParams,
    grid: usize,
) -> Result<f64> {
    point.fiber_max_excess(coeff, params, grid)
}

/// Lower bound on `‖u‖` over `𝒩` from the log-growth estimate with
/// `ε3 = b0 / (p c0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormLowerBound {
    pub growth: EpsilonBound,
    /// `X = (p-1) b0^(ζ/p) / (p c0 C_ε3)`.
    pub base: f64,
    /// `X^(1/(ζ-p))`, the bound that the coercivity estimate yields.
    pub rho: f64,
    /// `X^(ζ-p)`, the exponent as literally stated.
    pub rho_literal: f64,
}

pub fn nehari_norm_lower_bound(coeff: &CoefficientProfile, params: &ProblemParams) -> Result<NormLowerBound> {
    let (p, zeta) = (params.p, params.zeta);
    let (b0, c0) = (coeff.b0(), coeff.c0());
    let growth = growth_bound_fit(params, b0 / (p * c0), GROWTH_SAMPLE_RANGE)?;
    let base = (p - 1.0) * b0.powf(zeta / p) / (p * c0 * growth.c_epsilon);
    Ok(NormLowerBound {
        growth,
        base,
        rho: base.powf(1.0 / (zeta - p)),
        rho_literal: base.powf(zeta - p),
    })
}
