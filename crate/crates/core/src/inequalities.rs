//! Numeric certificates for the scalar, combinatorial and functional
//! inequalities behind the fiber-map arguments: the logarithmic scalar
//! inequality, the Young-type quantity Θ and its siblings, the sign-split
//! energy inequality, its single-ray specialisation, the log-growth bound
//! and the divergent partial sums of the polynomial counterexample.

use crate::energy::{binomial, energy_unchecked, pairing_unchecked, RaySums};
use crate::error::{Error, Result};
use crate::lattice::{
    appendix1_first_site, appendix1_value, norm_pow_unchecked, sign_split, CoefficientProfile,
    ProblemParams, Sequence,
};

/// A signed slack together with the magnitude of the terms that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Slack {
    pub value: f64,
    pub scale: f64,
}

impl Slack {
    /// `value / scale`, or `value` when the scale is zero.
    pub fn relative(&self) -> f64 {
        if self.scale > 0.0 {
            self.value / self.scale
        } else {
            self.value
        }
    }

    /// Nonnegative up to `tol` times the term scale.
    pub fn holds(&self, tol: f64) -> bool {
        self.value >= -tol * self.scale.max(f64::MIN_POSITIVE)
    }
}

/// `r(1 - τ^q) + q τ^q ln τ^r`, positive for `τ ≠ 1` and zero at `τ = 1`.
pub fn scalar_log_inequality(tau: f64, q: f64, r: f64) -> Result<f64> {
    if !(tau > 0.0) {
        return Err(Error::NonPositiveTau(tau));
    }
    Ok(scalar_log_unchecked(tau, q, r))
}

/// Same as [`scalar_log_inequality`] but with the `τ = 0` limit `r` allowed.
pub(crate) fn scalar_log_unchecked(tau: f64, q: f64, r: f64) -> f64 {
    if tau == 0.0 {
        return r;
    }
    let tq = tau.powf(q);
    r * (1.0 - tq) + q * tq * r * tau.ln()
}

/// `(1 - a^x) / x`, strictly decreasing in `x > 0` for `a > 0`, `a ≠ 1`.
pub fn decreasing_quotient(a: f64, x: f64) -> f64 {
    -(x * a.ln()).exp_m1() / x
}

/// Which member of the Θ family to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ThetaVariant {
    /// The general `(i, j)` quantity from the sign-split energy inequality.
    Main,
    /// The `s^(p-2i) t^(2i)` sibling (index `i`).
    Even,
    /// The `s^(p-i) t^i` sibling (index `i`).
    Single,
    /// The `s^(p/2-j) t^(p/2+j)` sibling (index `j`).
    Top,
}

impl ThetaVariant {
    pub const ALL: [ThetaVariant; 4] = [Self::Main, Self::Even, Self::Single, Self::Top];

    pub fn name(&self) -> &'static str {
        match self {
            Self::Main => "theta_main",
            Self::Even => "theta_even",
            Self::Single => "theta_single",
            Self::Top => "theta_top",
        }
    }
}

/// Arguments of Θ: even `p`, indices `0 <= i, j <= p/2`, scales `s, t >= 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaInputs {
    pub p: usize,
    pub i: i64,
    pub j: i64,
    pub s: f64,
    pub t: f64,
}

/// A Θ value and the largest absolute term in its numerator (over `2p` or `p`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaValue {
    pub value: f64,
    pub scale: f64,
}

impl ThetaValue {
    pub fn is_nonnegative(&self, tol: f64) -> bool {
        self.value >= -tol * self.scale
    }
}

fn check_theta(inputs: &ThetaInputs) -> Result<i64> {
    if inputs.p == 0 || !inputs.p.is_multiple_of(2) {
        return Err(Error::OddP(inputs.p as f64));
    }
    let half = (inputs.p / 2) as i64;
    if inputs.i < 0 || inputs.i > half || inputs.j < 0 || inputs.j > half {
        return Err(Error::IndexOutOfRange { i: inputs.i, j: inputs.j, half });
    }
    if inputs.s < 0.0 {
        return Err(Error::NegativeScale(inputs.s));
    }
    if inputs.t < 0.0 {
        return Err(Error::NegativeScale(inputs.t));
    }
    Ok(half)
}

fn finish(terms: &[f64], denom: f64) -> ThetaValue {
    let sum: f64 = terms.iter().sum();
    let scale = terms.iter().fold(0.0f64, |m, x| m.max(x.abs())) / denom;
    ThetaValue { value: sum / denom, scale }
}

/// `x^e` with `0^0 = 1`.
fn pw(x: f64, e: i64) -> f64 {
    x.powi(e as i32)
}

/// Evaluates Θ or one of its siblings exactly as the displayed rational
/// expression, with `C_n^k = 0` outside `0 <= k <= n`.
pub fn theta(inputs: &ThetaInputs, variant: ThetaVariant) -> Result<ThetaValue> {
    let h = check_theta(inputs)?;
    let p = inputs.p as i64;
    let pf = p as f64;
    let (i, j, s, t) = (inputs.i, inputs.j, inputs.s, inputs.t);
    let sp = pw(s, p);
    let tp = pw(t, p);
    let c = binomial;
    let value = match variant {
        ThetaVariant::Main => finish(
            &[
                2.0 * sp * c(h - 1, i) * c(i, j),
                sp * c(h - 1, i - 1) * c(i - 1, j),
                2.0 * tp * c(h - 1, i - 1) * c(i - 1, j - 1),
                tp * c(h - 1, i - 1) * c(i - 1, j),
                -2.0 * pw(s, p - (i + j)) * pw(t, i + j) * c(h, i) * c(i, j),
            ],
            2.0 * pf,
        ),
        ThetaVariant::Even => finish(
            &[sp * c(h - 1, i), tp * c(h - 1, i - 1), -pw(s, p - 2 * i) * pw(t, 2 * i) * c(h, i)],
            pf,
        ),
        ThetaVariant::Single => finish(
            &[
                2.0 * sp * c(h - 1, i),
                sp * c(h - 1, i - 1),
                tp * c(h - 1, i - 1),
                -2.0 * pw(s, p - i) * pw(t, i) * c(h, i),
            ],
            2.0 * pf,
        ),
        ThetaVariant::Top => finish(
            &[
                sp * c(h - 1, j),
                2.0 * tp * c(h - 1, j - 1),
                tp * c(h - 1, j),
                -2.0 * pw(s, h - j) * pw(t, h + j) * c(h, j),
            ],
            2.0 * pf,
        ),
    };
    Ok(value)
}

/// The index-only combination that the energy inequality discards; it
/// vanishes identically by Pascal-type identities.
pub fn theta_prime(p: usize, i: i64, j: i64) -> Result<f64> {
    let h = check_theta(&ThetaInputs { p, i, j, s: 0.0, t: 0.0 })?;
    let c = binomial;
    let num = 2.0 * c(h, i) * c(i, j)
        - 2.0 * c(h - 1, i) * c(i, j)
        - c(h - 1, i - 1) * c(i - 1, j)
        - 2.0 * c(h - 1, i - 1) * c(i - 1, j - 1)
        - c(h - 1, i - 1) * c(i - 1, j);
    Ok(num / (2.0 * p as f64))
}

/// Θ with `s` replaced by `s2/s1` and `t` by `t2/t1` (the uniqueness quantity).
#[allow(clippy::too_many_arguments)]
pub fn theta_ratio(p: usize, i: i64, j: i64, s1: f64, s2: f64, t1: f64, t2: f64) -> Result<ThetaValue> {
    if s1 <= 0.0 || t1 <= 0.0 {
        return Err(Error::DivisionByZeroScale);
    }
    theta(&ThetaInputs { p, i, j, s: s2 / s1, t: t2 / t1 }, ThetaVariant::Main)
}

/// `(1 - x^p)/p - (1 - x^q)/q`.
fn ray_coefficient(x: f64, p: f64, q: f64) -> f64 {
    (1.0 - x.powf(p)) / p - (1.0 - x.powf(q)) / q
}

/// Left side minus right side of the sign-split energy inequality
///
/// `I(u) >= I(su⁺+tu⁻) + (1-s^q)/q ⟨I'(u),u⁺⟩ + (1-t^q)/q ⟨I'(u),u⁻⟩
///        + A(s)‖u⁺‖^p + A(t)‖u⁻‖^p + Σ_n a(n) |Σ_{i,j} 2^(i-j) (Δu⁺)^(p-i-j) (Δu⁻)^(i+j) Θ(i,j)|`
///
/// with `A(x) = (1-x^p)/p - (1-x^q)/q`, `1 <= i <= p/2-1` and `1 <= j <= i-1`.
/// Θ depends on `(i, j)`, so it sits inside the double sum.
pub fn lemma22_slack(
    u: &Sequence,
    s: f64,
    t: f64,
    coeff: &CoefficientProfile,
    params: &ProblemParams,
) -> Result<Slack> {
    let half = params.require_even_p()?;
    if s < 0.0 {
        return Err(Error::NegativeScale(s));
    }
    if t < 0.0 {
        return Err(Error::NegativeScale(t));
    }
    coeff.check_window(u)?;
    let (p, q) = (params.p, params.q);
    let pi = 2 * half as i64;
    let (up, um) = sign_split(u);
    let w = up.combine(s, &um, t)?;

    let lhs = energy_unchecked(u, coeff, params).total;
    let i_w = energy_unchecked(&w, coeff, params).total;
    let pair_p = pairing_unchecked(u, &up, coeff, params);
    let pair_m = pairing_unchecked(u, &um, coeff, params);
    let norm_p = norm_pow_unchecked(&up, coeff, p);
    let norm_m = norm_pow_unchecked(&um, coeff, p);

    let mut theta_terms = Vec::new();
    for i in 1..half as i64 {
        for j in 1..i {
            let th = theta(&ThetaInputs { p: pi as usize, i, j, s, t }, ThetaVariant::Main)?;
            theta_terms.push((i, j, th.value));
        }
    }
    let mut theta_sum = 0.0;
    if !theta_terms.is_empty() {
        for n in u.window().first() - 1..=u.window().last() {
            let x = up.difference_at(n);
            let y = um.difference_at(n);
            if x == 0.0 || y == 0.0 {
                continue;
            }
            let inner: f64 = theta_terms
                .iter()
                .map(|&(i, j, th)| pw(2.0, i - j) * pw(x, pi - (i + j)) * pw(y, i + j) * th)
                .sum();
            theta_sum += coeff.a(n) * inner.abs();
        }
    }

    let terms = [
        i_w,
        (1.0 - s.powf(q)) / q * pair_p,
        (1.0 - t.powf(q)) / q * pair_m,
        ray_coefficient(s, p, q) * norm_p,
        ray_coefficient(t, p, q) * norm_m,
        theta_sum,
    ];
    let rhs: f64 = terms.iter().sum();
    let scale = lhs.abs() + terms.iter().map(|x| x.abs()).sum::<f64>();
    Ok(Slack { value: lhs - rhs, scale })
}

/// Slack of the single-ray inequality together with its closed-form remainder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RaySlack {
    /// `I(u) - I(tu) - (1-t^q)/q ⟨I'(u),u⟩ - A(t)‖u‖^p`, from direct evaluation.
    pub slack: Slack,
    /// `(r(1-t^q) + q t^q ln t^r) / q² · Σ c|u|^q`.
    pub remainder: f64,
}

/// `I(u) >= I(tu) + (1-t^q)/q ⟨I'(u),u⟩ + ((1-t^p)/p - (1-t^q)/q) ‖u‖^p`
/// for any `p > 1`.
pub fn corollary23_slack(
    u: &Sequence,
    t: f64,
    coeff: &CoefficientProfile,
    params: &ProblemParams,
) -> Result<RaySlack> {
    if t < 0.0 {
        return Err(Error::NegativeScale(t));
    }
    coeff.check_window(u)?;
    let (p, q, r) = (params.p, params.q, params.r);
    let rep = energy_unchecked(u, coeff, params);
    let lhs = rep.total;
    let i_t = energy_unchecked(&u.scaled(t), coeff, params).total;
    let norm = norm_pow_unchecked(u, coeff, p);
    let terms = [i_t, (1.0 - t.powf(q)) / q * rep.pairing_self, ray_coefficient(t, p, q) * norm];
    let rhs: f64 = terms.iter().sum();
    let scale = lhs.abs() + terms.iter().map(|x| x.abs()).sum::<f64>();
    let sums = RaySums::new_unchecked(u, coeff, params);
    let remainder = scalar_log_unchecked(t, q, r) / (q * q) * sums.q_mass;
    Ok(RaySlack { slack: Slack { value: lhs - rhs, scale }, remainder })
}

/// `ε`, a certified `C_ε` and `ζ` with
/// `|t|^(q-1) |ln|t|^r| <= ε |t|^(p-1) + C_ε |t|^(ζ-1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsilonBound {
    pub epsilon: f64,
    pub c_epsilon: f64,
    pub zeta: f64,
    /// Where the ratio defining `C_ε` peaks.
    pub argmax: f64,
    /// Number of sample points the bound was checked on.
    pub samples: usize,
}

impl EpsilonBound {
    /// Whether the bound holds at `t` (with relative rounding slack).
    pub fn holds_at(&self, t: f64, params: &ProblemParams) -> bool {
        let m = t.abs();
        if m == 0.0 {
            return true;
        }
        let lhs = m.powf(params.q - 1.0) * (params.r * m.ln()).abs();
        let rhs = self.epsilon * m.powf(params.p - 1.0) + self.c_epsilon * m.powf(self.zeta - 1.0);
        lhs <= rhs * (1.0 + 1e-12)
    }
}

pub const GROWTH_SAMPLES: usize = 100_000;
pub const GROWTH_SAMPLE_RANGE: f64 = 1e3;
const GROWTH_T_MIN: f64 = 1e-14;

fn growth_ratio(t: f64, params: &ProblemParams, epsilon: f64) -> f64 {
    let num = t.powf(params.q - 1.0) * (params.r * t.ln()).abs() - epsilon * t.powf(params.p - 1.0);
    num / t.powf(params.zeta - 1.0)
}

/// Smallest `C_ε` making the log-growth bound hold, found by a log-spaced
/// scan of `(0, sample_range]` followed by golden-section refinement.
pub fn growth_bound_fit(params: &ProblemParams, epsilon: f64, sample_range: f64) -> Result<EpsilonBound> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidParams(format!("epsilon must be positive, got {epsilon}")));
    }
    if !(sample_range > GROWTH_T_MIN) {
        return Err(Error::InvalidParams(format!("sample range too small: {sample_range}")));
    }
    let (lo, hi) = (GROWTH_T_MIN.ln(), sample_range.ln());
    let n = GROWTH_SAMPLES;
    let at = |k: usize| (lo + (hi - lo) * k as f64 / (n - 1) as f64).exp();
    let mut best = (0usize, f64::NEG_INFINITY);
    for k in 0..n {
        let v = growth_ratio(at(k), params, epsilon);
        if v > best.1 {
            best = (k, v);
        }
    }
    if best.0 == 0 || best.0 == n - 1 || !(best.1 > 0.0) {
        return Err(Error::MaximizationFailure);
    }
    // golden section in log t on the neighbouring cell
    let f = |x: f64| growth_ratio(x.exp(), params, epsilon);
    let (mut a, mut b) = (at(best.0 - 1).ln(), at(best.0 + 1).ln());
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..200 {
        if (b - a).abs() < 1e-15 * (1.0 + a.abs()) {
            break;
        }
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        }
    }
    let (arg, refined) = if f1 > f2 { (x1, f1) } else { (x2, f2) };
    let (argmax, c_epsilon) =
        if refined >= best.1 { (arg.exp(), refined) } else { (at(best.0), best.1) };
    let bound = EpsilonBound { epsilon, c_epsilon, zeta: params.zeta, argmax, samples: n };
    if (0..n).any(|k| !bound.holds_at(at(k), params)) {
        return Err(Error::MaximizationFailure);
    }
    Ok(bound)
}

/// Partial sums of the polynomial counterexample at radius `N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Appendix1Sums {
    pub radius: usize,
    /// `S_N = Σ_{p+2 <= |n| <= N} c(n) |u(n)|^q ln|u(n)|^r`.
    pub log_sum: f64,
    /// `Σ_{|n| <= N} a(n) |u(n+1) - u(n)|^p`, with the untruncated `u`.
    pub difference_sum: f64,
    /// `Σ_{|n| <= N} b(n) |u(n)|^p`.
    pub mass_sum: f64,
}

fn check_appendix1(params: &ProblemParams, radius: usize) -> Result<()> {
    if !(params.q > 1.0 && params.q <= 2.0) {
        return Err(Error::InvalidParams(format!(
            "divergence regime needs 1 < q <= 2, got q = {}",
            params.q
        )));
    }
    let required = appendix1_first_site(params.p);
    if (radius as i64) < required {
        return Err(Error::WindowTooSmall { required: required as usize, actual: radius });
    }
    Ok(())
}

/// `S_N` for the counterexample data; strictly decreasing and unbounded below.
pub fn appendix1_partial_sum(params: &ProblemParams, radius: usize) -> Result<f64> {
    Ok(appendix1_checkpoints(params, &[radius])?[0].log_sum)
}

/// All three partial sums at each checkpoint radius, accumulated in one pass.
pub fn appendix1_checkpoints(params: &ProblemParams, radii: &[usize]) -> Result<Vec<Appendix1Sums>> {
    let mut sorted: Vec<usize> = radii.to_vec();
    sorted.sort_unstable();
    for &r in &sorted {
        check_appendix1(params, r)?;
    }
    let (p, q, r) = (params.p, params.q, params.r);
    let weight = |m: f64, e: f64| if m >= e { m.powf(e) } else { 1.0 };
    let ab = |m: f64| weight(m, p - 1.0);
    let cw = |m: f64| weight(m, q - 1.0);
    let mut log_sum = 0.0;
    let mut difference_sum = 0.0;
    let mut mass_sum = 0.0;
    let mut out = Vec::with_capacity(sorted.len());
    let mut next = sorted.iter().peekable();
    let max = *sorted.last().unwrap_or(&0);
    for m in 0..=max as i64 {
        let mf = m as f64;
        // shell {m, -m}
        let sites: &[i64] = if m == 0 { &[0] } else { &[-m, m] };
        for &n in sites {
            let un = appendix1_value(p, n);
            if un != 0.0 {
                log_sum += cw(mf) * un.powf(q) * r * un.ln();
                mass_sum += ab(mf) * un.powf(p);
            }
            let du = appendix1_value(p, n + 1) - un;
            if du != 0.0 {
                difference_sum += ab(mf) * du.abs().powf(p);
            }
        }
        while let Some(&&radius) = next.peek() {
            if radius as i64 == m {
                out.push(Appendix1Sums { radius, log_sum, difference_sum, mass_sum });
                next.next();
            } else {
                break;
            }
        }
    }
    // preserve the caller's order
    Ok(radii
        .iter()
        .map(|r| *out.iter().find(|s| s.radius == *r).expect("checkpoint computed"))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticeWindow;

    #[test]
    fn scalar_log_examples() {
        assert_eq!(scalar_log_inequality(1.0, 3.0, 1.0).unwrap(), 0.0);
        let v = scalar_log_inequality(2.0, 3.0, 1.0).unwrap();
        assert!((v - (-7.0 + 24.0 * 2f64.ln())).abs() < 1e-13);
        assert!((v - 9.6355).abs() < 1e-4);
        let v = scalar_log_inequality(0.5, 3.0, 1.0).unwrap();
        assert!((v - (7.0 / 8.0 + 3.0 / 8.0 * 0.5f64.ln())).abs() < 1e-15);
        assert!((v - 0.6151).abs() < 1e-4);
        assert!(matches!(scalar_log_inequality(0.0, 3.0, 1.0), Err(Error::NonPositiveTau(_))));
    }

    #[test]
    fn theta_examples() {
        let th = theta(&ThetaInputs { p: 4, i: 1, j: 0, s: 2.0, t: 1.0 }, ThetaVariant::Main).unwrap();
        assert!((th.value - 17.0 / 8.0).abs() < 1e-15);
        let zero = theta(&ThetaInputs { p: 6, i: 2, j: 1, s: 0.0, t: 0.0 }, ThetaVariant::Main).unwrap();
        assert_eq!(zero.value, 0.0);
        for v in ThetaVariant::ALL {
            let eq = theta(&ThetaInputs { p: 8, i: 3, j: 2, s: 1.3, t: 1.3 }, v).unwrap();
            assert!(eq.value.abs() <= 1e-12 * eq.scale.max(1.0), "{v:?}: {eq:?}");
        }
    }

    #[test]
    fn theta_errors() {
        assert!(matches!(
            theta(&ThetaInputs { p: 3, i: 0, j: 0, s: 1.0, t: 1.0 }, ThetaVariant::Main),
            Err(Error::OddP(_))
        ));
        assert!(matches!(
            theta(&ThetaInputs { p: 4, i: 3, j: 0, s: 1.0, t: 1.0 }, ThetaVariant::Main),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(matches!(theta_ratio(4, 1, 0, 0.0, 1.0, 1.0, 1.0), Err(Error::DivisionByZeroScale)));
    }

    #[test]
    fn theta_ratio_examples() {
        let v = theta_ratio(4, 1, 0, 1.0, 2.0, 3.0, 3.0).unwrap();
        assert!((v.value - 17.0 / 8.0).abs() < 1e-15);
        let v = theta_ratio(6, 2, 1, 2.0, 3.0, 4.0, 6.0).unwrap();
        assert!(v.value.abs() < 1e-12);
    }

    #[test]
    fn theta_prime_vanishes() {
        for p in (2..=12).step_by(2) {
            for i in 0..=(p / 2) as i64 {
                for j in 0..=(p / 2) as i64 {
                    assert_eq!(theta_prime(p, i, j).unwrap(), 0.0, "p={p} i={i} j={j}");
                }
            }
        }
    }

    #[test]
    fn decreasing_quotient_is_decreasing() {
        for a in [0.1, 0.5, 2.0, 7.0] {
            let mut prev = f64::INFINITY;
            for k in 1..200 {
                let x = k as f64 * 0.05;
                let v = decreasing_quotient(a, x);
                assert!(v < prev, "a={a} x={x}");
                prev = v;
            }
        }
    }

    #[test]
    fn corollary23_spike_at_zero() {
        let w = LatticeWindow::new(2).unwrap();
        let c = CoefficientProfile::unit(w);
        let params = ProblemParams::new(2.0, 3.0, 1.0, 4.0).unwrap();
        let u = Sequence::spike(w, 0, 2.0).unwrap();
        let rs = corollary23_slack(&u, 0.0, &c, &params).unwrap();
        assert!((rs.slack.value - 8.0 / 9.0).abs() < 1e-13);
        assert!((rs.remainder - 8.0 / 9.0).abs() < 1e-15);
        let at_one = corollary23_slack(&u, 1.0, &c, &params).unwrap();
        assert_eq!(at_one.slack.value, 0.0);
    }

    #[test]
    fn lemma22_identity_point() {
        let w = LatticeWindow::new(3).unwrap();
        let c = CoefficientProfile::unit(w);
        let params = ProblemParams::new(6.0, 7.0, 1.0, 8.0).unwrap();
        let u = Sequence::embed(w, -3, &[0.3, -0.9, 1.4, -1.7, 0.2, 0.6, -0.4]).unwrap();
        let sl = lemma22_slack(&u, 1.0, 1.0, &c, &params).unwrap();
        assert_eq!(sl.value, 0.0);
        let odd = ProblemParams::new(3.0, 4.0, 1.0, 5.0).unwrap();
        assert!(matches!(lemma22_slack(&u, 1.0, 1.0, &c, &odd), Err(Error::OddP(_))));
    }

    #[test]
    fn lemma22_one_signed_matches_corollary() {
        let w = LatticeWindow::new(3).unwrap();
        let c = CoefficientProfile::unit(w);
        let params = ProblemParams::new(4.0, 5.0, 1.0, 6.0).unwrap();
        let u = Sequence::embed(w, -1, &[0.3, 1.4, 0.8]).unwrap();
        for (s, t) in [(0.5, 2.0), (1.7, 0.1), (2.5, 2.5)] {
            let l = lemma22_slack(&u, s, t, &c, &params).unwrap();
            let r = corollary23_slack(&u, s, &c, &params).unwrap();
            assert!((l.value - r.slack.value).abs() < 1e-12 * l.scale, "s={s} t={t}");
        }
    }

    #[test]
    fn growth_bound_matches_stationary_point() {
        // p=2, q=3, r=1, zeta=4, eps=1: for t > 1 the ratio is ln t / t - 1/t²,
        // stationary where t ln t = t + 2.
        let params = ProblemParams::new(2.0, 3.0, 1.0, 4.0).unwrap();
        let mut t: f64 = 4.0;
        for _ in 0..50 {
            t -= (t * t.ln() - t - 2.0) / t.ln();
        }
        let exact = t.ln() / t - 1.0 / (t * t);
        let fit = growth_bound_fit(&params, 1.0, 1e3).unwrap();
        assert!((fit.c_epsilon - exact).abs() <= 1e-10 * exact, "{} vs {exact}", fit.c_epsilon);
        assert!((fit.argmax - t).abs() < 1e-5 * t);
    }

    #[test]
    fn growth_bound_rejects_bad_epsilon() {
        let params = ProblemParams::new(2.0, 3.0, 1.0, 4.0).unwrap();
        assert!(growth_bound_fit(&params, 0.0, 1e3).is_err());
    }

    #[test]
    fn appendix1_first_shell() {
        let params = ProblemParams::new_unordered(2.0, 2.0, 1.0, 3.0).unwrap();
        let s4 = appendix1_partial_sum(&params, 4).unwrap();
        let u4 = 1.0 / (4.0 * 4f64.ln());
        let expected = 2.0 * 4.0 * u4 * u4 * u4.ln();
        assert!((s4 - expected).abs() < 1e-15, "{s4} vs {expected}");
        assert!(s4 < 0.0);
        let s100 = appendix1_partial_sum(&params, 100).unwrap();
        let s10k = appendix1_partial_sum(&params, 10_000).unwrap();
        assert!(s10k < s100);
    }

    #[test]
    fn appendix1_checks_regime() {
        let params = ProblemParams::new(2.0, 3.0, 1.0, 4.0).unwrap();
        assert!(appendix1_partial_sum(&params, 10).is_err());
        let params = ProblemParams::new_unordered(2.0, 1.5, 1.0, 3.0).unwrap();
        assert!(matches!(appendix1_partial_sum(&params, 3), Err(Error::WindowTooSmall { .. })));
    }
}
