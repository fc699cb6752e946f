//! Finitely supported sequences on a symmetric integer window, forward
//! differences, sign splitting, weighted norms and coefficient families.
//!
//! A [`Sequence`] on the window `{-N, ..., N}` stands for a function on the
//! whole integer lattice that vanishes for `|n| > N`. Every difference-based
//! quantity therefore also sees the two boundary differences
//! `Δu(-N-1) = u(-N)` and `Δu(N) = -u(N)`.

use std::fmt;

use crate::error::{Error, Result};

/// The symmetric window `{-N, ..., N}` with zero ghost values outside.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LatticeWindow {
    radius: usize,
}

impl LatticeWindow {
    pub fn new(radius: usize) -> Result<Self> {
        if radius < 1 {
            return Err(Error::InvalidWindow(radius));
        }
        Ok(Self { radius })
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    /// Number of sites, `2N + 1`.
    pub fn len(&self) -> usize {
        2 * self.radius + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn first(&self) -> i64 {
        -(self.radius as i64)
    }

    pub fn last(&self) -> i64 {
        self.radius as i64
    }

    /// Sites of the window in increasing order.
    pub fn sites(&self) -> impl Iterator<Item = i64> {
        self.first()..=self.last()
    }

    pub fn contains(&self, n: i64) -> bool {
        n.unsigned_abs() as usize <= self.radius
    }

    /// Storage index of site `n`. Panics outside the window.
    pub fn index(&self, n: i64) -> usize {
        assert!(self.contains(n), "site {n} outside window of radius {}", self.radius);
        (n + self.radius as i64) as usize
    }

    pub fn site(&self, index: usize) -> i64 {
        index as i64 - self.radius as i64
    }
}

/// A real sequence on a [`LatticeWindow`], zero outside it.
#[derive(Debug, Clone, PartialEq)]
pub struct Sequence {
    window: LatticeWindow,
    values: Vec<f64>,
}

impl Sequence {
    /// Wraps `values` (indexed from `-N` to `N`). Rejects wrong lengths and
    /// non-finite entries.
    pub fn new(window: LatticeWindow, values: Vec<f64>) -> Result<Self> {
        if values.len() != window.len() {
            return Err(Error::LengthMismatch { len: values.len(), radius: window.radius() });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { site: window.site(i) });
        }
        Ok(Self { window, values })
    }

    pub fn zeros(window: LatticeWindow) -> Self {
        Self { window, values: vec![0.0; window.len()] }
    }

    /// Builds a sequence by evaluating `f` at every site.
    pub fn from_fn(window: LatticeWindow, f: impl FnMut(i64) -> f64) -> Result<Self> {
        Self::new(window, window.sites().map(f).collect())
    }

    /// Places `values` starting at site `start`; all other sites are zero.
    pub fn embed(window: LatticeWindow, start: i64, values: &[f64]) -> Result<Self> {
        let mut out = Self::zeros(window);
        for (k, &v) in values.iter().enumerate() {
            let n = start + k as i64;
            if !window.contains(n) {
                return Err(Error::WindowTooSmall {
                    required: n.unsigned_abs() as usize,
                    actual: window.radius(),
                });
            }
            out.values[window.index(n)] = v;
        }
        Self::new(window, out.values)
    }

    /// A single spike `u(site) = value`.
    pub fn spike(window: LatticeWindow, site: i64, value: f64) -> Result<Self> {
        Self::embed(window, site, &[value])
    }

    pub fn window(&self) -> LatticeWindow {
        self.window
    }

    pub fn radius(&self) -> usize {
        self.window.radius()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Value at site `n`; zero outside the window.
    pub fn get(&self, n: i64) -> f64 {
        if self.window.contains(n) {
            self.values[self.window.index(n)]
        } else {
            0.0
        }
    }

    /// `Δu(n) = u(n+1) - u(n)` for any `n`, using zero ghosts.
    pub fn difference_at(&self, n: i64) -> f64 {
        self.get(n + 1) - self.get(n)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self { window: self.window, values: self.values.iter().map(|v| v * factor).collect() }
    }

    /// `s * self + t * other` on a shared window.
    pub fn combine(&self, s: f64, other: &Sequence, t: f64) -> Result<Self> {
        ensure_same_window(self, other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| s * a + t * b)
            .collect();
        Self::new(self.window, values)
    }

    /// `u⁺` with `u⁺(n) = max(u(n), 0)`.
    pub fn positive_part(&self) -> Self {
        Self { window: self.window, values: self.values.iter().map(|&v| v.max(0.0)).collect() }
    }

    /// `u⁻` with `u⁻(n) = min(u(n), 0)`.
    pub fn negative_part(&self) -> Self {
        Self { window: self.window, values: self.values.iter().map(|&v| v.min(0.0)).collect() }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Plain `l²` inner product over the window.
    pub fn dot(&self, other: &Sequence) -> Result<f64> {
        ensure_same_window(self, other)?;
        Ok(self.values.iter().zip(&other.values).map(|(a, b)| a * b).sum())
    }
}

pub(crate) fn ensure_same_window(u: &Sequence, v: &Sequence) -> Result<()> {
    if u.radius() != v.radius() {
        return Err(Error::WindowMismatch { expected: u.radius(), actual: v.radius() });
    }
    Ok(())
}

/// Exponents of the problem: `1 < p < q < zeta`, `r >= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemParams {
    pub p: f64,
    pub q: f64,
    pub r: f64,
    pub zeta: f64,
}

impl ProblemParams {
    pub fn new(p: f64, q: f64, r: f64, zeta: f64) -> Result<Self> {
        let all_finite = [p, q, r, zeta].iter().all(|x| x.is_finite());
        if !all_finite {
            return Err(Error::InvalidParams("exponents must be finite".into()));
        }
        if !(p > 1.0) {
            return Err(Error::InvalidParams(format!("need p > 1, got p = {p}")));
        }
        if !(q > p) {
            return Err(Error::InvalidParams(format!("need q > p, got p = {p}, q = {q}")));
        }
        if !(zeta > q) {
            return Err(Error::InvalidParams(format!("need zeta > q, got q = {q}, zeta = {zeta}")));
        }
        if !(r >= 1.0) {
            return Err(Error::InvalidParams(format!("need r >= 1, got r = {r}")));
        }
        Ok(Self { p, q, r, zeta })
    }

    /// Parameters with `q <= p` allowed. Used by the divergent-series
    /// construction, where `1 < q <= 2 = p`, and when reading dumps.
    pub fn new_unordered(p: f64, q: f64, r: f64, zeta: f64) -> Result<Self> {
        if !(p > 1.0 && q > 1.0 && r >= 1.0 && zeta > q) {
            return Err(Error::InvalidParams(format!(
                "need p > 1, q > 1, r >= 1, zeta > q; got p = {p}, q = {q}, r = {r}, zeta = {zeta}"
            )));
        }
        Ok(Self { p, q, r, zeta })
    }

    /// True iff `p / 2` is a positive integer.
    pub fn even_p(&self) -> bool {
        self.half_p().is_some()
    }

    /// `p / 2` when `p` is an even positive integer.
    pub fn half_p(&self) -> Option<usize> {
        let half = self.p / 2.0;
        if half >= 1.0 && half.fract() == 0.0 && half < 1e6 {
            Some(half as usize)
        } else {
            None
        }
    }

    pub fn require_even_p(&self) -> Result<usize> {
        self.half_p().ok_or(Error::OddP(self.p))
    }
}

/// Which named family a [`CoefficientProfile`] was built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoefficientFamily {
    /// `a`, `b`, `c` constant.
    Constant,
    /// `a(n) = b(n) = |n|^(p-1)`, `c(n) = |n|^(q-1)` away from the origin.
    Appendix1,
    /// Loaded from a file or overridden site by site.
    Custom,
}

impl CoefficientFamily {
    pub fn tag(&self) -> &'static str {
        match self {
            Self::Constant => "constant",
            Self::Appendix1 => "appendix1",
            Self::Custom => "custom",
        }
    }
}

impl fmt::Display for CoefficientFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl std::str::FromStr for CoefficientFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "constant" => Ok(Self::Constant),
            "appendix1" | "polynomial" => Ok(Self::Appendix1),
            "custom" => Ok(Self::Custom),
            other => Err(Error::Config(format!("unknown profile '{other}'"))),
        }
    }
}

/// Weights `a`, `b`, `c` tabulated on a window.
///
/// `a` is stored on `{-N-1, ..., N}` because the difference sum reaches one
/// site left of the window; `b` and `c` on the window itself.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientProfile {
    window: LatticeWindow,
    a: Vec<f64>,
    b: Vec<f64>,
    c: Vec<f64>,
    b0: f64,
    c0: f64,
    family: CoefficientFamily,
    c1_infinite: bool,
    c2_infinite: bool,
}

impl CoefficientProfile {
    /// Tabulates `f(n) = (a(n), b(n), c(n))`; `b` and `c` are only read on the window.
    pub fn from_fn(
        window: LatticeWindow,
        family: CoefficientFamily,
        f: impl Fn(i64) -> (f64, f64, f64),
    ) -> Result<Self> {
        let a = (window.first() - 1..=window.last()).map(|n| f(n).0).collect();
        let (b, c) = window.sites().map(|n| { let (_, b, c) = f(n); (b, c) }).unzip();
        Self::from_tables(window, family, a, b, c)
    }

    fn from_tables(
        window: LatticeWindow,
        family: CoefficientFamily,
        a: Vec<f64>,
        b: Vec<f64>,
        c: Vec<f64>,
    ) -> Result<Self> {
        let lo = window.first();
        for (k, &v) in a.iter().enumerate() {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::NonPositiveCoefficient { name: "a", site: lo - 1 + k as i64, value: v });
            }
        }
        for (name, table) in [("b", &b), ("c", &c)] {
            for (k, &v) in table.iter().enumerate() {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(Error::NonPositiveCoefficient { name, site: lo + k as i64, value: v });
                }
            }
        }
        let b0 = b.iter().copied().fold(f64::INFINITY, f64::min);
        let c0 = c.iter().copied().fold(0.0, f64::max);
        Ok(Self { window, a, b, c, b0, c0, family, c1_infinite: false, c2_infinite: false })
    }

    /// `a ≡ a0`, `b ≡ b0`, `c ≡ c0`.
    pub fn constant(window: LatticeWindow, a: f64, b: f64, c: f64) -> Result<Self> {
        Self::from_fn(window, CoefficientFamily::Constant, |_| (a, b, c))
    }

    /// `a ≡ b ≡ c ≡ 1`.
    pub fn unit(window: LatticeWindow) -> Self {
        Self::constant(window, 1.0, 1.0, 1.0).expect("unit coefficients are positive")
    }

    /// The polynomial family used by the divergent-series construction:
    /// `a(n) = b(n) = |n|^(p-1)` for `|n| >= p-1` (else 1) and
    /// `c(n) = |n|^(q-1)` for `|n| >= q-1` (else 1).
    pub fn appendix1(window: LatticeWindow, params: &ProblemParams) -> Self {
        let (p, q) = (params.p, params.q);
        let mut profile = Self::from_fn(window, CoefficientFamily::Appendix1, |n| {
            let m = n.unsigned_abs() as f64;
            let ab = if m >= p - 1.0 { m.powf(p - 1.0) } else { 1.0 };
            let c = if m >= q - 1.0 { m.powf(q - 1.0) } else { 1.0 };
            (ab, ab, c)
        })
        .expect("appendix1 coefficients are positive");
        // b(n) -> infinity, but c is unbounded and not summable
        profile.c1_infinite = true;
        profile.c2_infinite = false;
        profile
    }

    /// Replaces the weights at the listed sites and marks the profile custom.
    pub fn with_overrides(&self, overrides: &[(i64, f64, f64, f64)]) -> Result<Self> {
        let mut a = self.a.clone();
        let mut b = self.b.clone();
        let mut c = self.c.clone();
        let lo = self.window.first();
        for &(n, av, bv, cv) in overrides {
            if n < lo - 1 || n > self.window.last() {
                continue;
            }
            a[(n - lo + 1) as usize] = av;
            if self.window.contains(n) {
                let i = self.window.index(n);
                b[i] = bv;
                c[i] = cv;
            }
        }
        Self::from_tables(self.window, CoefficientFamily::Custom, a, b, c)
    }

    pub fn window(&self) -> LatticeWindow {
        self.window
    }

    pub fn radius(&self) -> usize {
        self.window.radius()
    }

    pub fn family(&self) -> CoefficientFamily {
        self.family
    }

    /// Smallest `b(n)` on the window.
    pub fn b0(&self) -> f64 {
        self.b0
    }

    /// Largest `c(n)` on the window.
    pub fn c0(&self) -> f64 {
        self.c0
    }

    /// Whether the untruncated family satisfies `b >= b0 > 0` with `b(n) -> ∞`.
    pub fn satisfies_c1_on_lattice(&self) -> bool {
        self.c1_infinite
    }

    /// Whether the untruncated family satisfies `c <= c0` with `Σ c(n) < ∞`.
    pub fn satisfies_c2_on_lattice(&self) -> bool {
        self.c2_infinite
    }

    /// `a(n)` for `n ∈ {-N-1, ..., N}`.
    pub fn a(&self, n: i64) -> f64 {
        self.a[(n - self.window.first() + 1) as usize]
    }

    pub fn b(&self, n: i64) -> f64 {
        self.b[self.window.index(n)]
    }

    pub fn c(&self, n: i64) -> f64 {
        self.c[self.window.index(n)]
    }

    /// `a` on `{-N-1, ..., N}`.
    pub(crate) fn a_table(&self) -> &[f64] {
        &self.a
    }

    pub(crate) fn b_table(&self) -> &[f64] {
        &self.b
    }

    pub(crate) fn c_table(&self) -> &[f64] {
        &self.c
    }

    pub(crate) fn check_window(&self, u: &Sequence) -> Result<()> {
        if u.radius() != self.radius() {
            return Err(Error::WindowMismatch { expected: self.radius(), actual: u.radius() });
        }
        Ok(())
    }
}

/// `|x|^e` with `0^e = 0` for `e > 0`.
#[inline]
pub(crate) fn pow_abs(x: f64, e: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else if e == 2.0 {
        x * x
    } else {
        x.abs().powf(e)
    }
}

/// `φ_p(x) = |x|^(p-2) x`, continuously extended by `φ_p(0) = 0`.
#[inline]
pub(crate) fn phi_p(x: f64, p: f64) -> f64 {
    if p == 2.0 {
        x
    } else if x == 0.0 {
        0.0
    } else {
        x.signum() * x.abs().powf(p - 1.0)
    }
}

/// `Δu` on the window: `Δu(n) = u(n+1) - u(n)` with `u(N+1) = 0`.
///
/// The left boundary difference `Δu(-N-1) = u(-N)` is not part of the
/// returned window; norm routines include it separately.
pub fn forward_difference(u: &Sequence) -> Sequence {
    let values = u.window.sites().map(|n| u.difference_at(n)).collect();
    Sequence { window: u.window, values }
}

/// `(u⁺, u⁻)` with `u = u⁺ + u⁻`.
pub fn sign_split(u: &Sequence) -> (Sequence, Sequence) {
    (u.positive_part(), u.negative_part())
}

/// `‖u‖^p = Σ_{n=-N-1}^{N} a(n)|Δu(n)|^p + Σ_{n=-N}^{N} b(n)|u(n)|^p`.
pub(crate) fn norm_pow_unchecked(u: &Sequence, coeff: &CoefficientProfile, p: f64) -> f64 {
    let vals = u.values();
    let a = coeff.a_table();
    let b = coeff.b_table();
    let len = vals.len();
    let mut diff_sum = a[0] * pow_abs(vals[0], p);
    for i in 0..len {
        let next = if i + 1 < len { vals[i + 1] } else { 0.0 };
        diff_sum += a[i + 1] * pow_abs(next - vals[i], p);
    }
    let mass: f64 = vals.iter().zip(b).map(|(&v, &bn)| bn * pow_abs(v, p)).sum();
    diff_sum + mass
}

/// The weighted norm `‖u‖ = (Σ a|Δu|^p + b|u|^p)^(1/p)`.
pub fn weighted_norm_p(u: &Sequence, coeff: &CoefficientProfile, params: &ProblemParams) -> Result<f64> {
    coeff.check_window(u)?;
    Ok(norm_pow_unchecked(u, coeff, params.p).powf(1.0 / params.p))
}

/// `‖u‖^p`, avoiding the final root.
pub fn weighted_norm_pow(u: &Sequence, coeff: &CoefficientProfile, params: &ProblemParams) -> Result<f64> {
    coeff.check_window(u)?;
    Ok(norm_pow_unchecked(u, coeff, params.p))
}

/// `ℓ^κ` norm over the window; `kappa = f64::INFINITY` gives the sup norm.
pub fn lp_norm(u: &Sequence, kappa: f64) -> f64 {
    if kappa.is_infinite() {
        return u.max_abs();
    }
    assert!(kappa >= 1.0, "lp_norm requires kappa >= 1, got {kappa}");
    let m = u.max_abs();
    if m == 0.0 {
        return 0.0;
    }
    // scale by the sup norm to keep large exponents from overflowing
    let s: f64 = u.values().iter().map(|v| (v.abs() / m).powf(kappa)).sum();
    m * s.powf(1.0 / kappa)
}

/// Number of sign changes between consecutive nonzero entries.
pub fn sign_change_count(u: &Sequence) -> usize {
    let mut last = 0.0f64;
    let mut count = 0;
    for &v in u.values() {
        if v == 0.0 {
            continue;
        }
        if last != 0.0 && (v > 0.0) != (last > 0.0) {
            count += 1;
        }
        last = v;
    }
    count
}

/// The divergent-log-series counterexample truncated to the window:
/// `u(n) = 1 / (|n| ln|n|)` for `|n| >= p + 2`, zero otherwise, with the
/// [`CoefficientProfile::appendix1`] weights.
pub fn appendix1_profile(params: &ProblemParams, radius: usize) -> Result<(Sequence, CoefficientProfile)> {
    let required = appendix1_first_site(params.p);
    if (radius as i64) < required {
        return Err(Error::WindowTooSmall { required: required as usize, actual: radius });
    }
    let window = LatticeWindow::new(radius)?;
    let u = Sequence::from_fn(window, |n| appendix1_value(params.p, n))?;
    Ok((u, CoefficientProfile::appendix1(window, params)))
}

/// Smallest `|n|` with `|n| >= p + 2`.
pub(crate) fn appendix1_first_site(p: f64) -> i64 {
    (p + 2.0).ceil() as i64
}

pub(crate) fn appendix1_value(p: f64, n: i64) -> f64 {
    let m = n.unsigned_abs() as f64;
    if m >= p + 2.0 {
        1.0 / (m * m.ln())
    } else {
        0.0
    }
}
