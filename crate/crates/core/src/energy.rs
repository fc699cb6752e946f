//! The energy functional, its derivative pairing and gradient, the fiber maps
//! along rays and sign-split cones, and the binomial decomposition residuals.

use crate::error::{Error, Result};
use crate::lattice::{
    ensure_same_window, norm_pow_unchecked, phi_p, pow_abs, sign_split, CoefficientProfile,
    ProblemParams, Sequence,
};

/// `|x|^q ln|x|^r`, zero at `x = 0`.
#[inline]
pub(crate) fn log_density(x: f64, q: f64, r: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        let m = x.abs();
        r * m.powf(q) * m.ln()
    }
}

/// `|x|^(q-2) x ln|x|^r`, zero at `x = 0`.
#[inline]
pub(crate) fn log_force(x: f64, q: f64, r: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        let m = x.abs();
        x.signum() * r * m.powf(q - 1.0) * m.ln()
    }
}

/// `I(u)` and its pieces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyReport {
    /// `I(u)`.
    pub total: f64,
    /// `(1/p) ‖u‖^p`.
    pub norm_term: f64,
    /// `(r/q²) Σ c |u|^q`.
    pub q_term: f64,
    /// `(1/q) Σ c |u|^q ln|u|^r`.
    pub log_term: f64,
    /// `⟨I'(u), u⟩`.
    pub pairing_self: f64,
}

impl EnergyReport {
    pub const CSV_HEADER: &'static str = "total,norm_term,q_term,log_term,pairing_self";

    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.total, self.norm_term, self.q_term, self.log_term, self.pairing_self
        )
    }
}

/// Sums that determine the whole ray `t ↦ I(tu)` in closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RaySums {
    /// `‖u‖^p`.
    pub norm_pow: f64,
    /// `Σ c |u|^q`.
    pub q_mass: f64,
    /// `Σ c |u|^q ln|u|^r`.
    pub log_mass: f64,
    p: f64,
    q: f64,
    r: f64,
}

impl RaySums {
    pub fn new(u: &Sequence, coeff: &CoefficientProfile, params: &ProblemParams) -> Result<Self> {
        coeff.check_window(u)?;
        Ok(Self::new_unchecked(u, coeff, params))
    }

    pub(crate) fn new_unchecked(u: &Sequence, coeff: &CoefficientProfile, params: &ProblemParams) -> Self {
        let (q, r) = (params.q, params.r);
        let mut q_mass = 0.0;
        let mut log_mass = 0.0;
        for (&v, &c) in u.values().iter().zip(coeff.c_table()) {
            q_mass += c * pow_abs(v, q);
            log_mass += c * log_density(v, q, r);
        }
        Self { norm_pow: norm_pow_unchecked(u, coeff, params.p), q_mass, log_mass, p: params.p, q, r }
    }

    /// `Σ c |tu|^q ln|tu|^r` for `t > 0`.
    fn log_mass_at(&self, t: f64) -> f64 {
        t.powf(self.q) * (self.log_mass + self.r * self.q_mass * t.ln())
    }

    /// `g(t) = ⟨I'(tu), tu⟩`.
    pub fn g(&self, t: f64) -> f64 {
        if t == 0.0 {
            return 0.0;
        }
        t.powf(self.p) * self.norm_pow - self.log_mass_at(t)
    }

    /// `g(t) / t^p = ‖u‖^p - t^(q-p) (Σ c|u|^q ln|u|^r + r ln t Σ c|u|^q)`.
    pub fn g_scaled(&self, t: f64) -> f64 {
        self.norm_pow - t.powf(self.q - self.p) * (self.log_mass + self.r * self.q_mass * t.ln())
    }

    /// `I(tu)`.
    pub fn energy(&self, t: f64) -> f64 {
        if t == 0.0 {
            return 0.0;
        }
        let tq = t.powf(self.q);
        t.powf(self.p) * self.norm_pow / self.p + self.r / (self.q * self.q) * tq * self.q_mass
            - self.log_mass_at(t) / self.q
    }
}

/// Evaluates `I(u)` with its term breakdown.
pub fn energy(u: &Sequence, coeff: &CoefficientProfile, params: &ProblemParams) -> Result<EnergyReport> {
    coeff.check_window(u)?;
    Ok(energy_unchecked(u, coeff, params))
}

pub(crate) fn energy_unchecked(u: &Sequence, coeff: &CoefficientProfile, params: &ProblemParams) -> EnergyReport {
    let sums = RaySums::new_unchecked(u, coeff, params);
    let (p, q, r) = (params.p, params.q, params.r);
    let norm_term = sums.norm_pow / p;
    let q_term = r / (q * q) * sums.q_mass;
    let log_term = sums.log_mass / q;
    EnergyReport {
        total: norm_term + q_term - log_term,
        norm_term,
        q_term,
        log_term,
        pairing_self: sums.norm_pow - sums.log_mass,
    }
}

/// `⟨I'(u), v⟩`.
pub fn pairing(u: &Sequence, v: &Sequence, coeff: &CoefficientProfile, params: &ProblemParams) -> Result<f64> {
    coeff.check_window(u)?;
    ensure_same_window(u, v)?;
    Ok(pairing_unchecked(u, v, coeff, params))
}

pub(crate) fn pairing_unchecked(
    u: &Sequence,
    v: &Sequence,
    coeff: &CoefficientProfile,
    params: &ProblemParams,
) -> f64 {
    let (p, q, r) = (params.p, params.q, params.r);
    let lo = u.window().first();
    let mut diff = 0.0;
    for n in lo - 1..=u.window().last() {
        let dv = v.difference_at(n);
        if dv != 0.0 {
            diff += coeff.a(n) * phi_p(u.difference_at(n), p) * dv;
        }
    }
    let mut local = 0.0;
    for ((&un, &vn), (&b, &c)) in u
        .values()
        .iter()
        .zip(v.values())
        .zip(coeff.b_table().iter().zip(coeff.c_table()))
    {
        local += b * phi_p(un, p) * vn - c * log_force(un, q, r) * vn;
    }
    diff + local
}

/// Residual of the lattice equation,
/// `-Δ(a(n-1) φ_p(Δu(n-1))) + b(n) φ_p(u(n)) - c(n) |u|^(q-2) u ln|u|^r`,
/// so that `Σ gradient(u)(n) v(n) = ⟨I'(u), v⟩`.
pub fn gradient(u: &Sequence, coeff: &CoefficientProfile, params: &ProblemParams) -> Result<Sequence> {
    coeff.check_window(u)?;
    Ok(gradient_unchecked(u, coeff, params))
}

pub(crate) fn gradient_unchecked(u: &Sequence, coeff: &CoefficientProfile, params: &ProblemParams) -> Sequence {
    let (p, q, r) = (params.p, params.q, params.r);
    let vals = u.values();
    let len = vals.len();
    let a = coeff.a_table();
    // flux[k] = a(n) φ_p(Δu(n)) for n = k - N - 1, k = 0..=len
    let mut flux = Vec::with_capacity(len + 1);
    flux.push(a[0] * phi_p(vals[0], p));
    for i in 0..len {
        let next = if i + 1 < len { vals[i + 1] } else { 0.0 };
        flux.push(a[i + 1] * phi_p(next - vals[i], p));
    }
    let out = (0..len)
        .map(|i| {
            let b = coeff.b_table()[i];
            let c = coeff.c_table()[i];
            (flux[i] - flux[i + 1]) + b * phi_p(vals[i], p) - c * log_force(vals[i], q, r)
        })
        .collect();
    Sequence::new(u.window(), out).expect("gradient of a finite sequence is finite")
}

/// `g(t) = ⟨I'(tu), tu⟩`, evaluated directly from the pairing.
pub fn fiber_g(u: &Sequence, t: f64, coeff: &CoefficientProfile, params: &ProblemParams) -> Result<f64> {
    if t < 0.0 {
        return Err(Error::NegativeScale(t));
    }
    coeff.check_window(u)?;
    let tu = u.scaled(t);
    Ok(pairing_unchecked(&tu, &tu, coeff, params))
}

/// `(h1, h2) = (⟨I'(su⁺ + tu⁻), su⁺⟩, ⟨I'(su⁺ + tu⁻), tu⁻⟩)`, evaluated directly
/// from the pairing of the composite profile.
pub fn fiber_h(
    u: &Sequence,
    s: f64,
    t: f64,
    coeff: &CoefficientProfile,
    params: &ProblemParams,
) -> Result<(f64, f64)> {
    if s < 0.0 {
        return Err(Error::NegativeScale(s));
    }
    if t < 0.0 {
        return Err(Error::NegativeScale(t));
    }
    coeff.check_window(u)?;
    let (up, um) = sign_split(u);
    let sp = up.scaled(s);
    let tm = um.scaled(t);
    let w = sp.combine(1.0, &tm, 1.0)?;
    Ok((pairing_unchecked(&w, &sp, coeff, params), pairing_unchecked(&w, &tm, coeff, params)))
}

/// Binomial coefficient `C_n^k`, zero when `k < 0`, `k > n` or `n < 0`.
pub fn binomial(n: i64, k: i64) -> f64 {
    if n < 0 || k < 0 || k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for m in 0..k {
        acc = acc * (n - m) as f64 / (m + 1) as f64;
    }
    acc.round()
}

/// Cross sums of the binomial expansion of `|Δu⁺ + Δu⁻|^p` at one site.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct CrossSums {
    /// energy, `i ∈ [1, p/2-1]`, `j ∈ [0, i]`
    pub e_inner: f64,
    /// energy, `i = p/2`, `j ∈ [0, p/2-1]`
    pub e_top: f64,
    /// `⟨·, u⁺⟩`, `i ∈ [1, p/2-1]`, `j ∈ [0, i]`
    pub s_inner: f64,
    /// shared by both pairings, `i ∈ [1, p/2]`, `j ∈ [0, i-1]`
    pub s_shift: f64,
    /// `⟨·, u⁻⟩`, `i ∈ [1, p/2-1]`, `j ∈ [1, i]`
    pub t_inner: f64,
    /// `⟨·, u⁻⟩`, `j ∈ [1, p/2-1]`
    pub t_top: f64,
}

impl CrossSums {
    pub(crate) fn at(half: usize, x: f64, y: f64) -> Self {
        let h = half as i64;
        let p = 2 * h;
        let mono = |k: i64| x.powi((p - k) as i32) * y.powi(k as i32);
        let two = |e: i64| 2f64.powi(e as i32);
        let mut out = Self::default();
        for i in 1..h {
            for j in 0..=i {
                out.e_inner += binomial(h, i) * binomial(i, j) * two(i - j) * mono(i + j);
                out.s_inner += binomial(h - 1, i) * binomial(i, j) * two(i - j) * mono(i + j);
            }
            for j in 1..=i {
                out.t_inner += binomial(h - 1, i - 1) * binomial(i - 1, j - 1) * two(i - j) * mono(i + j);
            }
        }
        for j in 0..h {
            out.e_top += binomial(h, j) * two(h - j) * x.powi((h - j) as i32) * y.powi((h + j) as i32);
        }
        for i in 1..=h {
            for j in 0..i {
                out.s_shift += binomial(h - 1, i - 1) * binomial(i - 1, j) * two(i - 1 - j) * mono(i + j);
            }
        }
        for j in 1..h {
            out.t_top += binomial(h - 1, j - 1) * two(h - j) * x.powi((h - j) as i32) * y.powi((h + j) as i32);
        }
        out
    }
}

/// Absolute and relative residuals of the three sign-split identities for
/// `I(u)`, `⟨I'(u), u⁺⟩` and `⟨I'(u), u⁻⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecompositionResiduals {
    pub energy: f64,
    pub plus: f64,
    pub minus: f64,
    /// Sum of absolute values of all terms entering each identity.
    pub scales: [f64; 3],
}

impl DecompositionResiduals {
    /// Residuals divided by their term scales (zero scale gives zero).
    pub fn relative(&self) -> [f64; 3] {
        let rel = |r: f64, s: f64| if s > 0.0 { r / s } else { r };
        [
            rel(self.energy, self.scales[0]),
            rel(self.plus, self.scales[1]),
            rel(self.minus, self.scales[2]),
        ]
    }

    pub fn max_relative(&self) -> f64 {
        self.relative().into_iter().fold(0.0, f64::max)
    }
}

/// Checks the binomial sign-split identities for even `p`. Both sides are
/// evaluated independently: the left side by direct summation, the right side
/// from the parts `u±` plus the explicit binomial cross sums.
pub fn decomposition_residuals(
    u: &Sequence,
    coeff: &CoefficientProfile,
    params: &ProblemParams,
) -> Result<DecompositionResiduals> {
    let half = params.require_even_p()?;
    coeff.check_window(u)?;
    let p = params.p;
    let (up, um) = sign_split(u);

    let i_u = energy_unchecked(u, coeff, params).total;
    let i_p = energy_unchecked(&up, coeff, params).total;
    let i_m = energy_unchecked(&um, coeff, params).total;
    let pair_up = pairing_unchecked(u, &up, coeff, params);
    let pair_um = pairing_unchecked(u, &um, coeff, params);
    let self_p = pairing_unchecked(&up, &up, coeff, params);
    let self_m = pairing_unchecked(&um, &um, coeff, params);

    let (mut e_a, mut e_b, mut s1, mut s2, mut t1, mut t2) = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
    for n in u.window().first() - 1..=u.window().last() {
        let x = up.difference_at(n);
        let y = um.difference_at(n);
        if x == 0.0 || y == 0.0 {
            continue;
        }
        let a = coeff.a(n);
        let cs = CrossSums::at(half, x, y);
        e_a += a * cs.e_inner.abs();
        e_b += a * cs.e_top.abs();
        s1 += a * cs.s_inner.abs();
        s2 += a * cs.s_shift.abs();
        t1 += a * cs.t_inner.abs();
        t2 += a * cs.t_top.abs();
    }

    let rhs0 = i_p + i_m + e_a / p + e_b / p;
    let rhs_plus = self_p + s1 + s2;
    let rhs_minus = self_m + t1 + t2 + s2;
    Ok(DecompositionResiduals {
        energy: (i_u - rhs0).abs(),
        plus: (pair_up - rhs_plus).abs(),
        minus: (pair_um - rhs_minus).abs(),
        scales: [
            i_u.abs() + i_p.abs() + i_m.abs() + (e_a + e_b) / p,
            pair_up.abs() + self_p.abs() + s1 + s2,
            pair_um.abs() + self_m.abs() + t1 + t2 + s2,
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticeWindow;

    fn setup() -> (LatticeWindow, CoefficientProfile, ProblemParams) {
        let w = LatticeWindow::new(3).unwrap();
        (w, CoefficientProfile::unit(w), ProblemParams::new(2.0, 3.0, 1.0, 4.0).unwrap())
    }

    #[test]
    fn zero_energy() {
        let (w, c, p) = setup();
        let rep = energy(&Sequence::zeros(w), &c, &p).unwrap();
        assert_eq!(rep.total, 0.0);
        assert_eq!(rep.pairing_self, 0.0);
        assert!(gradient(&Sequence::zeros(w), &c, &p).unwrap().is_zero());
    }

    #[test]
    fn spike_energy_by_hand() {
        let (w, c, p) = setup();
        let u = Sequence::spike(w, 0, 2.0).unwrap();
        let rep = energy(&u, &c, &p).unwrap();
        let ln2 = 2f64.ln();
        let expected = 6.0 + 8.0 / 9.0 - 8.0 / 3.0 * ln2;
        assert!((rep.total - expected).abs() < 1e-14);
        assert!((rep.norm_term - 6.0).abs() < 1e-15);
        assert!((rep.q_term - 8.0 / 9.0).abs() < 1e-15);
        assert!((rep.log_term - 8.0 / 3.0 * ln2).abs() < 1e-15);
        assert!((rep.pairing_self - (12.0 - 8.0 * ln2)).abs() < 1e-14);
        assert!((rep.total - (rep.norm_term + rep.q_term - rep.log_term)).abs() < 1e-15);
    }

    #[test]
    fn spike_fiber_g_closed_form() {
        let (w, c, p) = setup();
        let u = Sequence::spike(w, 0, 2.0).unwrap();
        let closed = |t: f64| 12.0 * t * t - 8.0 * t.powi(3) * (2.0 * t).ln();
        for t in [0.25, 0.5, 1.0, 1.7, 3.0] {
            let direct = fiber_g(&u, t, &c, &p).unwrap();
            let fast = RaySums::new(&u, &c, &p).unwrap().g(t);
            assert!((direct - closed(t)).abs() < 1e-12, "t = {t}");
            assert!((fast - closed(t)).abs() < 1e-12, "t = {t}");
        }
        assert_eq!(fiber_g(&u, 0.0, &c, &p).unwrap(), 0.0);
        assert!(matches!(fiber_g(&u, -1.0, &c, &p), Err(Error::NegativeScale(_))));
    }

    #[test]
    fn pairing_zero_direction() {
        let (w, c, p) = setup();
        let u = Sequence::embed(w, -1, &[0.3, -1.2, 2.0]).unwrap();
        assert_eq!(pairing(&u, &Sequence::zeros(w), &c, &p).unwrap(), 0.0);
    }

    #[test]
    fn fiber_h_identities() {
        let (w, c, p) = setup();
        let u = Sequence::embed(w, -2, &[0.3, -1.2, 2.0, 0.0, -0.7]).unwrap();
        let (h1, h2) = fiber_h(&u, 1.0, 1.0, &c, &p).unwrap();
        let (up, um) = sign_split(&u);
        assert!((h1 - pairing(&u, &up, &c, &p).unwrap()).abs() < 1e-14);
        assert!((h2 - pairing(&u, &um, &c, &p).unwrap()).abs() < 1e-14);

        let one_signed = Sequence::embed(w, -1, &[0.3, 1.2, 2.0]).unwrap();
        let (_, h2) = fiber_h(&one_signed, 0.7, 1.9, &c, &p).unwrap();
        assert_eq!(h2, 0.0);
    }

    #[test]
    fn binomial_convention() {
        assert_eq!(binomial(4, 2), 6.0);
        assert_eq!(binomial(0, 0), 1.0);
        assert_eq!(binomial(0, -1), 0.0);
        assert_eq!(binomial(2, 3), 0.0);
        assert_eq!(binomial(-1, 0), 0.0);
        assert_eq!(binomial(30, 15), 155117520.0);
    }

    #[test]
    fn decomposition_requires_even_p() {
        let (w, c, _) = setup();
        let odd = ProblemParams::new(3.0, 4.0, 1.0, 5.0).unwrap();
        assert!(matches!(
            decomposition_residuals(&Sequence::zeros(w), &c, &odd),
            Err(Error::OddP(_))
        ));
    }

    #[test]
    fn decomposition_p2_reduces_to_polarization() {
        let (w, c, p) = setup();
        let u = Sequence::embed(w, -3, &[0.4, -1.1, 1.9, -0.2, 0.0, 0.8, -1.5]).unwrap();
        let res = decomposition_residuals(&u, &c, &p).unwrap();
        assert!(res.max_relative() < 1e-12, "{res:?}");
        // ‖u‖² = ‖u⁺‖² + ‖u⁻‖² + 2 Σ a |Δu⁺ Δu⁻|
        let (up, um) = sign_split(&u);
        let np = |v: &Sequence| crate::lattice::weighted_norm_pow(v, &c, &p).unwrap();
        let cross: f64 = (-4..=3).map(|n| (up.difference_at(n) * um.difference_at(n)).abs()).sum();
        assert!((np(&u) - np(&up) - np(&um) - 2.0 * cross).abs() < 1e-12);
    }

    #[test]
    fn decomposition_one_signed_is_trivial() {
        let (w, c, _) = setup();
        let p4 = ProblemParams::new(4.0, 5.0, 1.0, 6.0).unwrap();
        let u = Sequence::embed(w, -1, &[0.5, 1.5, 0.25]).unwrap();
        let res = decomposition_residuals(&u, &c, &p4).unwrap();
        assert!(res.max_relative() < 1e-12, "{res:?}");
    }
}
