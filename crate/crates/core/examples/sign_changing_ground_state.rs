//! The least-energy sign-changing solution and the comparison with twice the
//! ground-state level, across a range of exponents.
//!
//! ```text
//! cargo run --release --example sign_changing_ground_state
//! ```

use dplap::{
    minimize_ground_state, minimize_sign_changing, sign_split, weighted_norm_pow, CoefficientProfile,
    LatticeWindow, ProblemParams, SolveConfig,
};

fn main() -> dplap::Result<()> {
    let window = LatticeWindow::new(32)?;
    let coeff = CoefficientProfile::unit(window);
    let config = SolveConfig::new(32);
    for (p, q) in [(2.0, 3.0), (2.0, 4.0), (2.5, 3.5), (4.0, 5.0)] {
        let params = ProblemParams::new(p, q, 1.0, q + 1.0)?;
        let c = minimize_ground_state(&coeff, &params, &config)?;
        let m = minimize_sign_changing(&coeff, &params, &config)?;
        let (plus, minus) = sign_split(&m.minimizer);
        let floor = (1.0 / p - 1.0 / q)
            * (weighted_norm_pow(&plus, &coeff, &params)? + weighted_norm_pow(&minus, &coeff, &params)?);
        println!(
            "p={p} q={q}: c*≈{:.10} m*≈{:.10} m*-2c*={:+.3e} sign changes={} coercivity floor={:.6}",
            c.energy,
            m.energy,
            m.energy - 2.0 * c.energy,
            m.sign_changes,
            floor
        );
    }
    Ok(())
}
