//! Scaling a profile onto the Nehari set and its sign-changing part onto the
//! two-constraint set, with fiber-maximum certificates.
//!
//! ```text
//! cargo run --release --example nehari_projection
//! ```

use dplap::nehari::{project_sign_changing_multistart, ray_sign_changes, DEFAULT_PROJECTION_TOL};
use dplap::{
    fiber_max_check, nehari_norm_lower_bound, project_nehari, project_sign_changing, weighted_norm_p,
    CoefficientProfile, LatticeWindow, ProblemParams, Sequence,
};

fn main() -> dplap::Result<()> {
    let params = ProblemParams::new(2.0, 3.0, 1.0, 4.0)?;
    let window = LatticeWindow::new(10)?;
    let coeff = CoefficientProfile::unit(window);

    let bump = Sequence::from_fn(window, |n| (-(n as f64).powi(2) / 4.0).exp())?;
    println!("g(t) changes sign {} time(s) along the ray", ray_sign_changes(&bump, &coeff, &params, 400)?);
    let pt = project_nehari(&bump, &coeff, &params, DEFAULT_PROJECTION_TOL)?;
    println!("t0={} residual={:e} I={}", pt.t0, pt.residual, pt.energy);
    let again = project_nehari(&bump.scaled(3.7), &coeff, &params, DEFAULT_PROJECTION_TOL)?;
    println!("rescaled input lands on the same point: t0·3.7 = {}", again.t0 * 3.7);
    println!("fiber excess {:e}", fiber_max_check(&pt, &coeff, &params, 401)?);

    let pair = Sequence::from_fn(window, |n| {
        let x = n as f64;
        (-(x - 2.0).powi(2)).exp() - 0.5 * (-(x + 2.0).powi(2)).exp()
    })?;
    let sc = project_sign_changing(&pair, &coeff, &params, DEFAULT_PROJECTION_TOL)?;
    println!("s0={} t0={} residuals={:?} I={}", sc.s0, sc.t0, sc.residuals, sc.energy);
    println!("fiber excess {:e}", fiber_max_check(&sc, &coeff, &params, 81)?);
    let multi = project_sign_changing_multistart(&pair, &[(0.1, 0.1), (1.0, 3.0), (5.0, 0.5)], &coeff, &params, 1e-12)?;
    println!("multi-start spread {:e}", multi.spread);

    let bound = nehari_norm_lower_bound(&coeff, &params)?;
    println!("ρ = {} (literal exponent: {}), ‖t0 u‖ = {}", bound.rho, bound.rho_literal, weighted_norm_p(&pt.u, &coeff, &params)?);
    Ok(())
}
