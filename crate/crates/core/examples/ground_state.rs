//! Multi-start projected descent for the ground-state level on both
//! coefficient families, and its stability under doubling the window.
//!
//! ```text
//! cargo run --release --example ground_state
//! ```

use dplap::{minimize_ground_state, weighted_norm_p, CoefficientProfile, LatticeWindow, ProblemParams, SolveConfig};

fn main() -> dplap::Result<()> {
    let params = ProblemParams::new(2.0, 3.0, 1.0, 4.0)?;
    for family in ["constant", "polynomial"] {
        for radius in [64, 128] {
            let window = LatticeWindow::new(radius)?;
            let coeff = if family == "constant" {
                CoefficientProfile::unit(window)
            } else {
                CoefficientProfile::appendix1(window, &params)
            };
            let res = minimize_ground_state(&coeff, &params, &SolveConfig::new(radius))?;
            println!(
                "{family:>10} N={radius}: c*≈{} stationarity={:.2e} iterations={} ‖u‖={:.6} peak at {}",
                res.energy,
                res.stationarity,
                res.iterations,
                weighted_norm_p(&res.minimizer, &coeff, &params)?,
                peak(res.minimizer.values()) as i64 - radius as i64,
            );
        }
    }
    Ok(())
}

fn peak(values: &[f64]) -> usize {
    (0..values.len()).max_by(|&a, &b| values[a].abs().total_cmp(&values[b].abs())).unwrap_or(0)
}
