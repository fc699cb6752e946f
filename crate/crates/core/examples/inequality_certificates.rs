//! Numerical certificates for the scalar and sequence inequalities behind the
//! fiber-map arguments.
//!
//! ```text
//! cargo run --release --example inequality_certificates
//! ```

use dplap::inequalities::{
    corollary23_slack, decreasing_quotient, growth_bound_fit, lemma22_slack, scalar_log_inequality, theta,
    theta_prime, ThetaInputs, ThetaVariant, GROWTH_SAMPLE_RANGE,
};
use dplap::verify::{run_suite, Suite};
use dplap::{CoefficientProfile, LatticeWindow, ProblemParams, Sequence};

fn main() -> dplap::Result<()> {
    let params = ProblemParams::new(4.0, 5.0, 1.0, 6.0)?;

    for tau in [0.01, 0.5, 0.99, 1.01, 3.0] {
        println!("r(1-τ^q) + qτ^q ln τ^r at τ={tau}: {}", scalar_log_inequality(tau, params.q, params.r)?);
    }

    let inputs = ThetaInputs { p: 4, i: 1, j: 0, s: 2.0, t: 1.0 };
    for variant in ThetaVariant::ALL {
        println!("{} {:?} = {}", variant.name(), inputs, theta(&inputs, variant)?.value);
    }
    println!("theta' (p=6, i=2, j=1) = {}", theta_prime(6, 2, 1)?);
    println!("decreasing quotient at a=2: x=1 {} x=2 {}", decreasing_quotient(2.0, 1.0), decreasing_quotient(2.0, 2.0));

    let window = LatticeWindow::new(6)?;
    let coeff = CoefficientProfile::unit(window);
    let u = Sequence::from_fn(window, |n| ((n as f64) * 0.9).cos() * (-(n as f64 / 3.0).powi(2)).exp())?;
    let two = lemma22_slack(&u, 0.7, 1.3, &coeff, &params)?;
    let one = corollary23_slack(&u, 0.7, &coeff, &params)?;
    println!("sign-split slack {:e} (relative {:e})", two.value, two.relative());
    println!("single-ray slack {:e}, closed-form remainder {:e}", one.slack.value, one.remainder);

    let fit = growth_bound_fit(&params, 0.1, GROWTH_SAMPLE_RANGE)?;
    println!("growth bound: ε={} C_ε={} peak at t={}", fit.epsilon, fit.c_epsilon, fit.argmax);

    for row in run_suite(Suite::Inequalities, &params, 200, 7)? {
        println!("{:>22} min slack {:>12.3e} {}", row.check, row.min_slack, if row.pass { "pass" } else { "FAIL" });
    }
    Ok(())
}
