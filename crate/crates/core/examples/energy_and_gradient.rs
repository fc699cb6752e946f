//! The energy, its pairing and gradient, the closed-form ray and the
//! sign-split decomposition.
//!
//! ```text
//! cargo run --example energy_and_gradient
//! ```

use dplap::verify::finite_difference_error;
use dplap::{
    decomposition_residuals, energy, gradient, pairing, CoefficientProfile, LatticeWindow, ProblemParams, RaySums,
    Sequence,
};

fn main() -> dplap::Result<()> {
    let params = ProblemParams::new(4.0, 5.0, 1.0, 6.0)?;
    let window = LatticeWindow::new(8)?;
    let coeff = CoefficientProfile::unit(window);
    let u = Sequence::from_fn(window, |n| 1.5 * (n as f64 / 2.0).sin() * (-(n as f64 / 4.0).powi(2)).exp())?;
    let v = Sequence::from_fn(window, |n| if (0..=3).contains(&n) { 1.0 } else { 0.0 })?;

    let rep = energy(&u, &coeff, &params)?;
    println!("I(u) = {}", rep.total);
    println!("  norm term {}, q term {}, log term {}", rep.norm_term, rep.q_term, rep.log_term);
    println!("<I'(u), u> = {}", rep.pairing_self);

    let grad = gradient(&u, &coeff, &params)?;
    println!("<I'(u), v> = {} (gradient dot: {})", pairing(&u, &v, &coeff, &params)?, grad.dot(&v)?);
    println!("finite-difference relative error: {:e}", finite_difference_error(&u, &v, &coeff, &params)?);

    let ray = RaySums::new(&u, &coeff, &params)?;
    for t in [0.5, 1.0, 2.0] {
        let direct = energy(&u.scaled(t), &coeff, &params)?.total;
        println!("t={t}: I(tu) closed form {} direct {}", ray.energy(t), direct);
    }

    let res = decomposition_residuals(&u, &coeff, &params)?;
    println!("sign-split decomposition relative residuals: {:?}", res.relative());
    Ok(())
}
