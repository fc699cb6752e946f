//! Windows, sequences, coefficient families and the weighted norm.
//!
//! ```text
//! cargo run --example lattice_basics
//! ```

use dplap::{
    forward_difference, lp_norm, sign_change_count, sign_split, weighted_norm_p, CoefficientProfile, LatticeWindow,
    ProblemParams, Sequence,
};

fn main() -> dplap::Result<()> {
    let params = ProblemParams::new(2.0, 3.0, 1.0, 4.0)?;
    let window = LatticeWindow::new(4)?;
    println!("window {}..{} ({} sites)", window.first(), window.last(), window.len());

    let u = Sequence::from_fn(window, |n| (-(n as f64 - 0.5).powi(2)).exp() * if n < 1 { -1.0 } else { 1.0 })?;
    let (plus, minus) = sign_split(&u);
    println!("u          = {:?}", u.values());
    println!("u+         = {:?}", plus.values());
    println!("u-         = {:?}", minus.values());
    println!("Δu         = {:?}", forward_difference(&u).values());
    println!("sign changes: {}", sign_change_count(&u));

    let unit = CoefficientProfile::unit(window);
    let poly = CoefficientProfile::appendix1(window, &params);
    for coeff in [&unit, &poly] {
        println!(
            "{:>9}: b0={} c0={} ‖u‖={:.6}",
            coeff.family(),
            coeff.b0(),
            coeff.c0(),
            weighted_norm_p(&u, coeff, &params)?
        );
    }
    println!("sup norm {:.6}, l^2 norm {:.6}", lp_norm(&u, f64::INFINITY), lp_norm(&u, 2.0));

    // q must exceed p
    println!("{}", ProblemParams::new(2.0, 1.5, 1.0, 4.0).unwrap_err());
    Ok(())
}
