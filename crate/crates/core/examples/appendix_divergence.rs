//! A finite-norm sequence whose logarithmic sum diverges when q <= 2: the
//! partial sums fall without bound while the norm sums settle.
//!
//! ```text
//! cargo run --release --example appendix_divergence
//! ```

use dplap::inequalities::appendix1_checkpoints;
use dplap::{appendix1_profile, weighted_norm_p, ProblemParams};

fn main() -> dplap::Result<()> {
    let params = ProblemParams::new_unordered(2.0, 2.0, 1.0, 3.0)?;
    let (u, coeff) = appendix1_profile(&params, 20)?;
    println!("u on 4..=8: {:?}", &u.values()[24..29]);
    println!("truncated norm at N=20: {}", weighted_norm_p(&u, &coeff, &params)?);

    let radii: Vec<usize> = (1..=6).map(|k| 10usize.pow(k)).collect();
    println!("{:>8} {:>20} {:>20} {:>20}", "N", "S_N", "a-sum", "b-sum");
    for s in appendix1_checkpoints(&params, &radii)? {
        println!("{:>8} {:>20.12} {:>20.12} {:>20.12}", s.radius, s.log_sum, s.difference_sum, s.mass_sum);
    }
    Ok(())
}
