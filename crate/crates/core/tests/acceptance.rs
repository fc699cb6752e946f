//! One line per acceptance criterion; the process fails if any line does.
//!
//! ```text
//! cargo test --release --test acceptance
//! ```

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use dplap::inequalities::appendix1_checkpoints;
use dplap::nehari::{project_sign_changing_multistart, DEFAULT_PROJECTION_TOL};
use dplap::verify::{decomposition_suite, gradient_suite, inequality_suite, random_sequence, random_sign_changing};
use dplap::{
    fiber_max_check, minimize_ground_state, minimize_sign_changing, nehari_norm_lower_bound, project_nehari,
    project_sign_changing, sign_change_count, sign_split, weighted_norm_p, weighted_norm_pow, CoefficientProfile,
    LatticeWindow, ProblemParams, SolveConfig,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn check(ok: bool, what: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn headline() -> ProblemParams {
    ProblemParams::new(2.0, 3.0, 1.0, 4.0).unwrap()
}

fn criterion_1() -> Outcome {
    let mut worst = 0.0f64;
    for (p, q) in [(2.0, 3.0), (2.5, 3.5), (4.0, 5.0)] {
        let params = ProblemParams::new(p, q, 1.0, q + 1.0).unwrap();
        let row = gradient_suite(&params, 200, 1).map_err(|e| e.to_string())?.remove(0);
        check(row.samples == 200, format!("p={p}: {} samples", row.samples))?;
        let err = dplap::verify::GRADIENT_TOL - row.min_slack;
        worst = worst.max(err);
        check(row.pass, format!("p={p}: relative error {err:e} at {}", row.argmin))?;
    }
    Ok(format!("worst relative error {worst:.2e} over 3 x 200 pairs"))
}

fn criterion_2() -> Outcome {
    let mut worst = 0.0f64;
    for p in [2.0, 4.0, 6.0] {
        let params = ProblemParams::new(p, p + 1.0, 1.0, p + 2.0).unwrap();
        for row in decomposition_suite(&params, 500, 2).map_err(|e| e.to_string())? {
            worst = worst.max(dplap::verify::DECOMPOSITION_TOL - row.min_slack);
            check(row.pass && row.samples == 500, format!("p={p} {}: {}", row.check, row.argmin))?;
        }
    }
    Ok(format!("largest relative residual {worst:.2e} over 3 x 500 sign-changing samples"))
}

fn criterion_3() -> Outcome {
    let mut lines = Vec::new();
    for (p, q) in [(2.0, 3.0), (2.5, 3.5), (4.0, 5.0)] {
        let params = ProblemParams::new(p, q, 1.0, q + 1.0).unwrap();
        let rows = inequality_suite(&params, 1000, 3).map_err(|e| e.to_string())?;
        let has = |name: &str| rows.iter().any(|r| r.check == name);
        check(has("corollary23_slack") && has("theta_ratio"), format!("p={p}: missing rows"))?;
        check(has("lemma22_slack") == params.even_p(), format!("p={p}: sign-split row mismatch"))?;
        for r in &rows {
            check(r.pass, format!("p={p} {}: min slack {:e} at {}", r.check, r.min_slack, r.argmin))?;
        }
        let min = rows.iter().filter(|r| r.check.ends_with("slack")).map(|r| r.min_slack).fold(f64::INFINITY, f64::min);
        lines.push(format!("p={p}: {} checks, energy slack >= {min:.2e}", rows.len()));
    }
    Ok(lines.join("; "))
}

fn criterion_4() -> Outcome {
    let params = headline();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut res1, mut inv1, mut fib1, mut res2, mut spread2, mut fib2) = (0.0f64, 0.0f64, f64::MIN, 0.0f64, 0.0f64, f64::MIN);
    for k in 0..100 {
        let window = LatticeWindow::new([8, 32][k % 2]).unwrap();
        let coeff = CoefficientProfile::unit(window);
        let u = random_sequence(window, &mut rng);
        let pt = project_nehari(&u, &coeff, &params, DEFAULT_PROJECTION_TOL).map_err(|e| e.to_string())?;
        let lambda = 10f64.powf(rng.gen_range(-1.0..1.0));
        let again = project_nehari(&u.scaled(lambda), &coeff, &params, DEFAULT_PROJECTION_TOL).map_err(|e| e.to_string())?;
        let gap = pt.u.values().iter().zip(again.u.values()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) / pt.u.max_abs();
        res1 = res1.max(pt.residual);
        inv1 = inv1.max(gap);
        fib1 = fib1.max(fiber_max_check(&pt, &coeff, &params, 2001).map_err(|e| e.to_string())?);

        let v = random_sign_changing(window, &mut rng);
        let sc = project_sign_changing(&v, &coeff, &params, DEFAULT_PROJECTION_TOL).map_err(|e| e.to_string())?;
        let seeds: Vec<(f64, f64)> = (0..4).map(|_| (10f64.powf(rng.gen_range(-1.0..1.0)), 10f64.powf(rng.gen_range(-1.0..1.0)))).collect();
        let multi = project_sign_changing_multistart(&v, &seeds, &coeff, &params, DEFAULT_PROJECTION_TOL).map_err(|e| e.to_string())?;
        let agree = multi.points.iter().map(|m| ((m.s0 - sc.s0).abs() / sc.s0).max((m.t0 - sc.t0).abs() / sc.t0)).fold(multi.spread, f64::max);
        res2 = multi.points.iter().map(|m| m.max_residual()).fold(res2.max(sc.max_residual()), f64::max);
        spread2 = spread2.max(agree);
        fib2 = fib2.max(fiber_max_check(&sc, &coeff, &params, 81).map_err(|e| e.to_string())?);
    }
    let detail = format!(
        "ray: residual {res1:.1e}, invariance {inv1:.1e}, fiber excess {fib1:.1e}; cone: residual {res2:.1e}, multi-start spread {spread2:.1e}, fiber excess {fib2:.1e}"
    );
    check(res1 <= 1e-10 && inv1 <= 1e-8 && fib1 <= 1e-8 && res2 <= 1e-10 && spread2 <= 1e-8 && fib2 <= 1e-8, detail.clone())?;
    Ok(detail)
}

fn criterion_5() -> Outcome {
    let params = headline();
    let window = LatticeWindow::new(64).unwrap();
    let config = SolveConfig::new(64);
    let mut lines = Vec::new();
    for coeff in [CoefficientProfile::unit(window), CoefficientProfile::appendix1(window, &params)] {
        let tag = coeff.family().tag();
        let c = minimize_ground_state(&coeff, &params, &config).map_err(|e| format!("{tag}: {e}"))?;
        let m = minimize_sign_changing(&coeff, &params, &config).map_err(|e| format!("{tag}: {e}"))?;
        let bound = nehari_norm_lower_bound(&coeff, &params).map_err(|e| e.to_string())?;
        let floor = (1.0 / params.p - 1.0 / params.q) * bound.rho.powf(params.p);
        let (plus, minus) = sign_split(&m.minimizer);
        let split_floor = (1.0 / params.p - 1.0 / params.q)
            * (weighted_norm_pow(&plus, &coeff, &params).unwrap() + weighted_norm_pow(&minus, &coeff, &params).unwrap());
        for res in [&c, &m] {
            let norm = weighted_norm_p(&res.minimizer, &coeff, &params).unwrap();
            check(res.energy > 0.0, format!("{tag} {}: level {} not positive", res.mode, res.energy))?;
            check(res.converged && res.stationarity <= 1e-8, format!("{tag} {}: stationarity {:e}", res.mode, res.stationarity))?;
            check(
                norm >= bound.rho && norm >= bound.rho_literal,
                format!("{tag} {}: norm {norm} below rho {} / {}", res.mode, bound.rho, bound.rho_literal),
            )?;
        }
        let pc = project_nehari(&c.minimizer, &coeff, &params, DEFAULT_PROJECTION_TOL).unwrap();
        let pm = project_sign_changing(&m.minimizer, &coeff, &params, DEFAULT_PROJECTION_TOL).unwrap();
        let excess = fiber_max_check(&pc, &coeff, &params, 2001).unwrap().max(fiber_max_check(&pm, &coeff, &params, 81).unwrap());
        check(excess <= 1e-8, format!("{tag}: fiber excess {excess:e}"))?;
        check(m.energy >= 2.0 * c.energy - 1e-8 * m.energy.abs(), format!("{tag}: m*={} < 2c*={}", m.energy, 2.0 * c.energy))?;
        check(m.sign_changes == 1 && sign_change_count(&m.minimizer) == 1, format!("{tag}: {} sign changes", m.sign_changes))?;
        check(c.energy >= floor && m.energy >= split_floor, format!("{tag}: coercivity floor violated"))?;
        lines.push(format!(
            "{tag}: c*={:.10} m*={:.10} m*-2c*={:.1e} rho={:.3e} (literal {:.3e})",
            c.energy,
            m.energy,
            m.energy - 2.0 * c.energy,
            bound.rho,
            bound.rho_literal
        ));
    }
    Ok(lines.join("; "))
}

fn criterion_6() -> Outcome {
    let params = headline();
    let mut lines = Vec::new();
    for family in ["constant", "appendix1"] {
        let level = |radius: usize| {
            let window = LatticeWindow::new(radius).unwrap();
            let coeff = if family == "constant" {
                CoefficientProfile::unit(window)
            } else {
                CoefficientProfile::appendix1(window, &params)
            };
            minimize_ground_state(&coeff, &params, &SolveConfig::new(radius)).map(|r| r.energy).map_err(|e| e.to_string())
        };
        let (c64, c128) = (level(64)?, level(128)?);
        let rel = (c128 - c64).abs() / c64.abs();
        check(rel <= 1e-6, format!("{family}: c*(64)={c64} c*(128)={c128} relative change {rel:e}"))?;
        lines.push(format!("{family}: relative change {rel:.1e}"));
    }
    Ok(lines.join("; "))
}

fn criterion_7() -> Outcome {
    let params = ProblemParams::new_unordered(2.0, 2.0, 1.0, 3.0).unwrap();
    let radii: Vec<usize> = (1..=6).map(|k| 10usize.pow(k)).collect();
    let sums = appendix1_checkpoints(&params, &radii).map_err(|e| e.to_string())?;
    let decreasing = sums.windows(2).all(|w| w[1].log_sum < w[0].log_sum);
    let (a, b) = (&sums[4], &sums[5]);
    let da = (b.difference_sum - a.difference_sum).abs();
    let db = (b.mass_sum - a.mass_sum).abs();
    let detail = format!(
        "S_N {:.4} -> {:.4} strictly decreasing: {decreasing}; change 1e5 -> 1e6: difference sum {da:.1e}, mass sum {db:.1e}",
        sums[0].log_sum, b.log_sum
    );
    check(decreasing && da <= 1e-6 && db <= 1e-6, detail.clone())?;
    Ok(detail)
}

fn run_cli(args: &[&str], out: &Path) -> Result<(), String> {
    let status = Command::new(env!("CARGO_BIN_EXE_dplap"))
        .args(args)
        .arg("--out-dir")
        .arg(out)
        .output()
        .map_err(|e| e.to_string())?
        .status;
    check(status.success(), format!("{args:?} exited with {status}"))
}

fn criterion_8() -> Outcome {
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    let runs: [&[&str]; 3] = [
        &["solve", "--window", "32", "--seed", "42"],
        &["verify", "--samples", "200", "--seed", "42"],
        &["sweep", "--param", "r", "--from", "1", "--to", "2", "--step", "0.5", "--window", "24", "--seed", "42"],
    ];
    for dir in &dirs {
        for args in runs {
            run_cli(args, dir.path())?;
        }
    }
    let files = ["results.csv", "ground.seq", "sign_changing.seq", "verify.csv", "sweep.csv"];
    for name in files {
        let a = std::fs::read(dirs[0].path().join(name)).map_err(|e| format!("{name}: {e}"))?;
        let b = std::fs::read(dirs[1].path().join(name)).map_err(|e| format!("{name}: {e}"))?;
        check(a == b, format!("{name} differs between runs"))?;
    }
    Ok(format!("{} files byte-identical across two runs", files.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, u64); 8] = [
        ("gradient consistency", criterion_1, 10),
        ("sign-split decomposition", criterion_2, 30),
        ("inequality certificates", criterion_3, 120),
        ("projection certificates", criterion_4, 120),
        ("headline levels", criterion_5, 180),
        ("truncation convergence", criterion_6, 300),
        ("divergent log series", criterion_7, 30),
        ("determinism", criterion_8, 60),
    ];
    let mut failed = 0;
    for (k, (name, run, budget)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(budget);
        let (ok, detail) = match outcome {
            Ok(d) if in_time => (true, d),
            Ok(d) => (false, format!("{d}; over the {budget}s budget")),
            Err(d) => (false, d),
        };
        failed += usize::from(!ok);
        println!(
            "criterion {} {name}: {} ({detail}) [{:.2}s]",
            k + 1,
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
    }
    println!("{} of 8 criteria passed", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
