//! Drives the command-line front end in-process and prints the files it
//! writes. The same arguments work with the `dplap` binary.
//!
//! ```text
//! cargo run --release --example cli_usage
//! ```

use std::fs;

use dplap::cli::{main_with_args, parse_config};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::temp_dir().join("dplap-cli-usage");
    let out_dir = out.to_str().ok_or("non-UTF-8 temp dir")?;
    let runs: [&[&str]; 4] = [
        &["solve", "--window", "32", "--profile", "polynomial"],
        &["verify", "--suite", "inequalities", "--samples", "100"],
        &["counterexample", "--window", "100000"],
        &["sweep", "--param", "q", "--from", "2.5", "--to", "3.5", "--step", "0.5", "--window", "24"],
    ];
    for args in runs {
        let argv: Vec<&str> = std::iter::once("dplap").chain(args.iter().copied()).chain(["--out-dir", out_dir]).collect();
        println!("$ {}", argv.join(" "));
        println!("exit status {}", main_with_args(&argv));
    }
    for name in ["results.csv", "counterexample.csv", "sweep.csv"] {
        println!("--- {name}\n{}", fs::read_to_string(out.join(name))?);
    }

    match parse_config(["dplap", "verify", "--suite", "decomposition", "--p", "3", "--q", "4"]) {
        Ok(_) => println!("unexpectedly accepted"),
        Err(e) => println!("rejected with exit status {}: {e}", e.exit_code()),
    }
    Ok(())
}
