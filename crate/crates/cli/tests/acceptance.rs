//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any
//! fails. Runs without the test harness so the lines are always shown.

use std::process::Command;
use std::time::{Duration, Instant};

use arrtower::Engine;
use arrtower_cli::suite;

type Check = fn(&Engine) -> arrtower::Result<(bool, String)>;

const CRITERIA: &[(u32, &str, Check, Option<u64>)] = &[
    (1, "cohomology of 3Conf(4, R^n), n = 1..5", suite::acceptance_1, Some(1)),
    (2, "rConf(r, R^n) is a sphere", suite::acceptance_2, Some(1)),
    (3, "lattice of 3Conf(4, R^n)", suite::acceptance_3, None),
    (4, "join formula equals direct homology", suite::acceptance_4, Some(60)),
    (5, "top homology degree of intervals", suite::acceptance_5, None),
    (6, "total cokernel of the restriction cube", suite::acceptance_6, Some(120)),
    (7, "cartesian-ness: closed form, minimum, total fiber", suite::acceptance_7, None),
    (8, "identities at r = n+1", suite::acceptance_8, None),
    (9, "layer connectivity and r = 2 threshold", suite::acceptance_9, None),
    (10, "comparison classification", suite::acceptance_10, None),
];

fn run_cli(args: &[&str]) -> (Option<i32>, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_arrtower"))
        .args(args)
        .env_remove("ARRTOWER_MAX_K")
        .output()
        .expect("binary runs");
    (out.status.code(), out.stdout)
}

/// Every command, every format: two identical runs, then the same bytes
/// with one worker and with four.
fn determinism() -> (bool, String) {
    let commands: &[&[&str]] = &[
        &["cohomology", "--k", "3..7", "--r", "2..4", "--n", "1..3", "--ledger"],
        &["cohomology", "--k", "6", "--r", "3", "--n", "2", "--unreduced", "--checked"],
        &["lattice", "--k", "6", "--r", "2", "--complex"],
        &["lattice", "--k", "7", "--r", "3"],
        &["cube", "--k", "2..5", "--r", "2,3", "--n", "2"],
        &["connectivity", "--grid"],
        &["connectivity", "--k", "1..7", "--r", "2..4", "--n", "1..4", "--homological"],
        &["verify", "--suite", "gm"],
        &["verify", "--suite", "lattice"],
    ];
    let mut runs = 0;
    for cmd in commands {
        for format in ["table", "json", "csv"] {
            let mut outputs = Vec::new();
            for workers in [None, None, Some("1"), Some("4")] {
                let mut args: Vec<&str> = cmd.to_vec();
                args.extend(["--format", format]);
                if let Some(w) = workers {
                    args.extend(["--workers", w]);
                }
                let (code, out) = run_cli(&args);
                runs += 1;
                if code != Some(0) {
                    return (false, format!("{args:?} exited with {code:?}"));
                }
                outputs.push(out);
            }
            if outputs.windows(2).any(|w| w[0] != w[1]) {
                return (false, format!("{cmd:?} --format {format} is not byte-stable"));
            }
        }
    }
    (true, format!("{runs} runs over {} commands and 3 formats", commands.len()))
}

fn main() {
    let mut failed = 0;
    for &(id, title, check, budget) in CRITERIA {
        let engine = Engine::default();
        let start = Instant::now();
        let (mut pass, mut detail) = match check(&engine) {
            Ok(v) => v,
            Err(e) => (false, format!("error: {e}")),
        };
        let elapsed = start.elapsed();
        if let Some(secs) = budget {
            if elapsed > Duration::from_secs(secs) {
                pass = false;
                detail = format!("{detail}; took {elapsed:.1?}, budget {secs} s");
            }
        }
        println!("criterion {id:>2} {}: {title}: {detail} ({elapsed:.2?})", verdict(pass));
        failed += usize::from(!pass);
    }
    let start = Instant::now();
    let (pass, detail) = determinism();
    println!(
        "criterion 11 {}: CLI output is byte-identical: {detail} ({:.2?})",
        verdict(pass),
        start.elapsed()
    );
    failed += usize::from(!pass);
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all 11 criteria passed");
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}
