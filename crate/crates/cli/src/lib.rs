//! Command-line front end for `arrtower`. The binary is a thin wrapper over
//! [`run`]; the pieces are public so tests can drive them directly.

pub mod args;
pub mod commands;
pub mod output;
pub mod suite;

use std::io::Write;

use arrtower::{Engine, Error, Execution, Limits, Verification};
use serde_json::json;

use args::{Cli, Command};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_GUARD: i32 = 3;

/// Exit code for an engine error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::SizeGuard { .. } => EXIT_GUARD,
        Error::Usage(_) | Error::Parse { .. } | Error::ClassicalCase => EXIT_USAGE,
        Error::Integrity(_) | Error::TorsionInJoin { .. } => EXIT_VERIFY,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::SizeGuard { .. } => "guard",
        Error::Usage(_) | Error::ClassicalCase => "usage",
        Error::Parse { .. } => "parse",
        Error::Integrity(_) => "integrity",
        Error::TorsionInJoin { .. } => "torsion",
    }
}

/// Guard bound: the flag wins over ARRTOWER_MAX_K, which wins over the default.
pub fn limits(flag: Option<usize>, env: Option<&str>) -> Result<Limits, Error> {
    let from_env = match env {
        Some(v) => Some(
            v.trim()
                .parse::<usize>()
                .map_err(|_| Error::Usage(format!("ARRTOWER_MAX_K must be a number, got {v:?}")))?,
        ),
        None => None,
    };
    Ok(match flag.or(from_env) {
        Some(k) => Limits::default().with_max_k(k),
        None => Limits::default(),
    })
}

fn execute(cli: &Cli, engine: &Engine) -> Result<output::Output, Error> {
    match &cli.command {
        Command::Cohomology(a) => commands::cohomology(engine, a),
        Command::Lattice(a) => commands::lattice(engine, a),
        Command::Cube(a) => commands::cube(engine, a),
        Command::Connectivity(a) => commands::connectivity(engine, a),
        Command::Verify(a) => Ok(commands::checks_output(&suite::run(engine, a.suite, a.worked_examples))),
    }
}

/// Runs a parsed command line, writing the rendering to `out` (or to the
/// `--out` file) and diagnostics to `err`. Returns the exit code.
pub fn run(cli: &Cli, env_max_k: Option<&str>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = limits(cli.common.max_k, env_max_k).and_then(|limits| {
        let verification = if cli.common.checked { Verification::Checked } else { Verification::Fast };
        match cli.common.workers {
            Some(0) => Err(Error::Usage("--workers must be at least 1".into())),
            Some(1) => execute(cli, &Engine::new(limits, Execution::Sequential, verification)),
            Some(w) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(w)
                    .build()
                    .map_err(|e| Error::Usage(format!("cannot start {w} workers: {e}")))?;
                pool.install(|| execute(cli, &Engine::new(limits, Execution::Parallel, verification)))
            }
            None => execute(cli, &Engine::new(limits, Execution::Parallel, verification)),
        }
    });
    match result {
        Ok(o) => {
            let text = o.render(cli.common.format);
            let written = match &cli.common.out {
                Some(path) => std::fs::write(path, text.as_bytes()),
                None => out.write_all(text.as_bytes()),
            };
            if let Err(e) = written {
                let _ = writeln!(err, "arrtower: cannot write output: {e}");
                return EXIT_USAGE;
            }
            if o.ok {
                EXIT_OK
            } else {
                EXIT_VERIFY
            }
        }
        Err(e) => {
            let code = exit_code(&e);
            if cli.common.error_json {
                let body = json!({ "error": { "kind": error_kind(&e), "message": e.to_string() }, "exit_code": code });
                let _ = writeln!(out, "{}", serde_json::to_string_pretty(&body).expect("static shape"));
            }
            let _ = writeln!(err, "arrtower: {e}");
            code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn guard_precedence() {
        assert_eq!(limits(None, None).unwrap(), Limits::default());
        assert_eq!(limits(None, Some("14")).unwrap().max_k, 14);
        assert_eq!(limits(Some(10), Some("14")).unwrap().max_k, 10);
        assert!(limits(None, Some("many")).is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::Usage("x".into())), EXIT_USAGE);
        assert_eq!(
            exit_code(&Error::SizeGuard { what: "k", value: 20, bound: 12 }),
            EXIT_GUARD
        );
        assert_eq!(exit_code(&Error::Integrity("x".into())), EXIT_VERIFY);
    }
}
