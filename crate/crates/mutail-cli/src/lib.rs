//! Batch CLI front end: parses arguments, resolves shared settings from
//! flags / MUTAIL_* environment variables / defaults, runs one subcommand
//! inside a sized worker pool, and emits CSV (stdout or --out) plus a
//! reproducible JSON manifest (stderr or --manifest).
//!
//! Exit codes: 0 success, 1 domain or validation failure, 2 numeric
//! non-convergence, 64 usage error.

pub mod commands;
pub mod csvw;
pub mod manifest;
pub mod opts;

use clap::Parser;
use commands::RunContext;
use manifest::{CommandParams, RunManifest, ARTIFACT_VERSION};
use mutail::moebius::DEFAULT_BLOCK_LEN;
use mutail::residues::ZeroTable;
use mutail::series::MertensModel;
use opts::{Cli, Command, RerunArgs, SharedArgs};
use std::io::Write;
use std::time::Instant;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_NONCONVERGENCE: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

const DEFAULT_CAPACITY: u64 = 2_000_000_000;

/// Run the CLI against explicit argv and output sinks. Returns the exit code.
pub fn run(argv: &[String], stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(stderr, "{rendered}");
                return EXIT_USAGE;
            }
            // --help / --version
            let _ = write!(stdout, "{rendered}");
            return EXIT_OK;
        }
    };

    let (params, shared) = match cli.command {
        Command::Rerun(rerun) => match load_rerun(&rerun, cli.shared) {
            Ok(pair) => pair,
            Err(msg) => {
                let _ = writeln!(stderr, "error: {msg}");
                return EXIT_DOMAIN;
            }
        },
        other => (command_params(other), cli.shared),
    };

    dispatch(params, &shared, stdout, stderr)
}

fn command_params(command: Command) -> CommandParams {
    match command {
        Command::Sieve(a) => CommandParams::Sieve(a),
        Command::Msum(a) => CommandParams::Msum(a),
        Command::Psum(a) => CommandParams::Psum(a),
        Command::Mb(a) => CommandParams::Mb(a),
        Command::ResidueApprox(a) => CommandParams::ResidueApprox(a),
        Command::VerifyIdentities(a) => CommandParams::VerifyIdentities(a),
        Command::Fit(a) => CommandParams::Fit(a),
        Command::Watson(a) => CommandParams::Watson(a),
        Command::Rerun(_) => unreachable!("rerun handled by caller"),
    }
}

// Rebuild args from a recorded manifest; the manifest's shared settings win
// except for workers and output paths, which are runtime concerns.
fn load_rerun(args: &RerunArgs, mut shared: SharedArgs) -> Result<(CommandParams, SharedArgs), String> {
    let text = std::fs::read_to_string(&args.path).map_err(|e| format!("{}: {e}", args.path))?;
    let m = RunManifest::from_json(&text).map_err(|e| format!("{}: {e}", args.path))?;
    shared.zeros = match m.zeros.as_str() {
        "bundled" => None,
        path => Some(path.to_string()),
    };
    shared.capacity = Some(m.capacity);
    shared.block_len = Some(m.block_len);
    shared.mertens_a = Some(m.mertens_a);
    shared.mertens_theta = Some(m.mertens_theta);
    Ok((m.params, shared))
}

fn dispatch(
    params: CommandParams,
    shared: &SharedArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32 {
    let workers = opts::resolve(
        shared.workers,
        "MUTAIL_WORKERS",
        std::thread::available_parallelism().map_or(1, |n| n.get()),
    )
    .max(1);
    let capacity = opts::resolve(shared.capacity, "MUTAIL_CAPACITY", DEFAULT_CAPACITY);
    let block_len = opts::resolve(shared.block_len, "MUTAIL_BLOCK_LEN", DEFAULT_BLOCK_LEN).max(1);
    let mertens_a = opts::resolve(shared.mertens_a, "MUTAIL_MERTENS_A", 0.6);
    let mertens_theta = opts::resolve(shared.mertens_theta, "MUTAIL_MERTENS_THETA", 0.6);
    let zeros_source = shared
        .zeros
        .clone()
        .or_else(|| std::env::var("MUTAIL_ZEROS").ok())
        .unwrap_or_else(|| "bundled".to_string());

    let zero_table = if zeros_source == "bundled" {
        Ok(ZeroTable::bundled())
    } else {
        ZeroTable::load(&zeros_source)
    };
    let zero_table = match zero_table {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_DOMAIN;
        }
    };

    let ctx = RunContext {
        zeros_source: zeros_source.clone(),
        zero_table,
        capacity,
        block_len,
        model: MertensModel {
            coefficient: mertens_a,
            exponent: mertens_theta,
        },
    };

    let pool = match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool,
        Err(e) => {
            let _ = writeln!(stderr, "error: cannot build worker pool: {e}");
            return EXIT_DOMAIN;
        }
    };

    let started = Instant::now();
    let mut csv_buf: Vec<u8> = Vec::new();
    let outcome = pool.install(|| commands::execute(&params, &ctx, &mut csv_buf));
    let wall_ms = started.elapsed().as_millis();

    let exit = match &outcome {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_DOMAIN, // e.g. verify-identities with a failing row
        Err(e) if e.is_nonconvergence() => EXIT_NONCONVERGENCE,
        Err(_) => EXIT_DOMAIN,
    };
    if let Err(e) = &outcome {
        let _ = writeln!(stderr, "error: {e}");
    }

    // CSV goes out even when a verification reports failures
    if outcome.is_ok() {
        if let Err(e) = write_sink(&csv_buf, shared.out.as_deref(), stdout) {
            let _ = writeln!(stderr, "error: cannot write output: {e}");
            return EXIT_DOMAIN;
        }
        let manifest = RunManifest {
            artifact: "mutail".into(),
            version: ARTIFACT_VERSION.into(),
            params,
            zeros: zeros_source,
            capacity,
            block_len,
            mertens_a,
            mertens_theta,
            workers,
            wall_ms,
        };
        let text = manifest.to_json() + "\n";
        if let Err(e) = write_sink(text.as_bytes(), shared.manifest.as_deref(), stderr) {
            let _ = writeln!(stderr, "error: cannot write manifest: {e}");
            return EXIT_DOMAIN;
        }
    }
    exit
}

fn write_sink(bytes: &[u8], path: Option<&str>, fallback: &mut dyn Write) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, bytes),
        None => fallback.write_all(bytes),
    }
}
