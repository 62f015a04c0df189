use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use ab_moduli::cli::{run, Command, CommandRequest, Options, EXIT_INVALID};
use clap::Parser;

/// Holonomy, periods, gauge orbits and moduli coordinates of flat U(1)
/// connections on the punctured plane.
///
/// Commands: holonomy, winding, period, reduce, equiv, classify, spectrum,
/// gauge-apply, verify-flat, constants. Output is a JSON report on stdout.
#[derive(Debug, Parser)]
#[command(name = "ab-moduli", version, allow_negative_numbers = true)]
struct Args {
    /// Command to run.
    command: String,
    /// Fine-structure constant, decimal or a/b.
    #[arg(long)]
    alpha: Option<String>,
    /// Coefficient of the canonical form, decimal or a/b.
    #[arg(long)]
    lambda: Option<String>,
    /// Flux ratio: p/q, irrational:<description>=<value>, or a decimal.
    #[arg(long)]
    rho: Option<String>,
    /// Path file (JSON).
    #[arg(long)]
    path: Option<PathBuf>,
    /// Connection file (JSON); give twice for equiv.
    #[arg(long)]
    conn: Vec<PathBuf>,
    /// Gauge map file (JSON).
    #[arg(long)]
    gauge: Option<PathBuf>,
    /// Write plot data (CSV) here, for commands that produce it.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Largest denominator accepted when recognising rationals.
    #[arg(long)]
    qmax: Option<u64>,
    /// Tolerance override for classify, equiv and verify-flat.
    #[arg(long)]
    tol: Option<String>,
    /// Spectrum range: n runs over -nmax..=nmax.
    #[arg(long)]
    nmax: Option<u64>,
    /// Planck length used for the Kaluza-Klein scale.
    #[arg(long)]
    planck_length: Option<String>,
    /// Side of the probe squares for verify-flat.
    #[arg(long)]
    probe_radius: Option<String>,
    /// Print a human-readable summary to stderr.
    #[arg(long, short)]
    verbose: bool,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INVALID as u8 } else { 0 });
        }
    };
    let started = Instant::now();
    let command: Command = match args.command.parse() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INVALID as u8);
        }
    };
    let req = CommandRequest {
        command,
        path: args.path,
        conns: args.conn,
        gauge: args.gauge,
        options: Options {
            alpha: args.alpha,
            lambda: args.lambda,
            rho: args.rho,
            tol: args.tol,
            qmax: args.qmax,
            nmax: args.nmax,
            planck_length: args.planck_length,
            probe_radius: args.probe_radius,
            out: args.out,
            verbose: args.verbose,
        },
    };
    let outcome = run(&req);
    print!("{}", outcome.report);
    let _ = std::io::stdout().flush();

    let mut code = outcome.exit_code;
    if let (Some(csv), Some(out)) = (&outcome.csv, &req.options.out) {
        if let Err(e) = std::fs::write(out, csv) {
            eprintln!("error: cannot write {}: {e}", out.display());
            code = EXIT_INVALID;
        }
    }
    if req.options.verbose {
        let status = if outcome.exit_code == 0 { "ok" } else { "failed" };
        eprintln!(
            "{command}: {status} (exit {}) in {:.3} ms",
            outcome.exit_code,
            started.elapsed().as_secs_f64() * 1e3
        );
    }
    ExitCode::from(code as u8)
}
