use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

use w2n::cli::{self, FileConfig, Format};
use w2n::report::Status;
use w2n::wgen::Route;
use w2n::Error;

#[derive(Parser)]
#[command(name = "w2n", version, about = "Exact free-field computations for W^(2)_n")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the generators of the realization n[m].
    Build {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        /// Ordered product of first-order operators.
        #[arg(long, conflicts_with = "recursive")]
        factored: bool,
        /// The recursion in n (default).
        #[arg(long)]
        recursive: bool,
        #[arg(long, default_value = "text")]
        format: Format,
    },
    /// Operator product of two expressions.
    Ope {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        /// Number of regular orders to print besides the poles.
        #[arg(long, default_value_t = 0)]
        depth: i64,
        #[command(flatten)]
        at: Realization,
        #[arg(long, default_value = "text")]
        format: Format,
    },
    /// Run a verification suite; exit status 1 on any failure.
    Verify {
        #[arg(long)]
        suite: String,
        #[command(flatten)]
        opts: SuiteArgs,
    },
    /// Run a suite and print the full report.
    Report {
        #[arg(long, default_value = "all")]
        suite: String,
        #[command(flatten)]
        opts: SuiteArgs,
    },
    /// An expression, or an operator product, at a rational level.
    Specialize {
        #[arg(long, allow_hyphen_values = true)]
        k: String,
        #[arg(long)]
        expr: String,
        /// Right operand: print the operator product instead.
        #[arg(long)]
        right: Option<String>,
        #[arg(long, default_value_t = 0)]
        depth: i64,
        #[command(flatten)]
        at: Realization,
        #[arg(long, default_value = "text")]
        format: Format,
    },
}

/// Realization for expressions made of bare currents.
#[derive(Args)]
struct Realization {
    #[arg(long = "n", default_value_t = 2)]
    n: usize,
    #[arg(long = "m", default_value_t = 0)]
    m: usize,
}

#[derive(Args)]
struct SuiteArgs {
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long)]
    depth: Option<i64>,
    #[arg(long)]
    fock_cutoff: Option<usize>,
    #[arg(long)]
    jobs: Option<usize>,
    /// Also run a pass at this level.
    #[arg(long, allow_hyphen_values = true)]
    k: Option<String>,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    format: Option<Format>,
}

fn is_usage(e: &anyhow::Error) -> bool {
    matches!(
        e.downcast_ref::<Error>(),
        Some(Error::Usage(_) | Error::Parse { .. } | Error::UnknownLabel(_) | Error::InvalidRank { .. } | Error::Undefined(_) | Error::ExcludedLevel { .. })
    )
}

fn suite(name: &str, a: &SuiteArgs, default_format: Format) -> anyhow::Result<bool> {
    let file = match &a.config {
        Some(p) => cli::load_config(p)?,
        None => FileConfig::default(),
    };
    let flags = FileConfig { n_max: a.n_max, depth: a.depth, fock_cutoff: a.fock_cutoff, jobs: a.jobs, format: a.format };
    let env = std::env::var("W2N_JOBS").ok();
    let mut opts = cli::resolve_options(&file, &flags, a.k.as_deref(), env.as_deref())?;
    if a.format.is_none() && file.format.is_none() {
        opts.format = default_format;
    }
    let report = cli::run_suite(name, &opts, &|c| {
        let mut err = std::io::stderr().lock();
        let _ = writeln!(err, "[{}] {}", c.status, c.id);
    })?;
    print!("{}", cli::render_report(&report, opts.format));
    eprintln!("{} in {:.1?}", cli::render::summary(&report), report.elapsed);
    Ok(report.checks.iter().all(|c| c.status != Status::Fail))
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    match cli.cmd {
        Cmd::Build { n, m, factored, recursive: _, format } => {
            let route = if factored { Route::Factored } else { Route::Recursive };
            print!("{}", cli::build(n, m, route, format).with_context(|| format!("building {}[{}]", n, m))?);
            Ok(true)
        }
        Cmd::Ope { left, right, depth, at, format } => {
            print!("{}", cli::ope_command(&left, &right, depth, (at.n, at.m), format)?);
            Ok(true)
        }
        Cmd::Verify { suite: name, opts } => suite(&name, &opts, Format::Text),
        Cmd::Report { suite: name, opts } => suite(&name, &opts, Format::Text),
        Cmd::Specialize { k, expr, right, depth, at, format } => {
            print!("{}", cli::specialize_command(&k, &expr, right.as_deref(), depth, (at.n, at.m), format)?);
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {:#}", e);
            ExitCode::from(if is_usage(&e) { 2 } else { 1 })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Result<Cli, clap::Error> {
        Cli::try_parse_from(std::iter::once("w2n").chain(args.iter().copied()))
    }

    #[test]
    fn arguments() {
        assert!(parse(&["build", "--n", "3", "--m", "1", "--factored"]).is_ok());
        assert!(parse(&["build", "--n", "3", "--m", "1", "--factored", "--recursive"]).is_err());
        assert!(parse(&["ope", "--left", "E(3,0)", "--right", "F(3,0)", "--format", "json"]).is_ok());
        assert!(parse(&["ope", "--left", "E", "--right", "F", "--format", "yaml"]).is_err());
        assert!(parse(&["specialize", "--k", "-1/2", "--expr", "H(3,0)"]).is_ok());
        assert!(parse(&["verify"]).is_err());
    }

    #[test]
    fn exit_codes() {
        let run_args = |args: &[&str]| run(parse(args).unwrap());
        let e = run_args(&["ope", "--left", "Lamda", "--right", "H"]).unwrap_err();
        assert!(is_usage(&e));
        let e = run_args(&["verify", "--suite", "nope"]).unwrap_err();
        assert!(is_usage(&e));
        let e = run_args(&["build", "--n", "3", "--m", "5"]).unwrap_err();
        assert!(is_usage(&e));
        assert!(run_args(&["verify", "--suite", "duality", "--n-max", "3"]).unwrap());
        assert!(!is_usage(&anyhow::Error::new(Error::NoSolution("x".into()))));
    }
}
