use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use nalgebra::DVector;

use tls_cond::error::Error;
use tls_cond::exact::{
    condition_closed, condition_relative, condition_svd, ConditionReport, Method, ObservationMap,
};
use tls_cond::bounds::{kappa_vanhuffel, oracle_condition, upper_bound_kbar};
use tls_cond::experiments::{run_table1, run_table2};
use tls_cond::io::load_matrix;
use tls_cond::iterative::{power_condition, PowerSettings};
use tls_cond::report::{self, Format};
use tls_cond::tls::{solve_tls, TlsProblem, TlsSolution, DEFAULT_GAP_TOL};

#[derive(Parser)]
#[command(
    name = "tls-cond",
    version,
    about = "Total least squares solver and condition number estimation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Svd,
    Closed,
    Power,
    Oracle,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the TLS problem A x ~ b
    Solve {
        /// Matrix A in text format
        #[arg(long)]
        a: PathBuf,
        /// Right-hand side b (m-by-1) in text format
        #[arg(long)]
        b: PathBuf,
        /// Genericity threshold relative to sigma_1 of [A,b]
        #[arg(long, default_value_t = DEFAULT_GAP_TOL)]
        gap_tol: f64,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
    },
    /// Condition number of L^T x for a solved problem
    Cond {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long, value_enum, default_value = "svd")]
        method: MethodArg,
        /// Observation map: `identity`, `e:<i>` (1-based component), or `file:<path>`
        #[arg(long, default_value = "identity")]
        l: String,
        /// Power method stopping tolerance on successive nu values
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value_t = 200)]
        max_iter: usize,
        /// Seed for the power method's initial vector
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also report the relative condition number
        #[arg(long)]
        relative: bool,
        #[arg(long, default_value_t = DEFAULT_GAP_TOL)]
        gap_tol: f64,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
    },
    /// Conditioning of Householder-generated problems across gap decades
    Table1 {
        #[arg(long, default_value_t = 100)]
        m: usize,
        #[arg(long, default_value_t = 20)]
        n: usize,
        /// Comma-separated list of gap parameters e_p
        #[arg(long, value_delimiter = ',', default_values_t = vec![1.0, 1e-4, 1e-8, 1e-12])]
        ep: Vec<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
    },
    /// Forward error vs first-order predictions on the analytic family
    Table2 {
        #[arg(long = "m-list", value_delimiter = ',', default_values_t = vec![50, 100, 500, 1000])]
        m_list: Vec<usize>,
        /// Product norm of the random perturbation
        #[arg(long, default_value_t = 1e-10)]
        pert: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
    },
}

fn load_problem(a: &Path, b: &Path) -> Result<TlsProblem, Error> {
    let a = load_matrix(a)?.into_matrix();
    let b = load_matrix(b)?;
    if b.cols() != 1 {
        return Err(Error::Dimension(format!(
            "b must be a column vector, got {}x{}",
            b.rows(),
            b.cols()
        )));
    }
    let b = DVector::from_column_slice(b.as_matrix().as_slice());
    TlsProblem::new(a, b)
}

fn parse_observation(spec: &str, n: usize) -> Result<ObservationMap, Error> {
    if spec == "identity" {
        return Ok(ObservationMap::identity(n));
    }
    if let Some(idx) = spec.strip_prefix("e:") {
        let i: usize = idx
            .parse()
            .map_err(|_| Error::Parse(format!("bad component index `{idx}`")))?;
        if i == 0 {
            return Err(Error::Parse("component indices are 1-based".into()));
        }
        return ObservationMap::canonical(n, i - 1);
    }
    if let Some(path) = spec.strip_prefix("file:") {
        let l = load_matrix(Path::new(path))?;
        return ObservationMap::general(l.into_matrix());
    }
    Err(Error::Parse(format!(
        "bad observation map `{spec}`; use identity, e:<i> or file:<path>"
    )))
}

fn run_cond(
    p: &TlsProblem,
    sol: &TlsSolution,
    l: &ObservationMap,
    method: MethodArg,
    settings: &PowerSettings,
    relative: bool,
) -> Result<ConditionReport, Error> {
    let (k_abs, method, iterations) = match method {
        MethodArg::Svd => (condition_svd(sol, l)?, Method::Svd, None),
        MethodArg::Closed => (condition_closed(sol, p, l)?, Method::Closed, None),
        MethodArg::Oracle => (oracle_condition(sol, p, l)?, Method::Oracle, None),
        MethodArg::Power => {
            let out = power_condition(sol, p, l, settings)?;
            if !out.converged {
                eprintln!(
                    "warning: power method did not converge in {} iterations",
                    out.iterations
                );
            }
            (out.value, Method::Power, Some(out.iterations))
        }
    };
    let k_rel = if relative {
        Some(condition_relative(k_abs, p, sol, l)?)
    } else {
        None
    };
    Ok(ConditionReport {
        k_abs,
        k_rel,
        method,
        iterations,
        bound_kbar: Some(upper_bound_kbar(sol, l)?),
        bound_kappa: kappa_vanhuffel(sol, p),
    })
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Solve { a, b, gap_tol, format } => {
            let p = load_problem(&a, &b)?;
            let sol = solve_tls(&p, gap_tol)?;
            print!("{}", report::solution(&sol, format.into()));
        }
        Command::Cond {
            a,
            b,
            method,
            l,
            tol,
            max_iter,
            seed,
            relative,
            gap_tol,
            format,
        } => {
            let p = load_problem(&a, &b)?;
            let sol = solve_tls(&p, gap_tol)?;
            let l = parse_observation(&l, p.ncols())?;
            let settings = PowerSettings {
                tol,
                max_iter,
                seed,
                relative: false,
            };
            let rep = run_cond(&p, &sol, &l, method, &settings, relative)?;
            print!("{}", report::condition(&rep, format.into()));
        }
        Command::Table1 { m, n, ep, seed, format } => {
            let rows = run_table1(m, n, &ep, seed, &PowerSettings::default());
            print!("{}", report::table1(&rows, format.into()));
            if let Some(Err(e)) = rows.iter().find(|r| r.is_err()).map(|r| r.as_ref()) {
                return Err(clone_error(e));
            }
        }
        Command::Table2 { m_list, pert, seed, format } => {
            let rows = run_table2(&m_list, pert, seed);
            print!("{}", report::table2(&rows, format.into()));
            if let Some(Err(e)) = rows.iter().find(|r| r.is_err()).map(|r| r.as_ref()) {
                return Err(clone_error(e));
            }
        }
    }
    Ok(())
}

// Error is not Clone (io::Error); rebuild the variants the table paths
// can actually surface.
fn clone_error(e: &Error) -> Error {
    match e {
        Error::Nongeneric { gap, threshold } => Error::Nongeneric {
            gap: *gap,
            threshold: *threshold,
        },
        other => Error::InvalidArgument(other.to_string()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ Error::Nongeneric { .. }) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
