use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use maxplus::bounds::best_bound;
use maxplus::graph::{digraph_of, is_irreducible};
use maxplus::nachtigall::{decompose, verify_decomposition};
use maxplus::periodicity::{exact_transient_system, matrix_transient, OracleOptions};
use maxplus::spectral::{critical_report, lambda2, lambda_nc_with};
use maxplus::toolkit::{
    gen_prime_cycles, gen_random_irreducible, gen_wielandt, read_matrix, read_vector, run_compare, serialize_matrix,
    CompareSpec, RandomSpec,
};
use maxplus::{Error, MaxPlus, Rational};

/// Exact max-plus transient analysis.
#[derive(Parser)]
#[command(name = "maxplus", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Spectral and critical-graph data of a matrix.
    Analyze {
        matrix: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Exact transient of the power sequence, or of a system with --vector.
    Transient {
        matrix: PathBuf,
        #[arg(long)]
        vector: Option<PathBuf>,
        #[arg(long)]
        max_horizon: Option<u64>,
    },
    /// Every applicable transience bound and the smallest one.
    Bounds {
        matrix: PathBuf,
        #[arg(long)]
        vector: Option<PathBuf>,
    },
    /// Decomposition of the power sequence into eventually periodic parts.
    Decompose {
        matrix: PathBuf,
        /// Largest k checked by --verify (default 3n² + 10).
        #[arg(long)]
        horizon: Option<usize>,
        #[arg(long)]
        verify: bool,
        /// Also print every component's prefix matrices.
        #[arg(long)]
        prefixes: bool,
    },
    /// Writes a generated matrix in mpm format to standard output.
    Generate {
        #[command(subcommand)]
        family: Family,
    },
    /// Runs the bound-comparison experiment and writes a CSV file.
    Compare {
        #[arg(long)]
        count: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        weights: Weights,
        #[arg(long)]
        csv: PathBuf,
    },
}

#[derive(Args)]
struct Weights {
    #[arg(long, default_value = "-5", value_parser = parse_rational, allow_hyphen_values = true)]
    wmin: Rational,
    #[arg(long, default_value = "5", value_parser = parse_rational, allow_hyphen_values = true)]
    wmax: Rational,
    #[arg(long, default_value_t = 0.7)]
    density: f64,
}

#[derive(Subcommand)]
enum Family {
    /// Primitive digraph with the largest index of convergence.
    Wielandt {
        #[arg(long)]
        n: usize,
    },
    /// Disjoint critical cycles of prime lengths.
    Primes {
        #[arg(long, value_delimiter = ',', required = true)]
        list: Vec<u64>,
        #[arg(long, default_value = "1", value_parser = parse_rational)]
        eps: Rational,
    },
    /// Seeded random irreducible matrix.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        weights: Weights,
    },
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    match MaxPlus::parse_token(s)? {
        MaxPlus::Finite(r) => Ok(r),
        MaxPlus::Bottom => Err("expected a finite rational".into()),
    }
}

/// Failure of a command: a library error, or a detected soundness problem.
enum Failure {
    Lib(Error),
    Unsound(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Lib(e.into())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match run(cli.command, &mut out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
        Err(Failure::Unsound(msg)) => {
            eprintln!("soundness violation: {msg}");
            ExitCode::from(4)
        }
    }
}

fn run(command: Command, out: &mut impl Write) -> Result<(), Failure> {
    match command {
        Command::Analyze { matrix, json } => analyze(&matrix, json, out),
        Command::Transient { matrix, vector, max_horizon } => {
            let a = read_matrix(&matrix)?;
            let cert = match vector {
                Some(v) => exact_transient_system(&a, &read_vector(&v)?, max_horizon)?,
                None => matrix_transient(&a, &OracleOptions::with_cap(max_horizon))?,
            };
            writeln!(out, "{cert}")?;
            Ok(())
        }
        Command::Bounds { matrix, vector } => {
            let a = read_matrix(&matrix)?;
            let v = vector.as_deref().map(read_vector).transpose()?;
            writeln!(out, "{}", best_bound(&a, v.as_ref())?)?;
            Ok(())
        }
        Command::Decompose { matrix, horizon, verify, prefixes } => {
            decompose_cmd(&matrix, horizon, verify, prefixes, out)
        }
        Command::Generate { family } => {
            let a = match family {
                Family::Wielandt { n } => gen_wielandt(n)?,
                Family::Primes { list, eps } => gen_prime_cycles(&list, eps)?,
                Family::Random { n, seed, weights } => gen_random_irreducible(&RandomSpec {
                    n,
                    seed,
                    wmin: weights.wmin,
                    wmax: weights.wmax,
                    density: weights.density,
                })?,
            };
            write!(out, "{}", serialize_matrix(&a))?;
            Ok(())
        }
        Command::Compare { count, n, seed, weights, csv } => {
            let spec = CompareSpec { count, n, seed, wmin: weights.wmin, wmax: weights.wmax, density: weights.density };
            let summary = run_compare(&spec, &csv)?;
            writeln!(out, "instances: {}", summary.instances)?;
            writeln!(out, "violations: {}", summary.violations.len())?;
            for (name, wins) in &summary.wins {
                writeln!(out, "wins {name}: {wins}")?;
            }
            if let Some((id, name)) = summary.violations.first() {
                return Err(Failure::Unsound(format!("bound {name} below the exact transient on instance {id}")));
            }
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct ComponentView {
    nodes: Vec<usize>,
    girth: u64,
    cyclicity: u64,
    index: u64,
}

#[derive(Serialize)]
struct Analysis {
    n: usize,
    irreducible: bool,
    lambda: String,
    lambda2: String,
    lambda_nc: String,
    norm: String,
    gamma_c: u64,
    critical_nodes: Vec<usize>,
    critical_edges: Vec<(usize, usize)>,
    components: Vec<ComponentView>,
    n_c: usize,
    h: usize,
    g_hat: u64,
    gamma_hat: u64,
    ind_hat: u64,
    girth: Option<usize>,
    cyclicity: Option<u64>,
}

fn analyze(path: &Path, json: bool, out: &mut impl Write) -> Result<(), Failure> {
    let a = read_matrix(path)?;
    let report = critical_report(&a)?;
    let g = digraph_of(&a);
    let one_based = |v: &[usize]| v.iter().map(|x| x + 1).collect::<Vec<_>>();
    let view = Analysis {
        n: a.dim(),
        irreducible: is_irreducible(&a),
        lambda: report.lambda.to_string(),
        lambda2: lambda2(&a).map_or_else(|e| format!("NA ({e})"), |l| l.to_string()),
        lambda_nc: lambda_nc_with(&a, &report).to_string(),
        norm: a.norm()?.to_string(),
        gamma_c: report.gamma_c,
        critical_nodes: one_based(&report.critical_nodes),
        critical_edges: report.critical_edges.iter().map(|&(i, j)| (i + 1, j + 1)).collect(),
        components: report
            .components
            .iter()
            .map(|c| ComponentView { nodes: one_based(&c.nodes), girth: c.girth, cyclicity: c.cyclicity, index: c.index })
            .collect(),
        n_c: report.n_c,
        h: report.h,
        g_hat: report.g_hat,
        gamma_hat: report.gamma_hat,
        ind_hat: report.ind_hat,
        girth: g.girth(),
        cyclicity: g.cyclicity().ok(),
    };
    if json {
        writeln!(out, "{}", serde_json::to_string_pretty(&view).expect("serializable"))?;
        return Ok(());
    }
    writeln!(out, "n: {}", view.n)?;
    writeln!(out, "irreducible: {}", view.irreducible)?;
    writeln!(out, "lambda: {}", view.lambda)?;
    writeln!(out, "lambda2: {}", view.lambda2)?;
    writeln!(out, "lambda_nc: {}", view.lambda_nc)?;
    writeln!(out, "norm: {}", view.norm)?;
    writeln!(out, "gamma_c: {}", view.gamma_c)?;
    writeln!(out, "critical nodes: {:?}", view.critical_nodes)?;
    for (r, c) in view.components.iter().enumerate() {
        writeln!(
            out,
            "critical component {}: nodes {:?}, girth {}, cyclicity {}, index {}",
            r + 1,
            c.nodes,
            c.girth,
            c.cyclicity,
            c.index
        )?;
    }
    writeln!(out, "n_c: {}, H: {}, g_hat: {}, gamma_hat: {}, ind_hat: {}", view.n_c, view.h, view.g_hat, view.gamma_hat, view.ind_hat)?;
    let opt = |x: Option<String>| x.unwrap_or_else(|| "NA".into());
    writeln!(out, "girth: {}", opt(view.girth.map(|g| g.to_string())))?;
    writeln!(out, "cyclicity: {}", opt(view.cyclicity.map(|c| c.to_string())))?;
    Ok(())
}

fn decompose_cmd(
    path: &Path,
    horizon: Option<usize>,
    verify: bool,
    prefixes: bool,
    out: &mut impl Write,
) -> Result<(), Failure> {
    let a = read_matrix(path)?;
    let n = a.dim();
    let d = decompose(&a);
    for (r, c) in d.components.iter().enumerate() {
        write!(out, "component {}: ratio {}, period {}, transient {}", r + 1, c.ratio(), c.period(), c.transient())?;
        match d.removed_cycles.get(r) {
            Some((cycle, _)) => {
                let nodes: Vec<String> = cycle.nodes().iter().map(|v| (v + 1).to_string()).collect();
                writeln!(out, ", cycle {}", nodes.join(" -> "))?;
            }
            None => writeln!(out, ", acyclic remainder")?,
        }
        if prefixes {
            for (k, m) in c.prefix().iter().enumerate() {
                writeln!(out, "  k = {k}:")?;
                for line in m.to_string().lines() {
                    writeln!(out, "    {line}")?;
                }
            }
        }
    }
    if verify {
        let horizon = horizon.unwrap_or(3 * n * n + 10);
        let report = verify_decomposition(&a, &d, horizon);
        if let Some((k, i, j)) = report.mismatch {
            return Err(Failure::Unsound(format!("decomposition differs at k = {k}, entry ({}, {})", i + 1, j + 1)));
        }
        if let Some((r, t)) = report.oversized.first() {
            return Err(Failure::Unsound(format!("component {} has transient {t} > 2n² − n", r + 1)));
        }
        writeln!(out, "verified: k = 0..={horizon}")?;
    }
    Ok(())
}
