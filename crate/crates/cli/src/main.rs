//! `chaoslab`: runs verification experiments and writes JSON reports.
//!
//! Exit status is 0 when every check passes, 1 when a check fails and 2 on
//! invalid input, in which case no report is written.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use chaos::BasisKind;
use chaoslab::experiments::{chaos as chaos_exp, discrete, rademacher as rad, suite, wick as wick_exp};
use chaoslab::input::{parse_function, parse_jump, parse_rational_array, parse_rational_list};
use chaoslab::ExperimentReport;
use clap::{Args, Parser, Subcommand, ValueEnum};
use laws::rational::parse_q;
use laws::LawKind;
use rademacher::SchemeVariant;

#[derive(Debug, Parser)]
#[command(name = "chaoslab", version, about = "Exact and Monte Carlo checks for Wick polynomials, independence and non-Gaussian chaos")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Write the first convergence table as CSV (depth, estimate, stderr).
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Add the wall time to the report (breaks byte reproducibility).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Wick polynomials of a law.
    #[command(subcommand)]
    Wick(WickCmd),
    /// Generalized Rademacher systems.
    #[command(subcommand)]
    Rademacher(RademacherCmd),
    /// Independence on finite spaces.
    #[command(subcommand)]
    Discrete(DiscreteCmd),
    /// Truncated second-order chaos.
    #[command(subcommand)]
    Chaos(ChaosCmd),
    /// Every experiment family.
    All(AllArgs),
}

#[derive(Debug, Subcommand)]
enum WickCmd {
    /// Table of W_0..W_n with cross-method and differential-equation checks.
    Table(WickArgs),
    /// Gram matrix of W_0..W_n and the orthogonality dichotomy.
    Gram(WickArgs),
}

#[derive(Debug, Args)]
struct WickArgs {
    /// Law: normal, exp:λ, gamma:a,b, gammacombo:α,a1,b1,β,a2,b2, poisson:a, binomial:n,p, custom:m0,m1,...
    #[arg(long, default_value = "normal")]
    law: String,
    #[arg(long, default_value_t = 5)]
    max_n: usize,
}

#[derive(Debug, Subcommand)]
enum RademacherCmd {
    /// Exact factorization of every level tuple.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["alphas", "scheme"])))]
struct VerifyArgs {
    /// Comma-separated ratios, e.g. 1/3,1/2,2/5.
    #[arg(long)]
    alphas: Option<String>,
    /// constant:α, after:a, before:a or alternating:p.
    #[arg(long)]
    scheme: Option<String>,
    /// Jump 'F(X_0),delta'; schemes default to 1/2,1/10, ratios to no jump.
    #[arg(long)]
    jump: Option<String>,
    #[arg(long)]
    depth: usize,
    /// Largest tuple size checked.
    #[arg(long, default_value_t = 3)]
    max_arity: usize,
}

#[derive(Debug, Subcommand)]
enum DiscreteCmd {
    /// Independence and necessary conditions for variables on a finite space.
    Check {
        /// JSON array of atom weights, e.g. ["1/4","1/4","1/2"].
        #[arg(long)]
        space: String,
        /// JSON array of values per atom; repeat for each variable.
        #[arg(long, required = true)]
        rv: Vec<String>,
    },
    /// Largest independent family on n equally likely atoms.
    Nmax {
        #[arg(long)]
        n: usize,
    },
    /// Gram rank of the monomials in i.i.d. copies of a finite variable.
    Walsh {
        /// JSON array of values.
        #[arg(long)]
        values: String,
        /// JSON array of probabilities.
        #[arg(long)]
        probs: String,
        #[arg(long)]
        vars: usize,
    },
}

#[derive(Debug, Subcommand)]
enum ChaosCmd {
    /// Second-moment identity of I(h, g) and the weighted-norm isometries.
    Norm(ChaosArgs),
    /// Itô decomposition and Riemann sums on 2^d cells.
    Ito(ChaosArgs),
    /// Order decomposition of J_2(f)^2.
    Order4(ChaosArgs),
    /// Quadratic variation on dyadic partitions of depth d.
    Qv {
        #[command(flatten)]
        common: ChaosArgs,
        /// Horizon t.
        #[arg(long, default_value = "1")]
        horizon: String,
    },
    /// Fourth-moment bound on s in lefts, t - s = 2^-d.
    Bound4 {
        #[command(flatten)]
        common: ChaosArgs,
        /// Comma-separated left ends; defaults to 0,1/4,1/2,3/4.
        #[arg(long)]
        lefts: Option<String>,
    },
}

#[derive(Debug, Args)]
struct ChaosArgs {
    #[arg(long, default_value = "normal")]
    law: String,
    /// Number N of basis functions.
    #[arg(long, default_value_t = 8)]
    truncation: usize,
    /// legendre or haar.
    #[arg(long, default_value = "legendre")]
    basis: String,
    #[arg(long, default_value_t = 10_000)]
    paths: usize,
    #[arg(long, env = "CHAOSLAB_SEED", default_value_t = 42)]
    seed: u64,
    /// Comma-separated dyadic depths.
    #[arg(long, value_delimiter = ',')]
    depths: Option<Vec<u32>>,
    /// First function as piecewise-polynomial JSON.
    #[arg(long, alias = "h1", default_value = "1")]
    h: String,
    /// Second function as piecewise-polynomial JSON.
    #[arg(long, alias = "h2", default_value = "1")]
    g: String,
}

impl ChaosArgs {
    fn opts(&self, default_depths: impl IntoIterator<Item = u32>) -> Result<chaos_exp::ChaosOpts> {
        let law = LawKind::parse(&self.law)?;
        let mut o = chaos_exp::ChaosOpts::new(
            law,
            self.truncation,
            self.paths,
            self.seed,
            self.depths.clone().unwrap_or_else(|| default_depths.into_iter().collect()),
        );
        o.basis = BasisKind::parse(&self.basis)?;
        o.h = parse_function(&self.h).context("--h")?;
        o.g = parse_function(&self.g).context("--g")?;
        Ok(o)
    }
}

#[derive(Debug, Args)]
struct AllArgs {
    /// Cap truncation at 8, paths at 10^4 and depths at 6.
    #[arg(long)]
    quick: bool,
    #[arg(long, env = "CHAOSLAB_SEED", default_value_t = 42)]
    seed: u64,
}

fn has_table(cmd: &Command) -> bool {
    matches!(
        cmd,
        Command::All(_) | Command::Chaos(ChaosCmd::Ito(_) | ChaosCmd::Qv { .. } | ChaosCmd::Bound4 { .. })
    )
}

fn run(cmd: &Command) -> Result<ExperimentReport> {
    match cmd {
        Command::Wick(WickCmd::Table(a)) => wick_exp::table(&LawKind::parse(&a.law)?, a.max_n),
        Command::Wick(WickCmd::Gram(a)) => wick_exp::gram(&LawKind::parse(&a.law)?, a.max_n),
        Command::Rademacher(RademacherCmd::Verify(a)) => {
            let source = match (&a.alphas, &a.scheme) {
                (Some(list), None) => rad::Source::Alphas(parse_rational_list(list)?),
                (None, Some(s)) => rad::Source::Scheme(SchemeVariant::parse(s)?),
                _ => bail!("give exactly one of --alphas and --scheme"),
            };
            let jump = a.jump.as_deref().map(parse_jump).transpose()?;
            rad::verify(&source, jump, a.depth, a.max_arity)
        }
        Command::Discrete(DiscreteCmd::Check { space, rv }) => {
            let p = parse_rational_array(space).context("--space")?;
            let rvs = rv.iter().map(|s| parse_rational_array(s).context("--rv")).collect::<Result<Vec<_>>>()?;
            discrete::check(&p, &rvs)
        }
        Command::Discrete(DiscreteCmd::Nmax { n }) => discrete::nmax(*n),
        Command::Discrete(DiscreteCmd::Walsh { values, probs, vars }) => {
            discrete::walsh(&parse_rational_array(values)?, &parse_rational_array(probs)?, *vars)
        }
        Command::Chaos(c) => match c {
            ChaosCmd::Norm(a) => chaos_exp::norm(&a.opts([])?),
            ChaosCmd::Ito(a) => chaos_exp::ito(&a.opts(1..=6)?),
            ChaosCmd::Order4(a) => chaos_exp::order4(&a.opts([])?),
            ChaosCmd::Qv { common, horizon } => chaos_exp::qv(&common.opts(3..=7)?, &parse_q(horizon)?),
            ChaosCmd::Bound4 { common, lefts } => {
                let lefts = match lefts {
                    Some(l) => parse_rational_list(l)?,
                    None => chaos_exp::default_lefts(),
                };
                chaos_exp::bound4(&common.opts(2..=5)?, &lefts)
            }
        },
        Command::All(a) => suite::all(a.seed, a.quick),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = (|| -> Result<bool> {
        if cli.csv.is_some() && !has_table(&cli.command) {
            bail!("--csv needs a command with a convergence table (chaos ito, chaos qv, chaos bound4, all)");
        }
        let start = Instant::now();
        let mut report = run(&cli.command)?;
        if cli.timing {
            report.wall_time_ms = Some(start.elapsed().as_millis() as u64);
        }
        let body = match cli.format {
            Format::Json => report.to_json(),
            Format::Text => report.to_text(),
        };
        match &cli.out {
            Some(path) => std::fs::write(path, body).with_context(|| format!("writing {}", path.display()))?,
            None => print!("{body}"),
        }
        if let Some(path) = &cli.csv {
            let table = report.first_table().context("the report has no convergence table")?;
            std::fs::write(path, table.to_csv()).with_context(|| format!("writing {}", path.display()))?;
        }
        Ok(report.passed())
    })();
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("chaoslab: {e:#}");
            ExitCode::from(2)
        }
    }
}
