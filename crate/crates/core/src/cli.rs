//! The `entgeom` command-line tool.
//!
//! Data goes to stdout (or `--out`), diagnostics to stderr. Exit codes: 0 on
//! success, 1 when a checked identity or inequality is violated, 2 on bad
//! input.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::boundary;
use crate::error::{Error, Result};
use crate::measures::{self, entanglement_report, monogamy_check, MultiQubitState};
use crate::numerics::Complex;
use crate::oracle;
use crate::spinchain::{self, SpinChainSpec};
use crate::squo::{self, DEFAULT_SEPARABILITY_TOL};
use crate::squtuo;
use crate::state::{haar_random_state, load_state, reduced_density, BipartiteState};

/// Checked identities must hold to this accuracy under `--strict`.
const IDENTITY_TOL: f64 = 1e-10;
const ORACLE_TOL: f64 = 1e-12;
const MAX_MONOGAMY_SITES: usize = 8;

#[derive(Debug, Parser)]
#[command(name = "entgeom", version, about = "Entanglement of pure states from local unitary distances")]
pub struct Cli {
    /// Separability threshold on the minimum squared distance.
    #[arg(long, global = true, default_value_t = DEFAULT_SEPARABILITY_TOL)]
    pub tol: f64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Entanglement report of one state as JSON.
    Analyze {
        #[command(flatten)]
        input: StateInput,
        /// Exit 1 if the distance and entropy identities disagree.
        #[arg(long)]
        strict: bool,
    },
    /// Compare the closed-form minimum with a brute-force search.
    OracleCheck {
        #[command(flatten)]
        input: StateInput,
        /// Qubit (θ, φ) grid resolution.
        #[arg(long, num_args = 2, value_names = ["NT", "NP"], conflicts_with = "samples")]
        grid: Option<Vec<usize>>,
        /// Number of random frames.
        #[arg(long, required_unless_present = "grid")]
        samples: Option<usize>,
        /// Seed of the frame sampler.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Monogamy of tangle for random or fixture multiqubit states, as CSV.
    Monogamy {
        /// Number of qubits.
        #[arg(long)]
        n: usize,
        /// Seed range `A..B` (half-open), `A..=B` or a single seed.
        #[arg(long, conflicts_with = "fixture", required_unless_present = "fixture")]
        seeds: Option<String>,
        #[arg(long, value_enum)]
        fixture: Option<Fixture>,
    },
    /// Boundary curves of the qutrit (entropy, linear entropy) region, as CSV.
    Boundary {
        /// Points per curve.
        #[arg(long)]
        points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Transverse-field sweep of an XY chain, as CSV.
    Spinchain {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        gamma: f64,
        #[arg(long)]
        hmin: f64,
        #[arg(long)]
        hmax: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long, default_value_t = 1.0)]
        coupling: f64,
        /// Open instead of periodic boundary conditions.
        #[arg(long)]
        open: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct StateInput {
    /// State file (JSON).
    #[arg(long)]
    pub state: Option<PathBuf>,
    /// Haar-random state of the given shape.
    #[arg(long, num_args = 3, value_names = ["DIMA", "DIMB", "SEED"])]
    pub random: Option<Vec<u64>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Fixture {
    Ghz,
    W,
    Product,
}

impl Fixture {
    fn name(self) -> &'static str {
        match self {
            Fixture::Ghz => "ghz",
            Fixture::W => "w",
            Fixture::Product => "product",
        }
    }

    fn build(self, n: usize) -> Result<MultiQubitState> {
        match self {
            Fixture::Ghz => MultiQubitState::ghz(n),
            Fixture::W => MultiQubitState::w(n),
            Fixture::Product => {
                let factors: Vec<[Complex; 2]> = (0..n)
                    .map(|j| {
                        let t = 0.3 * (j + 1) as f64;
                        [Complex::new(t.cos(), 0.0), Complex::from_polar(t.sin(), 0.7 * j as f64)]
                    })
                    .collect();
                MultiQubitState::product(&factors)
            }
        }
    }
}

fn load_input(input: &StateInput) -> Result<(BipartiteState, Value)> {
    match (&input.state, &input.random) {
        (Some(path), None) => {
            let psi = load_state(path)?;
            Ok((psi, json!({"source": "file", "path": path.display().to_string()})))
        }
        (None, Some(r)) => {
            let (a, b, seed) = (r[0] as usize, r[1] as usize, r[2]);
            let psi = haar_random_state(a, b, seed)?;
            Ok((psi, json!({"source": "random", "dim_a": a, "dim_b": b, "seed": seed})))
        }
        _ => Err(Error::InvalidInput("give exactly one of --state or --random".into())),
    }
}

fn parse_seeds(text: &str) -> Result<Vec<u64>> {
    let bad = || Error::InvalidInput(format!("bad seed range '{text}'"));
    let num = |s: &str| s.trim().parse::<u64>().map_err(|_| bad());
    if let Some((a, b)) = text.split_once("..=") {
        let (a, b) = (num(a)?, num(b)?);
        if a > b {
            return Err(bad());
        }
        Ok((a..=b).collect())
    } else if let Some((a, b)) = text.split_once("..") {
        let (a, b) = (num(a)?, num(b)?);
        if a >= b {
            return Err(bad());
        }
        Ok((a..b).collect())
    } else {
        Ok(vec![num(text)?])
    }
}

fn open_output(out: &Option<PathBuf>, stdout: &mut dyn Write, body: &[u8]) -> Result<()> {
    match out {
        Some(path) => {
            let mut f = BufWriter::new(File::create(path)?);
            f.write_all(body)?;
            f.flush()?;
        }
        None => stdout.write_all(body)?,
    }
    Ok(())
}

fn print_json(stdout: &mut dyn Write, value: &Value) -> Result<()> {
    let text = serde_json::to_string(value).map_err(|e| Error::InvalidInput(e.to_string()))?;
    writeln!(stdout, "{text}")?;
    Ok(())
}

fn analyze(cli_tol: f64, input: &StateInput, strict: bool, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let (psi, provenance) = load_input(input)?;
    let report = entanglement_report(&psi, cli_tol)?;
    let mut value = serde_json::to_value(&report).map_err(|e| Error::InvalidInput(e.to_string()))?;
    value["input"] = provenance;
    print_json(stdout, &value)?;

    let mut violations = Vec::new();
    if (report.min_d2 - report.linear_entropy).abs() > IDENTITY_TOL {
        violations.push(format!(
            "min_d2 {} differs from linear entropy {}",
            report.min_d2, report.linear_entropy
        ));
    }
    let l = report.dim_a as f64;
    let purity_defect = report.purity + (l - 1.0) / l * report.linear_entropy - 1.0;
    if purity_defect.abs() > IDENTITY_TOL {
        violations.push(format!("purity relation off by {purity_defect:e}"));
    }
    if let Some(t) = report.tangle {
        if (t - report.linear_entropy).abs() > IDENTITY_TOL {
            violations.push(format!("tangle {t} differs from linear entropy {}", report.linear_entropy));
        }
    }
    for v in &violations {
        writeln!(stderr, "identity violated: {v}")?;
    }
    Ok(if strict && !violations.is_empty() { 1 } else { 0 })
}

fn oracle_check(
    input: &StateInput,
    grid: &Option<Vec<usize>>,
    samples: Option<usize>,
    seed: u64,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<i32> {
    let (psi, provenance) = load_input(input)?;
    let (method, analytic, oracle) = match (psi.dim_a(), grid, samples) {
        (2, Some(g), _) => {
            let analytic = squo::optimal_squo(&psi)?.min_d2;
            ("grid", analytic, oracle::grid_min_squo(&psi, g[0], g[1])?.min_d2)
        }
        (2, None, Some(k)) => {
            let analytic = measures::tangle(&reduced_density(&psi)?)?;
            ("basis_scan", analytic, oracle::basis_scan_qubit(&psi, k, seed)?)
        }
        (3, None, Some(k)) => {
            let analytic = squtuo::min_squared_distance_qutrit(&psi)?.min_d2;
            ("frames", analytic, oracle::random_basis_min_squtuo(&psi, k, seed)?.min_d2)
        }
        (3, Some(_), _) => {
            return Err(Error::InvalidInput("qutrit states need --samples; the angle grid is qubit-only".into()))
        }
        _ => return Err(Error::InvalidInput("give --grid NT NP or --samples K".into())),
    };
    let gap = oracle - analytic;
    let value = json!({
        "method": method,
        "analytic": analytic,
        "oracle": oracle,
        "gap": gap,
        "dim_a": psi.dim_a(),
        "dim_b": psi.dim_b(),
        "input": provenance,
    });
    print_json(stdout, &value)?;
    if gap < -ORACLE_TOL {
        writeln!(stderr, "oracle beat the closed form by {:e}", -gap)?;
        return Ok(1);
    }
    Ok(0)
}

fn monogamy(n: usize, seeds: &Option<String>, fixture: Option<Fixture>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    if !(2..=MAX_MONOGAMY_SITES).contains(&n) {
        return Err(Error::InvalidInput(format!("--n must lie in 2..={MAX_MONOGAMY_SITES}, got {n}")));
    }
    let states: Vec<(String, MultiQubitState)> = match (seeds, fixture) {
        (_, Some(f)) => vec![(f.name().to_string(), f.build(n)?)],
        (Some(text), None) => parse_seeds(text)?
            .into_iter()
            .map(|s| Ok((s.to_string(), MultiQubitState::haar_random(n, s)?)))
            .collect::<Result<_>>()?,
        (None, None) => return Err(Error::InvalidInput("give --seeds or --fixture".into())),
    };
    let mut body = String::from("seed,site,lhs,rhs,slack\n");
    let mut violated = false;
    for (label, psi) in &states {
        for site in 0..n {
            let m = monogamy_check(psi, site)?;
            violated |= m.slack < -measures::MONOGAMY_TOL;
            body.push_str(&format!("{label},{site},{},{},{}\n", m.lhs, m.rhs, m.slack));
        }
    }
    stdout.write_all(body.as_bytes())?;
    if violated {
        writeln!(stderr, "monogamy inequality violated")?;
        return Ok(1);
    }
    Ok(0)
}

fn run_command(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    if !(cli.tol > 0.0) || !cli.tol.is_finite() {
        return Err(Error::InvalidInput(format!("--tol must be positive, got {}", cli.tol)));
    }
    match &cli.command {
        Command::Analyze { input, strict } => analyze(cli.tol, input, *strict, stdout, stderr),
        Command::OracleCheck {
            input,
            grid,
            samples,
            seed,
        } => oracle_check(input, grid, *samples, *seed, stdout, stderr),
        Command::Monogamy { n, seeds, fixture } => monogamy(*n, seeds, *fixture, stdout, stderr),
        Command::Boundary { points, out } => {
            let curves = boundary::generate_curves(*points)?;
            let mut body = Vec::new();
            boundary::write_csv(&curves, &mut body)?;
            open_output(out, stdout, &body)?;
            Ok(0)
        }
        Command::Spinchain {
            n,
            gamma,
            hmin,
            hmax,
            steps,
            coupling,
            open,
            out,
        } => {
            let spec = SpinChainSpec {
                n_sites: *n,
                gamma: *gamma,
                field: *hmin,
                coupling: *coupling,
                periodic: !*open,
            };
            spec.validate()?;
            let points = spinchain::sweep(&spec, *hmin, *hmax, *steps)?;
            let mut body = Vec::new();
            spinchain::write_sweep_csv(&points, &mut body)?;
            open_output(out, stdout, &body)?;
            Ok(0)
        }
    }
}

/// Runs a parsed command line; returns the process exit code.
pub fn run(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    match run_command(cli, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
    }
}

/// Entry point used by the binary.
pub fn main_with_args(args: impl IntoIterator<Item = std::ffi::OsString>) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let stdout = io::stdout();
    let stderr = io::stderr();
    let mut out = stdout.lock();
    let mut err = stderr.lock();
    let code = run(&cli, &mut out, &mut err);
    let _ = out.flush();
    code
}
