//! `qwt` — transport efficiency of continuous-time quantum walks with a trap.
//!
//! Exit codes: 0 success (all requested computations converged, every
//! applicable closed-form match flag true), 1 usage/configuration error,
//! 2 computation error, 3 dynamics horizon not reached (partial result is
//! still printed), 4 a closed-form match flag is false.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qwt::cli::{
    efficiency_csv, efficiency_json, null_check_json, parse_perturb, parse_state,
    parse_superpose, parse_sweep_axis, run_efficiency, run_null_check, run_sweep, Method,
    OutputFormat, RunConfig,
};
use qwt::hamiltonian::InitialStateSpec;

#[derive(Parser)]
#[command(name = "qwt", version, about = "Quantum-walk transport efficiency with a trapping vertex")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ScenarioArgs {
    /// Graph spec ("complete:N", "cbg:N1,N2", "star:N", "star:N:outer") or an
    /// edge-list file path ("r s [lambda theta]" per line, '#' comments)
    #[arg(long)]
    graph: String,

    /// Trap vertex (default: 0, or 1 for "star:N:outer")
    #[arg(long)]
    trap: Option<usize>,

    /// Trapping rate κ (the efficiency itself is κ-independent)
    #[arg(long, default_value_t = 1.0)]
    kappa: f64,

    /// Initial state localized at this vertex
    #[arg(long, conflicts_with = "superpose")]
    localized: Option<usize>,

    /// Initial superposition "l,k,gamma" (gamma accepts "pi" literals)
    #[arg(long)]
    superpose: Option<String>,

    /// Perturb an edge: "r,s,lambda,theta" (repeatable; theta accepts "pi")
    #[arg(long = "perturb")]
    perturb: Vec<String>,

    /// Efficiency method: overlap | dynamics | both
    #[arg(long, default_value = "overlap")]
    method: String,

    /// Write output here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,

    /// Output format: csv | json
    #[arg(long)]
    format: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the transport efficiency of one scenario
    Efficiency(ScenarioArgs),

    /// Sweep parameters over a grid and emit CSV rows
    Sweep {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Sweep axis "key=values" (repeatable, at most two): lambda/theta/
        /// gamma comma lists, "theta=grid:K", "n=a..b"
        #[arg(long = "sweep", required = true)]
        sweep: Vec<String>,
    },

    /// Check a state for null transport efficiency and stationarity
    NullCheck {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Comma-separated complex amplitudes, e.g. "0,0.5,-0.5,0,0.5,-0.5,0"
        #[arg(long)]
        state: String,
    },
}

fn build_config(args: &ScenarioArgs) -> Result<RunConfig, qwt::Error> {
    let initial = match (&args.localized, &args.superpose) {
        (Some(l), None) => InitialStateSpec::Localized { l: *l },
        (None, Some(text)) => parse_superpose(text)?,
        (None, None) => {
            return Err(qwt::Error::Parse("an initial state is required: --localized or --superpose".into()))
        }
        (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
    };
    let mut config = RunConfig::new(args.graph.clone(), initial);
    config.trap = args.trap;
    config.kappa = args.kappa;
    config.method = Method::parse(&args.method)?;
    for p in &args.perturb {
        config.perturbations.push(parse_perturb(p)?);
    }
    Ok(config)
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), qwt::Error> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run() -> Result<u8, qwt::Error> {
    let cli = Cli::parse();
    match cli.command {
        Command::Efficiency(args) => {
            let config = build_config(&args)?;
            let format = match &args.format {
                Some(f) => OutputFormat::parse(f)?,
                None => OutputFormat::Json,
            };
            let outcome = run_efficiency(&config)?;
            let text = match format {
                OutputFormat::Json => efficiency_json(&outcome),
                OutputFormat::Csv => efficiency_csv(&outcome),
            };
            emit(&args.out, &text)?;
            if outcome.horizon_error {
                Ok(3)
            } else if !outcome.all_ok() {
                Ok(4)
            } else {
                Ok(0)
            }
        }
        Command::Sweep { scenario, sweep } => {
            let config = build_config(&scenario)?;
            if let Some(f) = &scenario.format {
                // sweeps are tabular; json is not offered
                if OutputFormat::parse(f)? != OutputFormat::Csv {
                    return Err(qwt::Error::Parse("sweep output is csv".into()));
                }
            }
            let axes = sweep.iter().map(|s| parse_sweep_axis(s)).collect::<Result<Vec<_>, _>>()?;
            let csv = run_sweep(&config, &axes)?;
            emit(&scenario.out, &csv)?;
            Ok(0)
        }
        Command::NullCheck { scenario, state } => {
            let config = build_config(&scenario)?;
            let amps = parse_state(&state)?;
            let report = run_null_check(&config, &amps)?;
            emit(&scenario.out, &null_check_json(&report))?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            let code = match err {
                qwt::Error::Parse(_) | qwt::Error::Value(_) | qwt::Error::Size(_) => 1u8,
                qwt::Error::Horizon { .. } => 3,
                _ => 2,
            };
            ExitCode::from(code)
        }
    }
}
