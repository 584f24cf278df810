//! Command-line front end for running experiments and presets.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use avqds::adaptive::GrowthMethod;
use avqds::harness::{build_model, preset, run_experiment, ExperimentConfig, ModelKind, ModelSpec, Overrides};
use avqds::kernel::exact_evolve;
use avqds::solvers::SolverMethod;
use avqds::Error;
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "avqds", version, about = "Adaptive variational quantum dynamics simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a config file.
    Run {
        config: PathBuf,
        #[command(flatten)]
        overrides: OverrideArgs,
    },
    /// Run a named preset.
    Preset {
        name: String,
        #[command(flatten)]
        overrides: OverrideArgs,
    },
    /// Check a config file without running it.
    Validate { config: PathBuf },
    /// Dump exact quench dynamics of a model as CSV.
    Oracle {
        #[arg(long, default_value = "tfim")]
        model: String,
        #[arg(long, default_value_t = 8)]
        nq: usize,
        #[arg(long, default_value_t = 4.0)]
        t_final: f64,
        /// Number of equal time intervals; rows are written at both ends.
        #[arg(long, default_value_t = 100)]
        points: usize,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Default)]
struct OverrideArgs {
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    runs: Option<usize>,
    /// Output directory.
    #[arg(long)]
    out: Option<String>,
    #[arg(long)]
    t_final: Option<f64>,
    /// Growth method 1, 2 or 3.
    #[arg(long)]
    method: Option<String>,
    /// lsq_unbounded, lsq_bounded, tikhonov or truncation.
    #[arg(long)]
    solver: Option<String>,
    #[arg(long)]
    epsilon: Option<f64>,
    /// Shots per element of M.
    #[arg(long)]
    ns: Option<u64>,
    /// Exact-block depth threshold.
    #[arg(long)]
    dc: Option<usize>,
    #[arg(long)]
    l2_cut: Option<f64>,
    /// tfim, mfim or hm.
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    nq: Option<usize>,
}

/// Failure reported as one `key=value` line on standard error.
struct Failure {
    kind: &'static str,
    key: Option<String>,
    line: Option<usize>,
    message: String,
}

impl Failure {
    fn flag(key: &str, message: impl ToString) -> Self {
        Self {
            kind: "argument",
            key: Some(key.to_string()),
            line: None,
            message: message.to_string(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(c) => Self {
                kind: "config",
                key: Some(c.key),
                line: c.line,
                message: c.message,
            },
            Error::Io { path, source } => Self {
                kind: "io",
                key: Some(path),
                line: None,
                message: source.to_string(),
            },
            other => Self {
                kind: "run",
                key: None,
                line: None,
                message: other.to_string(),
            },
        }
    }
}

impl OverrideArgs {
    fn resolve(&self) -> Result<Overrides, Failure> {
        Ok(Overrides {
            seed: self.seed,
            runs: self.runs,
            out: self.out.clone(),
            t_final: self.t_final,
            method: self
                .method
                .as_deref()
                .map(|m| m.parse::<GrowthMethod>().map_err(|e| Failure::flag("--method", e)))
                .transpose()?,
            solver: self
                .solver
                .as_deref()
                .map(|m| m.parse::<SolverMethod>().map_err(|e| Failure::flag("--solver", e)))
                .transpose()?,
            epsilon: self.epsilon,
            n_shots: self.ns,
            d_c: self.dc,
            l2_cut: self.l2_cut,
            model: self
                .model
                .as_deref()
                .map(|m| m.parse::<ModelKind>().map_err(|e| Failure::flag("--model", e)))
                .transpose()?,
            n_qubits: self.nq,
        })
    }
}

fn read_config(path: &PathBuf) -> Result<ExperimentConfig, Failure> {
    let text = fs::read_to_string(path).map_err(|source| {
        Failure::from(Error::Io {
            path: path.display().to_string(),
            source,
        })
    })?;
    ExperimentConfig::parse(&text).map_err(|e| Failure::from(Error::from(e)))
}

fn execute(configs: &[ExperimentConfig]) -> Result<(), Failure> {
    let stdout = io::stdout();
    for cfg in configs {
        let out = run_experiment(cfg)?;
        let mut lock = stdout.lock();
        for f in &out.files {
            let _ = writeln!(lock, "{}", f.display());
        }
    }
    Ok(())
}

fn oracle(model: &str, nq: usize, t_final: f64, points: usize, out: Option<&PathBuf>) -> Result<(), Failure> {
    let kind = model.parse::<ModelKind>().map_err(|e| Failure::flag("--model", e))?;
    if !(t_final > 0.0) || points == 0 {
        return Err(Failure::flag("--t-final", "t_final and points must be positive"));
    }
    let m = build_model(&ModelSpec::standard(kind, nq))?;
    let mut text = String::from("t,energy,return_probability\n");
    let mut psi = m.psi0.clone();
    let mut t_prev = 0.0;
    let fmt = avqds::harness::csv::fmt_real;
    for k in 0..=points {
        let t = k as f64 * t_final / points as f64;
        psi = exact_evolve(&m.h, t - t_prev, &psi).map_err(Error::from)?;
        t_prev = t;
        let e = m.h.expectation(&psi).map_err(Error::from)?;
        let p = m.psi0.fidelity(&psi).map_err(Error::from)?;
        text.push_str(&format!("{},{},{}\n", fmt(t), fmt(e), fmt(p)));
    }
    match out {
        Some(path) => fs::write(path, text).map_err(|source| {
            Failure::from(Error::Io {
                path: path.display().to_string(),
                source,
            })
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Run { config, overrides } => {
            let mut cfg = read_config(&config)?;
            overrides.resolve()?.apply(&mut cfg);
            cfg.validate().map_err(|e| Failure::from(Error::from(e)))?;
            execute(&[cfg])
        }
        Command::Preset { name, overrides } => {
            let list = preset(&name, &overrides.resolve()?).map_err(|e| match e {
                Error::Invalid(m) if m.starts_with("unknown preset") => Failure::flag("preset", m),
                other => Failure::from(other),
            })?;
            execute(&list)
        }
        Command::Validate { config } => {
            read_config(&config)?;
            println!("ok");
            Ok(())
        }
        Command::Oracle {
            model,
            nq,
            t_final,
            points,
            out,
        } => oracle(&model, nq, t_final, points, out.as_ref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let mut line = format!("error kind={}", f.kind);
            if let Some(k) = f.key {
                line.push_str(&format!(" key={k}"));
            }
            if let Some(l) = f.line {
                line.push_str(&format!(" line={l}"));
            }
            line.push_str(&format!(" message={:?}", f.message));
            eprintln!("{line}");
            ExitCode::FAILURE
        }
    }
}
