use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::config::{Algorithm, ExperimentConfig, PoolKind};
use super::csv::{write_aggregate, write_run};
use super::model::{build_model, Model};
use crate::adaptive::{run_avqds, OperatorPool, RunEvent, RunOptions, TrajectoryRecord};
use crate::baselines::{build_hva, trotter_records, vqds_fixed_run};
use crate::error::{Error, Result};

/// Records and events of one seeded run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunResult {
    pub seed: u64,
    pub records: Vec<TrajectoryRecord<f64>>,
    pub events: Vec<RunEvent<f64>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentOutput {
    pub runs: Vec<RunResult>,
    pub files: Vec<PathBuf>,
}

fn pool_for(cfg: &ExperimentConfig, model: &Model) -> Result<OperatorPool> {
    match cfg.pool {
        PoolKind::Default => model.default_pool(),
        PoolKind::SinglesAndPairs => OperatorPool::single_and_nearest_neighbor(cfg.model.n_qubits),
        PoolKind::Pairs => OperatorPool::nearest_neighbor_pairs(cfg.model.n_qubits),
    }
}

/// One trajectory with the given seed.
pub fn run_single(cfg: &ExperimentConfig, seed: u64) -> Result<RunResult> {
    cfg.validate()?;
    let model = build_model(&cfg.model)?;
    let opts = RunOptions {
        step: cfg.step.clone(),
        solver: cfg.solver,
        noise: cfg.noise.clone(),
        oracle: cfg.oracle,
        seed,
    };
    let (records, events) = match cfg.algorithm {
        Algorithm::Avqds => {
            let pool = pool_for(cfg, &model)?;
            let out = run_avqds(&model.psi0, &model.h, &pool, &cfg.growth, &opts)?;
            (out.records, out.events)
        }
        Algorithm::Hva => {
            let ansatz = build_hva(&model.h, &model.hva_spec(cfg.hva_layers)?, model.psi0.clone())?;
            let out = vqds_fixed_run(&ansatz, &model.h, &opts)?;
            (out.records, out.events)
        }
        Algorithm::Trotter => (
            trotter_records(&model.h, &model.psi0, cfg.trotter_dt, cfg.step.t_final, cfg.oracle, seed)?,
            Vec::new(),
        ),
    };
    Ok(RunResult { seed, records, events })
}

/// All `noise.runs` trajectories with seeds `noise.seed + k`, run in parallel.
pub fn run_all(cfg: &ExperimentConfig) -> Result<Vec<RunResult>> {
    cfg.validate()?;
    (0..cfg.noise.runs)
        .into_par_iter()
        .map(|k| run_single(cfg, cfg.noise.seed.wrapping_add(k as u64)))
        .collect()
}

fn write_file(path: &Path, f: impl FnOnce(&mut BufWriter<fs::File>) -> std::io::Result<()>) -> Result<()> {
    let io = |source| Error::Io {
        path: path.display().to_string(),
        source,
    };
    let file = fs::File::create(path).map_err(io)?;
    let mut w = BufWriter::new(file);
    f(&mut w).map_err(io)?;
    std::io::Write::flush(&mut w).map_err(io)
}

/// Runs everything and writes `<label>_run<k>.csv` per run plus
/// `<label>_aggregate.csv` when there is more than one run.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    let runs = run_all(cfg)?;
    let dir = Path::new(&cfg.output);
    fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.display().to_string(),
        source,
    })?;
    let mut files = Vec::new();
    for (k, run) in runs.iter().enumerate() {
        let path = dir.join(format!("{}_run{k}.csv", cfg.label));
        write_file(&path, |w| write_run(w, cfg, k, run))?;
        files.push(path);
    }
    if runs.len() > 1 {
        let path = dir.join(format!("{}_aggregate.csv", cfg.label));
        write_file(&path, |w| write_aggregate(w, cfg, &runs))?;
        files.push(path);
    }
    Ok(ExperimentOutput { runs, files })
}
