use super::config::{Algorithm, ExperimentConfig};
use super::model::{ModelKind, ModelSpec};
use crate::adaptive::GrowthMethod;
use crate::error::{Error, Result};
use crate::solvers::{SolverConfig, SolverMethod};

pub const PRESETS: [&str; 5] = ["fig2-solvers", "fig3-circuits", "fig4-benchmark", "fig5-hybrid", "noisy-hva"];

/// Command-line adjustments applied on top of a preset or config file.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub runs: Option<usize>,
    pub out: Option<String>,
    pub t_final: Option<f64>,
    pub method: Option<GrowthMethod>,
    pub solver: Option<SolverMethod>,
    pub epsilon: Option<f64>,
    pub n_shots: Option<u64>,
    pub d_c: Option<usize>,
    pub l2_cut: Option<f64>,
    pub model: Option<ModelKind>,
    pub n_qubits: Option<usize>,
}

impl Overrides {
    /// Model and size overrides reset the couplings to their standard values.
    pub fn apply(&self, cfg: &mut ExperimentConfig) {
        if self.model.is_some() || self.n_qubits.is_some() {
            let kind = self.model.unwrap_or(cfg.model.kind);
            cfg.model = ModelSpec::standard(kind, self.n_qubits.unwrap_or(cfg.model.n_qubits));
        }
        if let Some(s) = self.seed {
            cfg.noise.seed = s;
        }
        if let Some(r) = self.runs {
            cfg.noise.runs = r;
        }
        if let Some(o) = &self.out {
            cfg.output.clone_from(o);
        }
        if let Some(t) = self.t_final {
            cfg.step.t_final = t;
        }
        if let Some(m) = self.method {
            cfg.growth.method = m;
        }
        if let Some(s) = self.solver {
            cfg.solver.method = s;
        }
        if let Some(e) = self.epsilon {
            cfg.solver.epsilon = e;
        }
        if let Some(n) = self.n_shots {
            cfg.noise.n_shots = Some(n);
        }
        if let Some(d) = self.d_c {
            cfg.noise.d_c = d;
        }
        if let Some(c) = self.l2_cut {
            cfg.growth.l2_cut = c;
        }
    }
}

fn base(label: &str, kind: ModelKind, n: usize, t_final: f64) -> ExperimentConfig {
    let mut c = ExperimentConfig {
        label: label.to_string(),
        model: ModelSpec::standard(kind, n),
        ..ExperimentConfig::default()
    };
    c.step.t_final = t_final;
    c
}

/// Trotter step and HVA depth used for each model in the benchmark.
fn benchmark_params(kind: ModelKind) -> (f64, usize) {
    match kind {
        ModelKind::Tfim => (0.04, 10),
        ModelKind::Mfim => (0.03, 30),
        ModelKind::Hm => (0.01, 20),
    }
}

/// The experiment list of a named preset, with `ov` applied to each entry.
pub fn preset(name: &str, ov: &Overrides) -> Result<Vec<ExperimentConfig>> {
    let kind = ov.model.unwrap_or(ModelKind::Tfim);
    let mut list = match name {
        "fig2-solvers" => {
            let n = ov.n_qubits.unwrap_or(8);
            let solvers = [
                SolverConfig::lsq_unbounded(),
                SolverConfig::lsq_bounded(5.0),
                SolverConfig::tikhonov(1e-6),
                SolverConfig::truncation(1e-6),
            ];
            solvers
                .into_iter()
                .map(|s| {
                    let mut c = base(&format!("fig2_{}", s.method), ModelKind::Tfim, n, 4.0);
                    c.solver = s;
                    c.step.max_steps = Some(20_000);
                    c
                })
                .collect()
        }
        "fig3-circuits" => [GrowthMethod::Single, GrowthMethod::Layer]
            .into_iter()
            .map(|m| {
                let mut c = base(&format!("fig3_method{}", m.number()), ModelKind::Tfim, 4, 5.0);
                c.growth.method = m;
                c
            })
            .collect(),
        "fig4-benchmark" => {
            let n = ov.n_qubits.unwrap_or(8);
            let (dt, layers) = benchmark_params(kind);
            let tag = kind.name();
            let mut m1 = base(&format!("fig4_{tag}_avqds_m1"), kind, n, 5.0);
            m1.growth.method = GrowthMethod::Single;
            let m3 = base(&format!("fig4_{tag}_avqds_m3"), kind, n, 5.0);
            let mut trotter = base(&format!("fig4_{tag}_trotter"), kind, n, 5.0);
            trotter.algorithm = Algorithm::Trotter;
            trotter.trotter_dt = dt;
            let mut hva = base(&format!("fig4_{tag}_hva"), kind, n, 5.0);
            hva.algorithm = Algorithm::Hva;
            hva.hva_layers = layers;
            vec![m1, m3, trotter, hva]
        }
        "fig5-hybrid" => {
            let n = ov.n_qubits.unwrap_or(10);
            let mut list = Vec::new();
            let mut clean = base("fig5_noiseless", ModelKind::Tfim, n, 5.0);
            clean.growth.max_depth = Some(30);
            list.push(clean.clone());
            let mut hva = base("fig5_hva", ModelKind::Tfim, n, 5.0);
            hva.algorithm = Algorithm::Hva;
            hva.hva_layers = 10;
            list.push(hva);
            for d_c in [21, 27] {
                for (ns, tag) in [(10_000u64, "1e4"), (100_000, "1e5")] {
                    let mut c = clean.clone();
                    c.label = format!("fig5_dc{d_c}_ns{tag}");
                    c.noise.n_shots = Some(ns);
                    c.noise.d_c = d_c;
                    c.noise.runs = 20;
                    list.push(c);
                }
            }
            list
        }
        "noisy-hva" => {
            let n = ov.n_qubits.unwrap_or(6);
            [SolverConfig::truncation(1e-3), SolverConfig::tikhonov(1e-2)]
                .into_iter()
                .map(|s| {
                    let mut c = base(&format!("noisyhva_{}", s.method), ModelKind::Tfim, n, 2.0);
                    c.algorithm = Algorithm::Hva;
                    c.hva_layers = 8;
                    c.solver = s;
                    c.step.dt_fixed = Some(0.005);
                    c.noise.n_shots = Some(10_000);
                    c.noise.runs = 20;
                    c
                })
                .collect()
        }
        other => {
            return Err(Error::Invalid(format!(
                "unknown preset '{other}' (one of: {})",
                PRESETS.join(", ")
            )))
        }
    };
    for c in &mut list {
        ov.apply(c);
        c.validate()?;
    }
    Ok(list)
}
