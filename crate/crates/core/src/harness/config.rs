//! Flat `section.key = value` experiment files.
//!
//! One assignment per line; `#` starts a comment; blank lines are ignored.
//! Keys may appear in any order but at most once; missing keys keep their
//! defaults. Reals use Rust float syntax, optional values accept `none`,
//! `noise.n_shots` accepts `inf`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use super::model::{ModelKind, ModelSpec};
use crate::adaptive::{GrowthConfig, GrowthMethod, StepConfig};
use crate::noise::NoiseConfig;
use crate::solvers::{SolverConfig, SolverMethod};

/// A bad key, value or combination, naming the key at fault.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("{}{key}: {message}", line.map(|l| format!("line {l}: ")).unwrap_or_default())]
pub struct ConfigError {
    pub key: String,
    pub line: Option<usize>,
    pub message: String,
}

impl ConfigError {
    pub fn new(key: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            key: key.into(),
            line: None,
            message: message.into(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Avqds,
    Trotter,
    Hva,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Avqds => "avqds",
            Algorithm::Trotter => "trotter",
            Algorithm::Hva => "hva",
        }
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        [Algorithm::Avqds, Algorithm::Trotter, Algorithm::Hva]
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("expected avqds, trotter or hva, got '{s}'"))
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PoolKind {
    /// The model's default pool.
    Default,
    SinglesAndPairs,
    Pairs,
}

impl PoolKind {
    pub fn name(self) -> &'static str {
        match self {
            PoolKind::Default => "default",
            PoolKind::SinglesAndPairs => "singles_and_pairs",
            PoolKind::Pairs => "pairs",
        }
    }
}

impl FromStr for PoolKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        [PoolKind::Default, PoolKind::SinglesAndPairs, PoolKind::Pairs]
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("expected default, singles_and_pairs or pairs, got '{s}'"))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    /// File stem for the CSV outputs.
    pub label: String,
    /// Output directory.
    pub output: String,
    pub algorithm: Algorithm,
    /// Record infidelity against exact evolution.
    pub oracle: bool,
    pub model: ModelSpec,
    pub pool: PoolKind,
    pub growth: GrowthConfig<f64>,
    pub step: StepConfig<f64>,
    pub solver: SolverConfig<f64>,
    pub noise: NoiseConfig,
    pub trotter_dt: f64,
    pub hva_layers: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            label: "avqds".into(),
            output: "out".into(),
            algorithm: Algorithm::Avqds,
            oracle: true,
            model: ModelSpec::standard(ModelKind::Tfim, 8),
            pool: PoolKind::Default,
            growth: GrowthConfig::default(),
            step: StepConfig::until(4.0),
            solver: SolverConfig::default(),
            noise: NoiseConfig::noiseless(),
            trotter_dt: 0.04,
            hva_layers: 10,
        }
    }
}

fn real(x: f64) -> String {
    format!("{x:?}")
}

fn opt<T>(x: Option<T>, f: impl Fn(T) -> String) -> String {
    x.map_or_else(|| "none".to_string(), f)
}

fn parse_real(v: &str) -> Result<f64, String> {
    v.parse::<f64>().map_err(|_| format!("expected a real number, got '{v}'"))
}

fn parse_int<T: FromStr>(v: &str) -> Result<T, String> {
    v.parse::<T>().map_err(|_| format!("expected a non-negative integer, got '{v}'"))
}

fn parse_opt<T>(v: &str, f: impl Fn(&str) -> Result<T, String>) -> Result<Option<T>, String> {
    if v == "none" {
        Ok(None)
    } else {
        f(v).map(Some)
    }
}

fn parse_bool(v: &str) -> Result<bool, String> {
    match v {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(format!("expected true or false, got '{v}'")),
    }
}

impl ExperimentConfig {
    /// All keys with their serialized values, in file order.
    pub fn to_pairs(&self) -> Vec<(&'static str, String)> {
        let g = &self.growth;
        let s = &self.step;
        let n = &self.noise;
        vec![
            ("run.label", self.label.clone()),
            ("run.output", self.output.clone()),
            ("run.algorithm", self.algorithm.to_string()),
            ("run.oracle", self.oracle.to_string()),
            ("model.kind", self.model.kind.to_string()),
            ("model.n_qubits", self.model.n_qubits.to_string()),
            ("model.j", real(self.model.j)),
            ("model.h_x", real(self.model.h_x)),
            ("model.h_z", real(self.model.h_z)),
            ("growth.pool", self.pool.name().to_string()),
            ("growth.method", g.method.to_string()),
            ("growth.l2_cut", real(g.l2_cut)),
            ("growth.score_cut", real(g.score_cut)),
            ("growth.max_depth", opt(g.max_depth, |d| d.to_string())),
            ("growth.max_grow_iters", g.max_grow_iters.to_string()),
            ("step.dtheta_max", real(s.dtheta_max)),
            ("step.dt_fixed", opt(s.dt_fixed, real)),
            ("step.t_final", real(s.t_final)),
            ("step.stop_infidelity", opt(s.stop_infidelity, real)),
            ("step.max_steps", opt(s.max_steps, |d| d.to_string())),
            ("solver.method", self.solver.method.to_string()),
            ("solver.epsilon", real(self.solver.epsilon)),
            ("solver.bound", real(self.solver.bound)),
            ("noise.n_shots", n.n_shots.map_or_else(|| "inf".into(), |x| x.to_string())),
            ("noise.d_c", n.d_c.to_string()),
            ("noise.noisy_v", n.noisy_v.to_string()),
            ("noise.truncate_sigma", opt(n.truncate_sigma, real)),
            ("noise.seed", n.seed.to_string()),
            ("noise.runs", n.runs.to_string()),
            ("trotter.dt", real(self.trotter_dt)),
            ("hva.layers", self.hva_layers.to_string()),
        ]
    }

    pub fn keys() -> Vec<&'static str> {
        Self::default().to_pairs().into_iter().map(|(k, _)| k).collect()
    }

    /// Sets one key from its textual value (no validation across keys).
    pub fn set(&mut self, key: &str, v: &str) -> Result<(), ConfigError> {
        let r: Result<(), String> = (|| {
            match key {
                "run.label" => self.label = v.to_string(),
                "run.output" => self.output = v.to_string(),
                "run.algorithm" => self.algorithm = v.parse()?,
                "run.oracle" => self.oracle = parse_bool(v)?,
                "model.kind" => self.model.kind = v.parse().map_err(|e: crate::Error| e.to_string())?,
                "model.n_qubits" => self.model.n_qubits = parse_int(v)?,
                "model.j" => self.model.j = parse_real(v)?,
                "model.h_x" => self.model.h_x = parse_real(v)?,
                "model.h_z" => self.model.h_z = parse_real(v)?,
                "growth.pool" => self.pool = v.parse()?,
                "growth.method" => {
                    self.growth.method = v.parse::<GrowthMethod>().map_err(|e| e.to_string())?
                }
                "growth.l2_cut" => self.growth.l2_cut = parse_real(v)?,
                "growth.score_cut" => self.growth.score_cut = parse_real(v)?,
                "growth.max_depth" => self.growth.max_depth = parse_opt(v, parse_int)?,
                "growth.max_grow_iters" => self.growth.max_grow_iters = parse_int(v)?,
                "step.dtheta_max" => self.step.dtheta_max = parse_real(v)?,
                "step.dt_fixed" => self.step.dt_fixed = parse_opt(v, parse_real)?,
                "step.t_final" => self.step.t_final = parse_real(v)?,
                "step.stop_infidelity" => self.step.stop_infidelity = parse_opt(v, parse_real)?,
                "step.max_steps" => self.step.max_steps = parse_opt(v, parse_int)?,
                "solver.method" => {
                    self.solver.method = v.parse::<SolverMethod>().map_err(|e| e.to_string())?
                }
                "solver.epsilon" => self.solver.epsilon = parse_real(v)?,
                "solver.bound" => self.solver.bound = parse_real(v)?,
                "noise.n_shots" => {
                    self.noise.n_shots = if v == "inf" { None } else { Some(parse_int(v)?) }
                }
                "noise.d_c" => self.noise.d_c = parse_int(v)?,
                "noise.noisy_v" => self.noise.noisy_v = parse_bool(v)?,
                "noise.truncate_sigma" => self.noise.truncate_sigma = parse_opt(v, parse_real)?,
                "noise.seed" => self.noise.seed = parse_int(v)?,
                "noise.runs" => self.noise.runs = parse_int(v)?,
                "trotter.dt" => self.trotter_dt = parse_real(v)?,
                "hva.layers" => self.hva_layers = parse_int(v)?,
                _ => return Err("unknown key".to_string()),
            }
            Ok(())
        })();
        r.map_err(|m| ConfigError::new(key, m))
    }

    /// Parses and validates a config file's contents.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = Self::default();
        let mut seen = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let at = |mut e: ConfigError| {
                e.line = Some(i + 1);
                e
            };
            let Some((k, v)) = line.split_once('=') else {
                return Err(at(ConfigError::new(line, "expected 'key = value'")));
            };
            let (k, v) = (k.trim(), v.trim());
            if seen.contains(&k) {
                return Err(at(ConfigError::new(k, "duplicate key")));
            }
            seen.push(k);
            cfg.set(k, v).map_err(at)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn serialize(&self) -> String {
        self.to_pairs()
            .into_iter()
            .map(|(k, v)| format!("{k} = {v}\n"))
            .collect()
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |k: &str, m: String| Err(ConfigError::new(k, m));
        let pos = |x: f64| x > 0.0 && x.is_finite();
        let text_ok = |s: &str| !s.is_empty() && !s.contains(['#', '\n', '\r']) && s.trim() == s;
        if !text_ok(&self.label) || self.label.contains(['/', '\\']) {
            return bad("run.label", format!("invalid label '{}'", self.label));
        }
        if !text_ok(&self.output) {
            return bad("run.output", format!("invalid output path '{}'", self.output));
        }
        if let Err(e) = self.model.validate() {
            let key = if self.model.n_qubits < 3 || self.model.n_qubits > crate::kernel::MAX_STATE_QUBITS {
                "model.n_qubits"
            } else {
                "model"
            };
            return bad(key, e.to_string());
        }
        let g = &self.growth;
        if !(g.score_cut >= 0.0) || !g.score_cut.is_finite() {
            return bad("growth.score_cut", format!("must be >= 0, got {}", g.score_cut));
        }
        if !pos(g.l2_cut) || g.l2_cut <= g.score_cut {
            return bad("growth.l2_cut", format!("must exceed score_cut, got {}", g.l2_cut));
        }
        if g.max_depth == Some(0) {
            return bad("growth.max_depth", "must be positive or none".into());
        }
        if g.max_grow_iters == 0 {
            return bad("growth.max_grow_iters", "must be positive".into());
        }
        let s = &self.step;
        if !pos(s.dtheta_max) {
            return bad("step.dtheta_max", format!("must be > 0, got {}", s.dtheta_max));
        }
        if s.dt_fixed.is_some_and(|d| !pos(d)) {
            return bad("step.dt_fixed", "must be > 0 or none".into());
        }
        if !pos(s.t_final) {
            return bad("step.t_final", format!("must be > 0, got {}", s.t_final));
        }
        if s.stop_infidelity.is_some_and(|d| !(d >= 0.0)) {
            return bad("step.stop_infidelity", "must be >= 0 or none".into());
        }
        if s.max_steps == Some(0) {
            return bad("step.max_steps", "must be positive or none".into());
        }
        if !pos(self.solver.epsilon) {
            return bad("solver.epsilon", format!("must be > 0, got {}", self.solver.epsilon));
        }
        if !pos(self.solver.bound) {
            return bad("solver.bound", format!("must be > 0, got {}", self.solver.bound));
        }
        let n = &self.noise;
        if n.n_shots == Some(0) {
            return bad("noise.n_shots", "must be >= 1 or inf".into());
        }
        if n.runs == 0 {
            return bad("noise.runs", "must be >= 1".into());
        }
        if n.truncate_sigma.is_some_and(|k| !pos(k)) {
            return bad("noise.truncate_sigma", "must be > 0 or none".into());
        }
        if !pos(self.trotter_dt) {
            return bad("trotter.dt", format!("must be > 0, got {}", self.trotter_dt));
        }
        if self.algorithm == Algorithm::Hva && self.model.n_qubits % 2 == 1 {
            return bad("model.n_qubits", "hva needs an even number of qubits".into());
        }
        if self.algorithm == Algorithm::Hva && self.hva_layers == 0 {
            return bad("hva.layers", "must be positive".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_default_and_edited() {
        let mut c = ExperimentConfig::default();
        assert_eq!(ExperimentConfig::parse(&c.serialize()).unwrap(), c);
        c.step.dt_fixed = Some(0.1 + 0.2);
        c.noise.n_shots = Some(10_000);
        c.growth.max_depth = Some(30);
        c.model.h_x = -1.0 / 3.0;
        c.noise.truncate_sigma = None;
        assert_eq!(ExperimentConfig::parse(&c.serialize()).unwrap(), c);
    }

    #[test]
    fn comments_blank_lines_and_partial_files() {
        let c = ExperimentConfig::parse("# header\n\nmodel.kind = hm # trailing\n  model.n_qubits=6\n").unwrap();
        assert_eq!(c.model.kind, ModelKind::Hm);
        assert_eq!(c.model.n_qubits, 6);
        assert_eq!(c.step, ExperimentConfig::default().step);
    }

    #[test]
    fn errors_name_the_key() {
        let e = ExperimentConfig::parse("solver.epsilon = abc").unwrap_err();
        assert_eq!(e.key, "solver.epsilon");
        assert_eq!(e.line, Some(1));
        assert_eq!(ExperimentConfig::parse("a.b = 1").unwrap_err().key, "a.b");
        assert_eq!(ExperimentConfig::parse("x\n").unwrap_err().line, Some(1));
        let e = ExperimentConfig::parse("growth.l2_cut = 1e-7").unwrap_err();
        assert_eq!(e.key, "growth.l2_cut");
        let e = ExperimentConfig::parse("model.n_qubits = 2").unwrap_err();
        assert_eq!(e.key, "model.n_qubits");
        let e = ExperimentConfig::parse("step.t_final = 1\nstep.t_final = 2").unwrap_err();
        assert_eq!((e.key.as_str(), e.line), ("step.t_final", Some(2)));
        assert!(e.to_string().contains("step.t_final"));
    }

    #[test]
    fn every_key_is_settable() {
        let c = ExperimentConfig::default();
        for (k, v) in c.to_pairs() {
            let mut d = ExperimentConfig::default();
            d.set(k, &v).unwrap();
            assert_eq!(d, c, "{k}");
        }
    }
}
