//! Trajectory CSV files.
//!
//! A file starts with `# key = value` comment lines holding the full
//! configuration and run metadata, then a header row and one row per step.
//! Reals are written as `{:.16e}` (17 significant digits); a missing
//! infidelity is an empty field.

use std::io::{self, Write};

use super::config::ExperimentConfig;
use super::experiment::RunResult;
use crate::adaptive::{RunEventKind, TrajectoryRecord};
use crate::error::{Error, Result};

pub const COLUMNS: [&str; 8] = ["t", "n_params", "l2", "depth", "cnots", "dt", "energy", "infidelity"];

/// Value columns averaged in aggregate files.
pub const STAT_COLUMNS: [&str; 7] = ["n_params", "l2", "depth", "cnots", "dt", "energy", "infidelity"];

pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_header<W: Write>(w: &mut W, cfg: &ExperimentConfig, extra: &[(&str, String)]) -> io::Result<()> {
    for (k, v) in cfg.to_pairs() {
        writeln!(w, "# {k} = {v}")?;
    }
    for (k, v) in extra {
        writeln!(w, "# {k} = {v}")?;
    }
    Ok(())
}

const EVENT_KEYS: [(RunEventKind, &str); 5] = [
    (RunEventKind::GrowthStalled, "events.growth_stalled"),
    (RunEventKind::DepthCapped, "events.depth_capped"),
    (RunEventKind::GrowIterLimit, "events.grow_iter_limit"),
    (RunEventKind::StepLimit, "events.step_limit"),
    (RunEventKind::InfidelityStop, "events.infidelity_stop"),
];

pub fn write_run<W: Write>(w: &mut W, cfg: &ExperimentConfig, index: usize, run: &RunResult) -> io::Result<()> {
    let mut extra = vec![("run.index", index.to_string()), ("run.seed", run.seed.to_string())];
    for (kind, key) in EVENT_KEYS {
        extra.push((key, run.events.iter().filter(|e| e.kind == kind).count().to_string()));
    }
    write_header(w, cfg, &extra)?;
    writeln!(w, "{}", COLUMNS.join(","))?;
    for r in &run.records {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            fmt_real(r.t),
            r.n_params,
            fmt_real(r.l2),
            r.depth,
            r.cnot_count,
            fmt_real(r.dt),
            fmt_real(r.energy),
            r.infidelity.map(fmt_real).unwrap_or_default()
        )?;
    }
    Ok(())
}

/// Reads back the rows of a per-run file.
pub fn parse_run(text: &str) -> Result<Vec<TrajectoryRecord<f64>>> {
    let bad = |l: usize, m: &str| Error::Invalid(format!("csv line {}: {m}", l + 1));
    let mut seed = 0u64;
    let mut rows = Vec::new();
    let mut header_seen = false;
    for (i, line) in text.lines().enumerate() {
        if let Some(meta) = line.strip_prefix("# ") {
            if let Some(v) = meta.strip_prefix("run.seed = ") {
                seed = v.parse().map_err(|_| bad(i, "bad seed"))?;
            }
            continue;
        }
        if !header_seen {
            if line != COLUMNS.join(",") {
                return Err(bad(i, "unexpected header"));
            }
            header_seen = true;
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != COLUMNS.len() {
            return Err(bad(i, "wrong field count"));
        }
        let real = |s: &str| s.parse::<f64>().map_err(|_| bad(i, "bad real"));
        let int = |s: &str| s.parse::<usize>().map_err(|_| bad(i, "bad integer"));
        rows.push(TrajectoryRecord {
            t: real(f[0])?,
            n_params: int(f[1])?,
            l2: real(f[2])?,
            depth: int(f[3])?,
            cnot_count: int(f[4])?,
            dt: real(f[5])?,
            energy: real(f[6])?,
            infidelity: if f[7].is_empty() { None } else { Some(real(f[7])?) },
            seed,
        });
    }
    Ok(rows)
}

fn values(r: &TrajectoryRecord<f64>) -> [Option<f64>; 7] {
    [
        Some(r.n_params as f64),
        Some(r.l2),
        Some(r.depth as f64),
        Some(r.cnot_count as f64),
        Some(r.dt),
        Some(r.energy),
        r.infidelity,
    ]
}

/// Mean and sample standard deviation per column at one time.
#[derive(Clone, Debug, PartialEq)]
pub struct AggregateRow {
    pub t: f64,
    pub mean: [Option<f64>; 7],
    pub std: [Option<f64>; 7],
}

/// Points of the common time grid used when runs have different step times.
pub const AGGREGATE_POINTS: usize = 200;

/// Cross-run statistics. Runs with identical time columns are combined row
/// by row; otherwise every run is sampled (last row at or before `t`, else
/// its first row) on `t_k = k·t_final/200`, `k = 1..=200`.
pub fn aggregate(runs: &[Vec<TrajectoryRecord<f64>>], t_final: f64) -> Vec<AggregateRow> {
    if runs.is_empty() || runs.iter().any(|r| r.is_empty()) {
        return Vec::new();
    }
    let aligned = runs
        .iter()
        .all(|r| r.len() == runs[0].len() && r.iter().zip(&runs[0]).all(|(a, b)| a.t == b.t));
    let grid: Vec<(f64, Vec<&TrajectoryRecord<f64>>)> = if aligned {
        (0..runs[0].len())
            .map(|i| (runs[0][i].t, runs.iter().map(|r| &r[i]).collect()))
            .collect()
    } else {
        (1..=AGGREGATE_POINTS)
            .map(|k| {
                let t = k as f64 * t_final / AGGREGATE_POINTS as f64;
                let picks = runs
                    .iter()
                    .map(|r| {
                        let n = r.partition_point(|x| x.t <= t);
                        &r[n.saturating_sub(1)]
                    })
                    .collect();
                (t, picks)
            })
            .collect()
    };
    grid.into_iter()
        .map(|(t, rows)| {
            let mut mean = [None; 7];
            let mut std = [None; 7];
            for c in 0..7 {
                let xs: Option<Vec<f64>> = rows.iter().map(|r| values(r)[c]).collect();
                let Some(xs) = xs else { continue };
                let n = xs.len() as f64;
                let m = xs.iter().sum::<f64>() / n;
                let var = if xs.len() > 1 {
                    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0)
                } else {
                    0.0
                };
                mean[c] = Some(m);
                std[c] = Some(var.sqrt());
            }
            AggregateRow { t, mean, std }
        })
        .collect()
}

pub fn write_aggregate<W: Write>(w: &mut W, cfg: &ExperimentConfig, runs: &[RunResult]) -> io::Result<()> {
    let seeds: Vec<String> = runs.iter().map(|r| r.seed.to_string()).collect();
    write_header(w, cfg, &[("aggregate.runs", runs.len().to_string()), ("aggregate.seeds", seeds.join(" "))])?;
    let mut head = vec!["t".to_string()];
    for c in STAT_COLUMNS {
        head.push(format!("{c}_mean"));
        head.push(format!("{c}_std"));
    }
    writeln!(w, "{}", head.join(","))?;
    let records: Vec<_> = runs.iter().map(|r| r.records.clone()).collect();
    for row in aggregate(&records, cfg.step.t_final) {
        let mut f = vec![fmt_real(row.t)];
        for c in 0..7 {
            f.push(row.mean[c].map(fmt_real).unwrap_or_default());
            f.push(row.std[c].map(fmt_real).unwrap_or_default());
        }
        writeln!(w, "{}", f.join(","))?;
    }
    Ok(())
}
