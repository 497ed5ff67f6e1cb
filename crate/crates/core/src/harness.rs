//! A/B benchmark of plain against algebraic coarsening.
//!
//! Every (input, k, imbalance) combination is partitioned `repetitions` times
//! per mode with seeds `seed..seed + repetitions`; the smallest cut of each
//! mode is kept and the two are compared as `plain / algd`.

use std::cmp::Ordering;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Deserialize;

use crate::coarsen::CoarseningMode;
use crate::error::{Error, Result};
use crate::formats::read_hypergraph;
use crate::hypergraph::Hypergraph;
use crate::multilevel::{partition, LevelStep, PartitionConfig};

/// First line of every report.
pub const CSV_VERSION_LINE: &str = "# hyperalg-bench v1";

const CSV_COLUMNS: [&str; 7] = [
    "input",
    "k",
    "imbalance",
    "best_cut_plain",
    "best_cut_algd",
    "ratio",
    "status",
];

fn default_repetitions() -> usize {
    10
}

fn default_k() -> Vec<usize> {
    vec![2]
}

fn default_imbalance() -> Vec<f64> {
    vec![1.05]
}

/// Benchmark description, read from TOML:
///
/// ```toml
/// seed = 0
/// repetitions = 10
/// k = [2]              # default for inputs without their own list
/// imbalance = [1.05]
///
/// [[input]]
/// path = "matrices/a.mtx"
/// k = [2, 4]
/// ```
///
/// Relative input paths are resolved against the manifest's directory.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchManifest {
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_repetitions")]
    pub repetitions: usize,
    #[serde(default = "default_k")]
    pub k: Vec<usize>,
    #[serde(default = "default_imbalance")]
    pub imbalance: Vec<f64>,
    #[serde(rename = "input", default)]
    pub inputs: Vec<BenchInput>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchInput {
    pub path: PathBuf,
    pub k: Option<Vec<usize>>,
    pub imbalance: Option<Vec<f64>>,
}

impl BenchManifest {
    pub fn parse(text: &str) -> Result<Self> {
        let m: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        m.validate()?;
        Ok(m)
    }

    /// Reads a manifest and makes its input paths absolute relative to it.
    pub fn load(path: &Path) -> Result<Self> {
        let mut m = Self::parse(&std::fs::read_to_string(path)?)?;
        let base = path.parent().unwrap_or(Path::new("."));
        for input in &mut m.inputs {
            if input.path.is_relative() {
                input.path = base.join(&input.path);
            }
        }
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if self.repetitions == 0 {
            return Err(Error::Config("repetitions must be at least 1".into()));
        }
        if self.inputs.is_empty() {
            return Err(Error::Config("manifest lists no inputs".into()));
        }
        for input in &self.inputs {
            let ks = input.k.as_ref().unwrap_or(&self.k);
            let imbs = input.imbalance.as_ref().unwrap_or(&self.imbalance);
            if ks.is_empty() || imbs.is_empty() {
                return Err(Error::Config(format!(
                    "{}: empty k or imbalance list",
                    input.path.display()
                )));
            }
        }
        Ok(())
    }
}

pub fn mode_name(mode: CoarseningMode) -> &'static str {
    match mode {
        CoarseningMode::Plain => "plain",
        CoarseningMode::Algebraic => "algd",
    }
}

/// A hypergraph to benchmark under one name.
#[derive(Debug, Clone)]
pub struct BenchCase {
    pub name: String,
    pub hypergraph: std::result::Result<Hypergraph, String>,
    pub ks: Vec<usize>,
    pub imbalances: Vec<f64>,
}

/// One partitioner run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunLog {
    pub input: String,
    pub k: usize,
    pub imbalance: f64,
    pub mode: CoarseningMode,
    pub seed: u64,
    pub cut: f64,
    pub achieved_imbalance: f64,
    pub feasible: bool,
    pub levels: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub input: String,
    pub k: usize,
    pub imbalance: f64,
    pub best_cut_plain: Option<f64>,
    pub best_cut_algd: Option<f64>,
    pub status: String,
}

impl BenchRow {
    /// `plain / algd`, with `0/0 = 1` and `x/0 = inf`.
    pub fn ratio(&self) -> Option<f64> {
        let (p, a) = (self.best_cut_plain?, self.best_cut_algd?);
        Some(if a == 0.0 {
            if p == 0.0 {
                1.0
            } else {
                f64::INFINITY
            }
        } else {
            p / a
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    /// Sorted by ascending ratio; failed rows last.
    pub rows: Vec<BenchRow>,
    /// Every successful run, in (case, k, imbalance, mode, seed) order.
    pub runs: Vec<RunLog>,
}

impl BenchReport {
    /// Share of rows with a ratio of at least 1.
    pub fn fraction_not_worse(&self) -> f64 {
        let ratios: Vec<f64> = self.rows.iter().filter_map(BenchRow::ratio).collect();
        if ratios.is_empty() {
            return 0.0;
        }
        ratios.iter().filter(|&&r| r >= 1.0).count() as f64 / ratios.len() as f64
    }
}

/// Checks that projection kept the cut and refinement never increased it.
pub fn check_vcycle(steps: &[LevelStep]) -> Result<()> {
    for s in steps {
        let tol = 1e-9 * s.coarse_cut.abs().max(1.0);
        if (s.projected_cut - s.coarse_cut).abs() > tol {
            return Err(Error::Validation(format!(
                "level {}: projection changed the cut from {} to {}",
                s.level, s.coarse_cut, s.projected_cut
            )));
        }
        if s.refined_cut > s.projected_cut + tol {
            return Err(Error::Validation(format!(
                "level {}: refinement raised the cut from {} to {}",
                s.level, s.projected_cut, s.refined_cut
            )));
        }
    }
    Ok(())
}

fn run_once(
    case: &BenchCase,
    h: &Hypergraph,
    k: usize,
    imbalance: f64,
    mode: CoarseningMode,
    seed: u64,
) -> Result<RunLog> {
    let cfg = PartitionConfig {
        k,
        max_imbalance: imbalance,
        mode,
        seed,
        ..PartitionConfig::default()
    };
    let result = partition(h, &cfg)?;
    check_vcycle(&result.steps)?;
    Ok(RunLog {
        input: case.name.clone(),
        k,
        imbalance,
        mode,
        seed,
        cut: result.partition.cut(),
        achieved_imbalance: result.partition.imbalance(),
        feasible: result.feasible,
        levels: result.levels,
    })
}

/// Runs the A/B protocol over `cases`. Runs execute in parallel; the report
/// does not depend on scheduling.
pub fn run_cases(cases: &[BenchCase], seed: u64, repetitions: usize) -> BenchReport {
    const MODES: [CoarseningMode; 2] = [CoarseningMode::Plain, CoarseningMode::Algebraic];
    let mut combos = Vec::new();
    for (ci, case) in cases.iter().enumerate() {
        for &k in &case.ks {
            for &imb in &case.imbalances {
                combos.push((ci, k, imb));
            }
        }
    }
    let tasks: Vec<(usize, CoarseningMode, u64)> = combos
        .iter()
        .enumerate()
        .filter(|(_, &(ci, _, _))| cases[ci].hypergraph.is_ok())
        .flat_map(|(row, _)| {
            MODES
                .into_iter()
                .flat_map(move |mode| (0..repetitions as u64).map(move |r| (row, mode, seed + r)))
        })
        .collect();
    let outcomes: Vec<(usize, CoarseningMode, u64, Result<RunLog>)> = tasks
        .par_iter()
        .map(|&(row, mode, s)| {
            let (ci, k, imb) = combos[row];
            let case = &cases[ci];
            let h = case.hypergraph.as_ref().expect("filtered");
            (row, mode, s, run_once(case, h, k, imb, mode, s))
        })
        .collect();

    let mut rows: Vec<BenchRow> = combos
        .iter()
        .map(|&(ci, k, imbalance)| BenchRow {
            input: cases[ci].name.clone(),
            k,
            imbalance,
            best_cut_plain: None,
            best_cut_algd: None,
            status: match &cases[ci].hypergraph {
                Ok(_) => "ok".into(),
                Err(e) => format!("error: {e}"),
            },
        })
        .collect();
    let mut runs = Vec::with_capacity(outcomes.len());
    for (row, mode, s, outcome) in outcomes {
        let r = &mut rows[row];
        match outcome {
            Ok(log) => {
                let best = match mode {
                    CoarseningMode::Plain => &mut r.best_cut_plain,
                    CoarseningMode::Algebraic => &mut r.best_cut_algd,
                };
                *best = Some(best.map_or(log.cut, |b: f64| b.min(log.cut)));
                runs.push(log);
            }
            Err(e) => {
                if r.status == "ok" {
                    r.status = format!("error: {} seed {s}: {e}", mode_name(mode));
                }
            }
        }
    }
    for r in &mut rows {
        if r.status != "ok" {
            r.best_cut_plain = None;
            r.best_cut_algd = None;
        }
    }
    rows.sort_by(row_order);
    BenchReport { rows, runs }
}

fn row_order(a: &BenchRow, b: &BenchRow) -> Ordering {
    let key = |r: &BenchRow| r.ratio().unwrap_or(f64::NAN);
    let (ra, rb) = (key(a), key(b));
    ra.is_nan()
        .cmp(&rb.is_nan())
        .then(ra.total_cmp(&rb))
        .then_with(|| a.input.cmp(&b.input))
        .then(a.k.cmp(&b.k))
        .then(a.imbalance.total_cmp(&b.imbalance))
}

/// Loads every input of the manifest and runs the protocol. Unreadable
/// inputs become error rows.
pub fn run_bench(manifest: &BenchManifest) -> Result<BenchReport> {
    manifest.validate()?;
    let cases: Vec<BenchCase> = manifest
        .inputs
        .par_iter()
        .map(|input| BenchCase {
            name: input.path.display().to_string(),
            hypergraph: read_hypergraph(&input.path).map_err(|e| e.to_string()),
            ks: input.k.clone().unwrap_or_else(|| manifest.k.clone()),
            imbalances: input
                .imbalance
                .clone()
                .unwrap_or_else(|| manifest.imbalance.clone()),
        })
        .collect();
    Ok(run_cases(&cases, manifest.seed, manifest.repetitions))
}

fn format_ratio(r: Option<f64>) -> String {
    match r {
        None => String::new(),
        Some(r) if r.is_infinite() => "inf".into(),
        Some(r) => r.to_string(),
    }
}

fn format_cut(c: Option<f64>) -> String {
    c.map(|c| c.to_string()).unwrap_or_default()
}

/// Writes the version line followed by the CSV table.
pub fn write_csv<W: std::io::Write>(rows: &[BenchRow], mut out: W) -> Result<()> {
    writeln!(out, "{CSV_VERSION_LINE}")?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_COLUMNS).map_err(csv_error)?;
    for r in rows {
        w.write_record([
            r.input.clone(),
            r.k.to_string(),
            r.imbalance.to_string(),
            format_cut(r.best_cut_plain),
            format_cut(r.best_cut_algd),
            format_ratio(r.ratio()),
            r.status.clone(),
        ])
        .map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

/// One line per run.
pub fn write_run_log<W: std::io::Write>(runs: &[RunLog], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "input",
        "k",
        "imbalance",
        "mode",
        "seed",
        "cut",
        "achieved_imbalance",
        "feasible",
        "levels",
    ])
    .map_err(csv_error)?;
    for r in runs {
        w.write_record([
            r.input.clone(),
            r.k.to_string(),
            r.imbalance.to_string(),
            mode_name(r.mode).to_string(),
            r.seed.to_string(),
            r.cut.to_string(),
            r.achieved_imbalance.to_string(),
            r.feasible.to_string(),
            r.levels.to_string(),
        ])
        .map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Validation(format!("csv: {other:?}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn case(name: &str, h: Hypergraph) -> BenchCase {
        BenchCase {
            name: name.into(),
            hypergraph: Ok(h),
            ks: vec![2],
            imbalances: vec![1.05],
        }
    }

    fn csv_of(report: &BenchReport) -> String {
        let mut buf = Vec::new();
        write_csv(&report.rows, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn manifest_defaults_and_overrides() {
        let m = BenchManifest::parse(
            r#"
            seed = 4
            [[input]]
            path = "a.hgr"
            [[input]]
            path = "b.mtx"
            k = [2, 4]
            imbalance = [1.1]
            "#,
        )
        .unwrap();
        assert_eq!(m.repetitions, 10);
        assert_eq!(m.seed, 4);
        assert_eq!(m.inputs[0].k, None);
        assert_eq!(m.inputs[1].k, Some(vec![2, 4]));
        assert!(BenchManifest::parse("repetitions = 0\n[[input]]\npath = \"a\"").is_err());
        assert!(BenchManifest::parse("seed = 1").is_err());
        assert!(BenchManifest::parse("colour = 1\n[[input]]\npath = \"a\"").is_err());
    }

    #[test]
    fn zero_cuts_give_unit_ratio() {
        let h = Hypergraph::unweighted(4, &[[0, 1], [2, 3]]).unwrap();
        let report = run_cases(&[case("pairs", h)], 0, 1);
        assert_eq!(report.rows.len(), 1);
        assert_eq!(report.rows[0].best_cut_plain, Some(0.0));
        assert_eq!(report.rows[0].ratio(), Some(1.0));
        let text = csv_of(&report);
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some(CSV_VERSION_LINE));
        assert_eq!(
            lines.next(),
            Some("input,k,imbalance,best_cut_plain,best_cut_algd,ratio,status")
        );
        assert_eq!(lines.next(), Some("pairs,2,1.05,0,0,1,ok"));
    }

    #[test]
    fn infinite_ratio_is_spelled_out() {
        let row = BenchRow {
            input: "x".into(),
            k: 2,
            imbalance: 1.05,
            best_cut_plain: Some(3.0),
            best_cut_algd: Some(0.0),
            status: "ok".into(),
        };
        assert_eq!(format_ratio(row.ratio()), "inf");
    }

    #[test]
    fn failures_become_rows() {
        let bad = BenchCase {
            name: "missing".into(),
            hypergraph: Err("no such file".into()),
            ks: vec![2],
            imbalances: vec![1.05],
        };
        let tiny = case("tiny", Hypergraph::unweighted(2, &[[0, 1]]).unwrap());
        let too_many = BenchCase {
            ks: vec![3],
            ..tiny.clone()
        };
        let report = run_cases(&[bad, tiny, too_many], 0, 2);
        assert_eq!(report.rows.len(), 3);
        assert_eq!(report.rows[0].input, "tiny");
        assert_eq!(report.rows[0].status, "ok");
        assert!(report.rows[1].status.starts_with("error"));
        assert!(report.rows[2].status.starts_with("error"));
    }

    #[test]
    fn best_of_repetitions() {
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(1);
        let h = crate::generate::irregular(&mut rng, 150, 200, 12, 0.8);
        let report = run_cases(&[case("irr", h)], 7, 4);
        assert_eq!(report.runs.len(), 8);
        let row = &report.rows[0];
        for (mode, best) in [
            (CoarseningMode::Plain, row.best_cut_plain),
            (CoarseningMode::Algebraic, row.best_cut_algd),
        ] {
            let min = report
                .runs
                .iter()
                .filter(|r| r.mode == mode)
                .map(|r| r.cut)
                .fold(f64::INFINITY, f64::min);
            assert_eq!(best, Some(min));
            let seeds: Vec<u64> = report
                .runs
                .iter()
                .filter(|r| r.mode == mode)
                .map(|r| r.seed)
                .collect();
            assert_eq!(seeds, vec![7, 8, 9, 10]);
        }
    }
}
