//! Result files: `manifest.json` holds everything, the CSVs hold one row
//! per run for tools that only want the numbers.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{ExperimentPlan, HarnessError, Phase, RunRow, TuningReport};
use crate::solver::Algorithm;

pub const SCHEMA_VERSION: u32 = 1;
pub const MANIFEST_JSON: &str = "manifest.json";
/// Tuning-phase runs.
pub const TUNING_CSV: &str = "tuning.csv";
/// Validation and final runs.
pub const RESULTS_CSV: &str = "results.csv";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub schema_version: u32,
    pub software_version: String,
    pub created: String,
    pub updated: String,
    pub plan: ExperimentPlan,
    pub plan_digest: String,
    /// Chosen configurations, one per (algorithm, size), with the designs
    /// and candidate scores that led to them.
    pub tuning: Vec<TuningReport>,
    pub records: Vec<RunRow>,
}

fn now() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

impl Manifest {
    pub fn new(plan: &ExperimentPlan) -> Self {
        let stamp = now();
        Self {
            schema_version: SCHEMA_VERSION,
            software_version: env!("CARGO_PKG_VERSION").to_string(),
            created: stamp.clone(),
            updated: stamp,
            plan: plan.clone(),
            plan_digest: plan.digest(),
            tuning: Vec::new(),
            records: Vec::new(),
        }
    }

    /// The manifest in `dir` if there is one, else a fresh one. An existing
    /// manifest must come from the same plan.
    pub fn open_or_new(dir: &Path, plan: &ExperimentPlan) -> Result<Self, HarnessError> {
        if !dir.join(MANIFEST_JSON).exists() {
            return Ok(Self::new(plan));
        }
        let (manifest, _) = read_results(dir)?;
        if manifest.plan_digest != plan.digest() {
            return Err(HarnessError::Plan(format!(
                "{} was written for a different plan (digest {}); use another output directory",
                dir.display(),
                &manifest.plan_digest[..12]
            )));
        }
        Ok(manifest)
    }

    pub fn choice(&self, algorithm: Algorithm, n: usize) -> Option<&TuningReport> {
        self.tuning.iter().find(|t| t.algorithm == algorithm && t.n == n)
    }

    /// Replaces the tuning outcome of one (algorithm, size), along with its
    /// tuning runs.
    pub fn set_tuning(&mut self, report: TuningReport, rows: Vec<RunRow>) {
        let (a, n) = (report.algorithm, report.n);
        self.tuning.retain(|t| !(t.algorithm == a && t.n == n));
        self.tuning.push(report);
        self.replace_rows(a, n, &[Phase::Tuning], rows);
    }

    /// Replaces the validation and final runs of one (algorithm, size).
    pub fn set_results(&mut self, algorithm: Algorithm, n: usize, rows: Vec<RunRow>) {
        self.replace_rows(algorithm, n, &[Phase::Validation, Phase::Final], rows);
    }

    fn replace_rows(&mut self, a: Algorithm, n: usize, phases: &[Phase], rows: Vec<RunRow>) {
        self.records.retain(|r| !(r.algorithm == a && r.n == n && phases.contains(&r.phase)));
        self.records.extend(rows);
        self.tuning.sort_by_key(|t| (t.algorithm, t.n));
        self.records.sort_by_key(RunRow::key);
        self.updated = now();
    }

    pub fn rows(&self, phases: &[Phase]) -> Vec<RunRow> {
        self.records.iter().filter(|r| phases.contains(&r.phase)).cloned().collect()
    }
}

fn write_csv(path: &Path, rows: &[RunRow]) -> Result<(), HarnessError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .has_headers(false)
        .from_path(path)
        .map_err(|e| HarnessError::format(path, e))?;
    w.write_record([
        "algorithm", "n", "phase", "config_id", "replication", "seed", "cost", "nfe", "iterations", "elapsed_ms",
        "capped",
    ])
    .map_err(|e| HarnessError::format(path, e))?;
    for r in rows {
        w.serialize(r).map_err(|e| HarnessError::format(path, e))?;
    }
    w.flush().map_err(|e| HarnessError::io(path, e))
}

fn read_csv(path: &Path) -> Result<Vec<RunRow>, HarnessError> {
    let mut r = csv::Reader::from_path(path).map_err(|e| HarnessError::format(path, e))?;
    r.deserialize().map(|row| row.map_err(|e| HarnessError::format(path, e))).collect()
}

/// Writes the manifest and both CSV files into `dir`, creating it if
/// needed.
pub fn write_results(dir: &Path, manifest: &Manifest) -> Result<(), HarnessError> {
    fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    let path = dir.join(MANIFEST_JSON);
    let mut json = serde_json::to_string_pretty(manifest).map_err(|e| HarnessError::format(&path, e))?;
    json.push('\n');
    fs::write(&path, json).map_err(|e| HarnessError::io(&path, e))?;
    write_csv(&dir.join(TUNING_CSV), &manifest.rows(&[Phase::Tuning]))?;
    write_csv(&dir.join(RESULTS_CSV), &manifest.rows(&[Phase::Validation, Phase::Final]))
}

/// Reads back what [`write_results`] wrote. The CSV rows must agree with
/// the manifest; they are returned in file order, tuning first.
pub fn read_results(dir: &Path) -> Result<(Manifest, Vec<RunRow>), HarnessError> {
    let path = dir.join(MANIFEST_JSON);
    let text = fs::read_to_string(&path).map_err(|e| HarnessError::io(&path, e))?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| HarnessError::format(&path, e))?;
    let found = value.get("schema_version").and_then(serde_json::Value::as_u64).unwrap_or(0) as u32;
    if found != SCHEMA_VERSION {
        return Err(HarnessError::SchemaMismatch {
            path: path.display().to_string(),
            found,
            expected: SCHEMA_VERSION,
        });
    }
    let manifest: Manifest = serde_json::from_value(value).map_err(|e| HarnessError::format(&path, e))?;

    let mut rows = read_csv(&dir.join(TUNING_CSV))?;
    rows.extend(read_csv(&dir.join(RESULTS_CSV))?);
    let mut expected = manifest.rows(&[Phase::Tuning]);
    expected.extend(manifest.rows(&[Phase::Validation, Phase::Final]));
    if rows != expected {
        return Err(HarnessError::Integrity(format!(
            "CSV files in {} disagree with {MANIFEST_JSON} ({} rows vs {})",
            dir.display(),
            rows.len(),
            expected.len()
        )));
    }
    Ok((manifest, rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows() -> Vec<RunRow> {
        (0..3)
            .map(|i| RunRow {
                algorithm: Algorithm::Ga,
                n: 8,
                phase: if i == 0 { Phase::Validation } else { Phase::Final },
                config_id: if i == 2 { None } else { Some(4) },
                replication: i,
                seed: 0xdead_beef_0000 + i as u64,
                cost: i as u64,
                nfe: 1000 + i as u64,
                iterations: 17,
                elapsed_ms: 1.106253 + i as f64 / 3.0,
                capped: i == 1,
            })
            .collect()
    }

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let mut m = Manifest::new(&ExperimentPlan::default());
        m.set_results(Algorithm::Ga, 8, rows());
        write_results(dir.path(), &m).unwrap();
        let (back, read) = read_results(dir.path()).unwrap();
        assert_eq!(back, m);
        assert_eq!(read, rows());
        let csv = fs::read_to_string(dir.path().join(RESULTS_CSV)).unwrap();
        assert_eq!(csv.lines().count(), 4);
        assert!(csv.starts_with("algorithm,n,phase,config_id,replication,seed,cost,nfe,iterations,elapsed_ms,capped\n"));
        assert!(!csv.contains('\r'));
    }

    #[test]
    fn schema_mismatch() {
        let dir = tempfile::tempdir().unwrap();
        let mut m = Manifest::new(&ExperimentPlan::default());
        m.schema_version = 99;
        write_results(dir.path(), &m).unwrap();
        assert!(matches!(read_results(dir.path()), Err(HarnessError::SchemaMismatch { found: 99, .. })));
    }

    #[test]
    fn tampered_csv_is_detected() {
        let dir = tempfile::tempdir().unwrap();
        let mut m = Manifest::new(&ExperimentPlan::default());
        m.set_results(Algorithm::Ga, 8, rows());
        write_results(dir.path(), &m).unwrap();
        let p = dir.path().join(RESULTS_CSV);
        let text = fs::read_to_string(&p).unwrap().replacen(",1000,", ",999,", 1);
        fs::write(&p, text).unwrap();
        assert!(matches!(read_results(dir.path()), Err(HarnessError::Integrity(_))));
    }

    #[test]
    fn other_plans_are_refused() {
        let dir = tempfile::tempdir().unwrap();
        let plan = ExperimentPlan::default();
        write_results(dir.path(), &Manifest::new(&plan)).unwrap();
        assert!(Manifest::open_or_new(dir.path(), &plan).is_ok());
        let mut other = plan.clone();
        other.master_seed ^= 1;
        assert!(Manifest::open_or_new(dir.path(), &other).is_err());
    }
}
