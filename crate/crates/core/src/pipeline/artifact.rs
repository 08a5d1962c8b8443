use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::adversarial::{write_records, DiscriminatorSpec, GeneratorSpec, TrainRecord, TrainStatus};
use crate::error::{QgaaError, Result};
use crate::qae::QaeRecord;

use super::config::ExperimentConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QaeParams {
    pub theta_e: Vec<f64>,
    pub phi_d: Vec<f64>,
}

/// Contents of `params.json`: every trained parameter vector of a run.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainedParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub qae: Option<QaeParams>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generator: Option<GeneratorSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub discriminator: Option<DiscriminatorSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub baseline_generator: Option<GeneratorSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub baseline_discriminator: Option<DiscriminatorSpec>,
}

impl TrainedParams {
    pub fn is_empty(&self) -> bool {
        *self == TrainedParams::default()
    }

    /// Reads `params.json` from a run directory.
    pub fn load(dir: impl AsRef<Path>) -> Result<Self> {
        let path = dir.as_ref().join("params.json");
        let text = fs::read_to_string(&path)
            .map_err(|e| QgaaError::MissingArtifact(format!("{}: {e}", path.display())))?;
        Ok(serde_json::from_str(&text)?)
    }

    /// Fills slots that are empty here from `other`.
    pub fn fill_from(&mut self, other: TrainedParams) {
        self.qae = self.qae.take().or(other.qae);
        self.generator = self.generator.take().or(other.generator);
        self.discriminator = self.discriminator.take().or(other.discriminator);
        self.baseline_generator = self.baseline_generator.take().or(other.baseline_generator);
        self.baseline_discriminator = self.baseline_discriminator.take().or(other.baseline_discriminator);
    }
}

/// One row of `metrics.csv`. `label1` is empty for one-component labels and
/// the energy columns are empty without a Hamiltonian.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricRow {
    pub stage: String,
    pub label0: f64,
    pub label1: Option<f64>,
    pub train: bool,
    pub fidelity: f64,
    /// Latent purity for `qae` rows, output purity otherwise.
    pub purity: f64,
    pub energy_exact: Option<f64>,
    pub energy_model: Option<f64>,
    pub abs_delta_e: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochRow {
    pub iter: Option<usize>,
    pub label0: f64,
    pub label1: Option<f64>,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

/// Means (and spreads) of one stage's metric rows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StageSummary {
    pub n: usize,
    pub mean_fidelity: f64,
    pub std_fidelity: f64,
    pub min_fidelity: f64,
    pub mean_purity: f64,
    pub mean_abs_de: Option<f64>,
    pub std_abs_de: Option<f64>,
}

fn mean_std(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    (m, (v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / n).sqrt())
}

/// Summary of the rows of `stage`, optionally restricted by the train flag.
pub fn summarize(rows: &[MetricRow], stage: &str, train: Option<bool>) -> Option<StageSummary> {
    let sel: Vec<&MetricRow> =
        rows.iter().filter(|r| r.stage == stage && train.is_none_or(|t| r.train == t)).collect();
    if sel.is_empty() {
        return None;
    }
    let f: Vec<f64> = sel.iter().map(|r| r.fidelity).collect();
    let (mean_fidelity, std_fidelity) = mean_std(&f);
    let de: Option<Vec<f64>> = sel.iter().map(|r| r.abs_delta_e).collect();
    let de = de.map(|d| mean_std(&d));
    Some(StageSummary {
        n: sel.len(),
        mean_fidelity,
        std_fidelity,
        min_fidelity: f.iter().copied().fold(f64::INFINITY, f64::min),
        mean_purity: sel.iter().map(|r| r.purity).sum::<f64>() / sel.len() as f64,
        mean_abs_de: de.map(|d| d.0),
        std_abs_de: de.map(|d| d.1),
    })
}

/// Outcome of an adversarial stage after restart selection.
#[derive(Debug, Clone, PartialEq)]
pub struct GameReport {
    pub status: TrainStatus,
    pub stopped_at: Option<usize>,
    /// Index of the kept restart.
    pub restart: usize,
    /// Final training-label fidelity of every restart, in order.
    pub restart_scores: Vec<f64>,
    pub record: Vec<TrainRecord>,
}

impl GameReport {
    pub fn last(&self) -> Option<&TrainRecord> {
        self.record.last()
    }
}

#[derive(Debug, Clone)]
pub struct RunArtifact {
    pub config: ExperimentConfig,
    pub params: TrainedParams,
    pub metrics: Vec<MetricRow>,
    pub qae_series: Vec<QaeRecord>,
    pub qgan: Option<GameReport>,
    pub baseline: Option<GameReport>,
    /// Named Bloch tables, written as `bloch/<name>.csv`.
    pub bloch: Vec<(String, Vec<BlochRow>)>,
}

impl RunArtifact {
    pub fn empty(config: ExperimentConfig) -> Self {
        Self {
            config,
            params: TrainedParams::default(),
            metrics: Vec::new(),
            qae_series: Vec::new(),
            qgan: None,
            baseline: None,
            bloch: Vec::new(),
        }
    }

    pub fn summary(&self, stage: &str) -> Option<StageSummary> {
        summarize(&self.metrics, stage, None)
    }

    pub fn bloch_table(&self, name: &str) -> Option<&[BlochRow]> {
        self.bloch.iter().find(|(n, _)| n == name).map(|(_, rows)| rows.as_slice())
    }

    /// Names of the configured gates that the run misses.
    pub fn gate_misses(&self) -> Vec<String> {
        let g = &self.config.gates;
        let mut miss = Vec::new();
        let mut check = |name: &str, ok: bool| {
            if !ok {
                miss.push(name.to_string());
            }
        };
        let qae = self.summary("qae");
        let gen = self.summary("generate");
        if let (Some(t), Some(s)) = (g.qae_min_fidelity, qae) {
            check("qae_min_fidelity", s.mean_fidelity >= t);
        }
        if let (Some(t), Some(s)) = (g.qae_min_purity, qae) {
            check("qae_min_purity", s.mean_purity >= t);
        }
        if let (Some(t), Some(s)) = (g.qae_max_abs_de, qae) {
            check("qae_max_abs_de", s.mean_abs_de.is_some_and(|d| d <= t));
        }
        if let Some(r) = &self.qgan {
            if g.qgan_must_stop {
                check("qgan_must_stop", r.status == TrainStatus::Stopped);
            }
            if let Some(t) = g.qgan_min_overlap {
                check("qgan_min_overlap", r.last().is_some_and(|l| l.mean_fidelity >= t));
            }
        }
        if let (Some(t), Some(s)) = (g.generate_min_fidelity, gen) {
            check("generate_min_fidelity", s.mean_fidelity >= t);
        }
        if let (Some(t), Some(s)) = (g.generate_max_abs_de, gen) {
            check("generate_max_abs_de", s.mean_abs_de.is_some_and(|d| d <= t));
        }
        if let (Some(t), Some(s)) = (g.baseline_min_fidelity, self.summary("baseline")) {
            check("baseline_min_fidelity", s.mean_fidelity >= t);
        }
        miss
    }
}

fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_metrics(path: impl AsRef<Path>) -> Result<Vec<MetricRow>> {
    let mut r = csv::Reader::from_path(path)?;
    Ok(r.deserialize().collect::<std::result::Result<_, _>>()?)
}

/// Writes the run directory. Files appear only for parts the run produced,
/// so an empty run leaves just `config.json`. Content is a pure function of
/// the artifact.
pub fn export_artifact(a: &RunArtifact, dir: impl AsRef<Path>) -> Result<()> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir)?;
    fs::write(dir.join("config.json"), serde_json::to_string_pretty(&a.config)? + "\n")?;
    if !a.params.is_empty() {
        fs::write(dir.join("params.json"), serde_json::to_string_pretty(&a.params)? + "\n")?;
    }
    if !a.metrics.is_empty() {
        write_csv(&dir.join("metrics.csv"), &a.metrics)?;
    }
    let series = dir.join("series");
    if !a.qae_series.is_empty() {
        fs::create_dir_all(&series)?;
        write_csv(&series.join("qae.csv"), &a.qae_series)?;
    }
    for (name, report) in [("qgan", &a.qgan), ("baseline", &a.baseline)] {
        if let Some(r) = report {
            fs::create_dir_all(&series)?;
            write_records(fs::File::create(series.join(format!("{name}.csv")))?, &r.record)?;
        }
    }
    if !a.bloch.is_empty() {
        let bloch = dir.join("bloch");
        fs::create_dir_all(&bloch)?;
        for (name, rows) in &a.bloch {
            write_csv(&bloch.join(format!("{name}.csv")), rows)?;
        }
    }
    Ok(())
}
