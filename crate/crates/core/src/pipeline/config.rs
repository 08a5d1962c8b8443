use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::adversarial::AdversarialConfig;
use crate::circuit::{AnsatzSpec, LabelEncoding};
use crate::error::{QgaaError, Result};
use crate::qae::QaeConfig;

/// Environment variable that replaces the configured seed.
pub const SEED_ENV: &str = "QGAA_SEED";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Qae,
    Qgan,
    Generate,
    Baseline,
}

impl Stage {
    pub fn name(self) -> &'static str {
        match self {
            Stage::Qae => "qae",
            Stage::Qgan => "qgan",
            Stage::Generate => "generate",
            Stage::Baseline => "baseline",
        }
    }

    fn tag(self) -> u64 {
        match self {
            Stage::Qae => 1,
            Stage::Qgan => 2,
            Stage::Generate => 3,
            Stage::Baseline => 4,
        }
    }
}

/// Fixed fan-out of the experiment seed; distinct per stage and restart.
pub fn sub_seed(seed: u64, stage: Stage, restart: usize) -> u64 {
    let mut z = seed
        .wrapping_add(stage.tag().wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add((restart as u64).wrapping_mul(0xD1B5_4A32_D192_ED03));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Label grid of the entangled family: `k₀` evenly spaced over
/// `π·(center ± halfwidth)` and `k₁ = 2πj / k1_count`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntangledGrid {
    pub k0_center_pi: f64,
    pub k0_halfwidth_pi: f64,
    pub k0_count: usize,
    pub k1_count: usize,
    /// States below this entanglement entropy are dropped from training.
    pub min_entropy: f64,
}

impl Default for EntangledGrid {
    fn default() -> Self {
        Self { k0_center_pi: 0.5, k0_halfwidth_pi: 0.06, k0_count: 5, k1_count: 16, min_entropy: 0.97 }
    }
}

impl EntangledGrid {
    pub fn k0_values(&self) -> Vec<f64> {
        let n = self.k0_count;
        if n == 1 {
            return vec![PI * self.k0_center_pi];
        }
        (0..n)
            .map(|i| PI * (self.k0_center_pi - self.k0_halfwidth_pi + 2.0 * self.k0_halfwidth_pi * i as f64 / (n - 1) as f64))
            .collect()
    }

    /// `k₁` grid shifted by `offset` steps.
    pub fn k1_values(&self, offset: f64) -> Vec<f64> {
        (0..self.k1_count).map(|j| 2.0 * PI * (j as f64 + offset) / self.k1_count as f64).collect()
    }

    pub fn train_labels(&self) -> Vec<Vec<f64>> {
        self.labels(0.0)
    }

    /// Held-out labels: the same `k₀` rows at half-step `k₁` values.
    pub fn test_labels(&self) -> Vec<Vec<f64>> {
        self.labels(0.5)
    }

    fn labels(&self, offset: f64) -> Vec<Vec<f64>> {
        let k1 = self.k1_values(offset);
        self.k0_values().into_iter().flat_map(|k0| k1.iter().map(move |&k1| vec![k0, k1])).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Experiment {
    Entangled {
        #[serde(default)]
        grid: EntangledGrid,
    },
    Molecule {
        /// Relative paths resolve against the config file's directory.
        dataset: PathBuf,
        train_r: Vec<f64>,
        /// Evaluation grid; `None` means every fixture `r`.
        #[serde(default)]
        test_r: Option<Vec<f64>>,
    },
}

/// Parameter initialization for one adversarial run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InitScheme {
    /// Both agents uniform on `[0, 2π)`. With `label_scale` set, slots that
    /// multiply the label draw from `[0, label_scale)` instead; large label
    /// scales make the circuit oscillate quickly in `r`.
    Uniform {
        #[serde(default)]
        label_scale: Option<f64>,
    },
    /// `θ_g = generator_mean + std·N(0,1)`, `θ_d = std·N(0,1)`.
    Normal { generator_mean: Vec<f64>, std: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QganStageConfig {
    pub generator: AnsatzSpec,
    pub discriminator: AnsatzSpec,
    #[serde(default)]
    pub label_encoding: LabelEncoding,
    pub init: InitScheme,
    pub training: AdversarialConfig,
    /// Independent runs; the one with the best final real-vs-fake fidelity
    /// on the training labels is kept.
    #[serde(default = "one")]
    pub restarts: usize,
}

fn one() -> usize {
    1
}

/// Thresholds checked after a run; a miss maps to exit code 2.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Gates {
    pub qae_min_fidelity: Option<f64>,
    pub qae_min_purity: Option<f64>,
    pub qae_max_abs_de: Option<f64>,
    pub qgan_must_stop: bool,
    pub qgan_min_overlap: Option<f64>,
    pub generate_min_fidelity: Option<f64>,
    pub generate_max_abs_de: Option<f64>,
    pub baseline_min_fidelity: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub id: String,
    #[serde(default)]
    pub seed: u64,
    pub stages: Vec<Stage>,
    pub experiment: Experiment,
    #[serde(default)]
    pub qae: Option<QaeConfig>,
    #[serde(default)]
    pub qgan: Option<QganStageConfig>,
    #[serde(default)]
    pub baseline: Option<QganStageConfig>,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    /// Run directory whose `params.json` supplies artifacts of stages not
    /// run here.
    #[serde(default)]
    pub resume_from: Option<PathBuf>,
    #[serde(default)]
    pub gates: Gates,
}

impl ExperimentConfig {
    /// Reads JSON, resolves relative paths against the file's directory and
    /// applies the seed override.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut cfg: ExperimentConfig = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        if let Some(base) = path.parent() {
            cfg.resolve_paths(base);
        }
        cfg.apply_env()?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn resolve_paths(&mut self, base: &Path) {
        if let Experiment::Molecule { dataset, .. } = &mut self.experiment {
            if dataset.is_relative() {
                *dataset = base.join(&*dataset);
            }
        }
    }

    pub fn apply_env(&mut self) -> Result<()> {
        if let Ok(v) = std::env::var(SEED_ENV) {
            self.seed = v.trim().parse().map_err(|_| QgaaError::Config(format!("{SEED_ENV}={v} is not a u64")))?;
        }
        Ok(())
    }

    pub fn has(&self, s: Stage) -> bool {
        self.stages.contains(&s)
    }

    pub fn validate(&self) -> Result<()> {
        let need = |ok: bool, msg: &str| if ok { Ok(()) } else { Err(QgaaError::Config(msg.into())) };
        let resumable = self.resume_from.is_some();
        if self.has(Stage::Qae) || self.has(Stage::Qgan) || self.has(Stage::Generate) {
            need(self.qae.is_some(), "qae, qgan and generate stages need a qae section")?;
        }
        if self.has(Stage::Qgan) || self.has(Stage::Generate) {
            need(self.qgan.is_some(), "qgan and generate stages need a qgan section")?;
        }
        if self.has(Stage::Qgan) {
            need(self.has(Stage::Qae) || resumable, "qgan stage needs the qae stage or resume_from")?;
        }
        if self.has(Stage::Generate) {
            need(
                (self.has(Stage::Qae) && self.has(Stage::Qgan)) || resumable,
                "generate stage needs the qae and qgan stages or resume_from",
            )?;
        }
        if self.has(Stage::Baseline) {
            need(self.baseline.is_some(), "baseline stage needs a baseline section")?;
            need(matches!(self.experiment, Experiment::Molecule { .. }), "baseline stage needs a molecule experiment")?;
        }
        if let Some(q) = &self.qae {
            q.validate()?;
        }
        for s in [&self.qgan, &self.baseline].into_iter().flatten() {
            s.training.validate()?;
            need(s.restarts >= 1, "restarts must be at least 1")?;
            if let InitScheme::Uniform { label_scale: Some(v) } = s.init {
                need(v.is_finite() && v > 0.0, "label_scale must be positive")?;
            }
        }
        match &self.experiment {
            Experiment::Entangled { grid } => {
                need(grid.k0_count >= 1 && grid.k1_count >= 1, "entangled grid must be non-empty")?;
            }
            Experiment::Molecule { train_r, .. } => need(!train_r.is_empty(), "train_r must be non-empty")?,
        }
        Ok(())
    }
}
