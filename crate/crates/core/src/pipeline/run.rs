use std::f64::consts::{PI, TAU};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::adversarial::{evaluate, train_adversarial, DiscriminatorSpec, GeneratorSpec, TrainStatus};
use crate::circuit::build_ansatz;
use crate::ensemble::LabeledEnsemble;
use crate::error::{QgaaError, Result};
use crate::hamiltonian::MoleculeDataset;
use crate::linalg::purity;
use crate::metrics::{bloch_vector, fidelity_pure};
use crate::qae::{train_qae, QaeCircuits, QaeConfig};

use super::artifact::{BlochRow, GameReport, MetricRow, QaeParams, RunArtifact, TrainedParams};
use super::config::{sub_seed, Experiment, ExperimentConfig, InitScheme, QganStageConfig, Stage};
use super::problem::Problem;

/// Trajectory tables keep at most this many points per label.
const TRAJECTORY_POINTS: usize = 200;

/// Runs every configured stage in the order qae, qgan, generate, baseline.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunArtifact> {
    cfg.validate()?;
    let problem = Problem::from_config(cfg)?;
    run_with_problem(cfg, &problem)
}

/// Entangled-family demo: QAE, QGAN on its latents and the Bloch exports.
pub fn run_entangled_demo(cfg: &ExperimentConfig) -> Result<RunArtifact> {
    match cfg.experiment {
        Experiment::Entangled { .. } => run_experiment(cfg),
        _ => Err(QgaaError::Config("run_entangled_demo needs an entangled experiment".into())),
    }
}

/// Molecule pipeline on an already parsed dataset.
pub fn run_molecule_qgaa(cfg: &ExperimentConfig, dataset: &MoleculeDataset) -> Result<RunArtifact> {
    cfg.validate()?;
    let Experiment::Molecule { train_r, test_r, .. } = &cfg.experiment else {
        return Err(QgaaError::Config("run_molecule_qgaa needs a molecule experiment".into()));
    };
    let problem = Problem::molecule(dataset, train_r, test_r.as_deref())?;
    run_with_problem(cfg, &problem)
}

/// The adversarial stage on the full register, without an autoencoder.
pub fn run_baseline_qgan(cfg: &ExperimentConfig, dataset: &MoleculeDataset) -> Result<RunArtifact> {
    let mut only = cfg.clone();
    only.stages = vec![Stage::Baseline];
    run_molecule_qgaa(&only, dataset)
}

pub fn run_with_problem(cfg: &ExperimentConfig, problem: &Problem) -> Result<RunArtifact> {
    let mut art = RunArtifact::empty(cfg.clone());
    let mut stages = cfg.stages.clone();
    stages.sort();
    stages.dedup();
    let resumed = match &cfg.resume_from {
        Some(dir) => TrainedParams::load(dir)?,
        None => TrainedParams::default(),
    };
    let mut history = Vec::new();

    for stage in stages {
        log::info!("{}: stage {}", cfg.id, stage.name());
        match stage {
            Stage::Qae => {
                let mut qcfg = cfg.qae.clone().expect("validated");
                qcfg.seed = sub_seed(cfg.seed, Stage::Qae, 0);
                let (trained, series) = train_qae(&qcfg, &problem.train)?;
                log::info!("qae loss {:.3e}", trained.final_loss);
                art.params.qae = Some(QaeParams { theta_e: trained.theta_e, phi_d: trained.phi_d });
                art.qae_series = series;
            }
            Stage::Qgan => {
                let qcfg = cfg.qae.as_ref().expect("validated");
                let qp = art.params.qae.as_ref().or(resumed.qae.as_ref()).ok_or_else(|| missing("qae"))?;
                let latents = latent_ensemble(qcfg, qp, &problem.train)?;
                let scfg = cfg.qgan.as_ref().expect("validated");
                let (g, d, report, hist) = run_game(scfg, &latents, cfg.seed, Stage::Qgan)?;
                art.params.generator = Some(g);
                art.params.discriminator = Some(d);
                art.qgan = Some(report);
                history = hist;
            }
            Stage::Generate => {}
            Stage::Baseline => {
                let scfg = cfg.baseline.as_ref().expect("validated");
                let (g, d, report, _) = run_game(scfg, &problem.train, cfg.seed, Stage::Baseline)?;
                art.params.baseline_generator = Some(g);
                art.params.baseline_discriminator = Some(d);
                art.baseline = Some(report);
            }
        }
    }
    art.params.fill_from(resumed);

    // later stages see only what a params.json would hold
    let persisted: TrainedParams = serde_json::from_str(&serde_json::to_string(&art.params)?)?;
    if cfg.has(Stage::Generate) && (persisted.qae.is_none() || persisted.generator.is_none()) {
        return Err(missing("qae and generator"));
    }
    art.metrics = compute_metrics(cfg, &persisted, problem)?;
    art.bloch = bloch_tables(cfg, &persisted, problem, &history)?;
    Ok(art)
}

fn missing(what: &str) -> QgaaError {
    QgaaError::MissingArtifact(format!("{what} parameters: run the producing stage or set resume_from"))
}

/// Encoder latents `η_K` of every training entry.
pub fn latent_ensemble(qcfg: &QaeConfig, qp: &QaeParams, train: &LabeledEnsemble) -> Result<LabeledEnsemble> {
    let c = QaeCircuits::new(qcfg)?;
    let mut out = LabeledEnsemble::new(qcfg.latent_qubits);
    for e in train.iter() {
        let eta = match &e.pure {
            Some(psi) => c.encode_pure(&qp.theta_e, psi)?,
            None => c.encode(&qp.theta_e, &e.rho)?,
        };
        out.push_mixed(e.label.clone(), eta)?;
    }
    Ok(out)
}

fn initial_agents(scfg: &QganStageConfig, input_qubits: usize, rng: &mut ChaCha8Rng) -> Result<(GeneratorSpec, DiscriminatorSpec)> {
    let ng = scfg.generator.param_count()?;
    let d_probe = DiscriminatorSpec { input_qubits, ansatz: scfg.discriminator, label_encoding: scfg.label_encoding, theta: Vec::new() };
    let nd = d_probe.param_count()?;
    let (tg, td): (Vec<f64>, Vec<f64>) = match &scfg.init {
        InitScheme::Uniform { label_scale } => {
            // label-scaled slots are the ones that vanish at a zero label
            let g_scaled = build_ansatz(&scfg.generator)?.slot_scales()?;
            let d_scaled = d_probe.circuit(&vec![0.0; d_probe.label_arity()])?.slot_scales()?;
            let mut draw = |scales: &[f64]| -> Vec<f64> {
                scales
                    .iter()
                    .map(|&s| match label_scale {
                        Some(w) if s == 0.0 => rng.random_range(0.0..*w),
                        _ => rng.random_range(0.0..TAU),
                    })
                    .collect()
            };
            let tg = draw(&g_scaled);
            (tg, draw(&d_scaled))
        }
        InitScheme::Normal { generator_mean, std } => {
            if generator_mean.len() != ng {
                return Err(QgaaError::ParamLength { expected: ng, got: generator_mean.len() });
            }
            let mut n = || -> f64 {
                let z: f64 = StandardNormal.sample(rng);
                std * z
            };
            let tg = generator_mean.iter().map(|m| m + n()).collect();
            (tg, (0..nd).map(|_| n()).collect())
        }
    };
    Ok((GeneratorSpec::new(scfg.generator, tg)?, DiscriminatorSpec::new(input_qubits, scfg.discriminator, scfg.label_encoding, td)?))
}

type GameResult = (GeneratorSpec, DiscriminatorSpec, GameReport, Vec<Vec<f64>>);

/// Independent seeded restarts; keeps the run whose final generator best
/// matches the real source on the training labels.
pub fn run_game(scfg: &QganStageConfig, real: &LabeledEnsemble, seed: u64, stage: Stage) -> Result<GameResult> {
    let mut best: Option<(f64, usize, GameResult)> = None;
    let mut scores = Vec::with_capacity(scfg.restarts);
    for restart in 0..scfg.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(seed, stage, restart));
        let (g0, d0) = initial_agents(scfg, real.n_qubits(), &mut rng)?;
        let out = train_adversarial(&scfg.training, real, g0, d0)?;
        let score = match out.status {
            TrainStatus::Aborted => f64::NEG_INFINITY,
            _ => evaluate(&out.discriminator, &out.generator, real)?.mean_fidelity,
        };
        log::info!("{} restart {restart}: {:?} after {} iterations, fidelity {score:.4}", stage.name(), out.status, out.record.len());
        scores.push(score);
        if best.as_ref().is_none_or(|(s, _, _)| score > *s) {
            let report = GameReport {
                status: out.status,
                stopped_at: out.stopped_at,
                restart,
                restart_scores: Vec::new(),
                record: out.record,
            };
            best = Some((score, restart, (out.generator, out.discriminator, report, out.generator_history)));
        }
    }
    let (_, _, mut result) = best.expect("at least one restart");
    result.2.restart_scores = scores;
    Ok(result)
}

fn row(stage: Stage, p: &super::problem::EvalPoint, fidelity: f64, purity: f64, energy_model: Option<f64>) -> MetricRow {
    MetricRow {
        stage: stage.name().to_string(),
        label0: p.label[0],
        label1: p.label.get(1).copied(),
        train: p.train,
        fidelity,
        purity,
        energy_exact: p.energy,
        energy_model,
        abs_delta_e: p.energy.zip(energy_model).map(|(a, b)| (a - b).abs()),
    }
}

fn energy(p: &super::problem::EvalPoint, rho: &crate::linalg::DensityMatrix) -> Result<Option<f64>> {
    p.hamiltonian.as_ref().map(|h| h.expectation(rho)).transpose()
}

/// Every metric row implied by `params`; a pure function of its inputs, so
/// a stored run can be recomputed exactly.
pub fn compute_metrics(cfg: &ExperimentConfig, params: &TrainedParams, problem: &Problem) -> Result<Vec<MetricRow>> {
    let mut rows = Vec::new();
    let train_points: Vec<_> = problem.eval.iter().filter(|p| p.train).collect();

    if let (Some(qcfg), Some(qp)) = (&cfg.qae, &params.qae) {
        let c = QaeCircuits::new(qcfg)?;
        let qae: Vec<MetricRow> = train_points
            .par_iter()
            .map(|p| {
                let eta = c.encode_pure(&qp.theta_e, &p.state)?;
                let xi = c.decode(&qp.phi_d, &eta)?;
                Ok(row(Stage::Qae, p, fidelity_pure(&p.state, &xi)?, purity(&eta), energy(p, &xi)?))
            })
            .collect::<Result<_>>()?;
        rows.extend(qae);

        if cfg.has(Stage::Generate) {
            let g = params.generator.as_ref().ok_or_else(|| missing("generator"))?;
            let gen: Vec<MetricRow> = problem
                .eval
                .par_iter()
                .map(|p| {
                    let xi = c.decode(&qp.phi_d, &g.generate(&p.label)?)?;
                    Ok(row(Stage::Generate, p, fidelity_pure(&p.state, &xi)?, purity(&xi), energy(p, &xi)?))
                })
                .collect::<Result<_>>()?;
            rows.extend(gen);
        }
    }
    if let Some(g) = &params.baseline_generator {
        let base: Vec<MetricRow> = problem
            .eval
            .par_iter()
            .map(|p| {
                let nu = g.generate(&p.label)?;
                Ok(row(Stage::Baseline, p, fidelity_pure(&p.state, &nu)?, purity(&nu), energy(p, &nu)?))
            })
            .collect::<Result<_>>()?;
        rows.extend(base);
    }
    Ok(rows)
}

/// Reloads `config.json` and `params.json` from a run directory and
/// recomputes its metric rows.
pub fn recompute_metrics(dir: impl AsRef<Path>) -> Result<Vec<MetricRow>> {
    let dir = dir.as_ref();
    let cfg: ExperimentConfig = serde_json::from_str(&std::fs::read_to_string(dir.join("config.json"))?)?;
    let params = TrainedParams::load(dir)?;
    compute_metrics(&cfg, &params, &Problem::from_config(&cfg)?)
}

fn bloch_row(iter: Option<usize>, label: &[f64], rho: &crate::linalg::DensityMatrix) -> Result<BlochRow> {
    let b = bloch_vector(rho)?;
    Ok(BlochRow { iter, label0: label[0], label1: label.get(1).copied(), x: b.x, y: b.y, z: b.z })
}

/// Labels followed through training: `(π/2, 0)` and `(π/2, π/2)` for the
/// entangled family, every training label otherwise.
fn marker_labels(cfg: &ExperimentConfig, problem: &Problem) -> Vec<Vec<f64>> {
    let all = problem.train.labels();
    match cfg.experiment {
        Experiment::Entangled { .. } => {
            let want = [[PI / 2.0, 0.0], [PI / 2.0, PI / 2.0]];
            all.into_iter().filter(|l| want.iter().any(|w| (l[0] - w[0]).abs() < 1e-9 && (l[1] - w[1]).abs() < 1e-9)).collect()
        }
        Experiment::Molecule { .. } => all,
    }
}

/// Bloch tables for one-qubit latents: encoder latents, final generator
/// states and, when a training history is at hand, marker trajectories.
fn bloch_tables(cfg: &ExperimentConfig, params: &TrainedParams, problem: &Problem, history: &[Vec<f64>]) -> Result<Vec<(String, Vec<BlochRow>)>> {
    let mut out = Vec::new();
    let (Some(qcfg), Some(qp)) = (&cfg.qae, &params.qae) else { return Ok(out) };
    if qcfg.latent_qubits != 1 {
        return Ok(out);
    }
    let latents = latent_ensemble(qcfg, qp, &problem.train)?;
    out.push(("latent_real".into(), latents.iter().map(|e| bloch_row(None, &e.label, &e.rho)).collect::<Result<_>>()?));
    let Some(g) = &params.generator else { return Ok(out) };
    let fake = problem.train.iter().map(|e| bloch_row(None, &e.label, &g.generate(&e.label)?)).collect::<Result<_>>()?;
    out.push(("latent_fake".into(), fake));
    if !history.is_empty() {
        let stride = history.len().div_ceil(TRAJECTORY_POINTS).max(1);
        let mut traj = Vec::new();
        for label in marker_labels(cfg, problem) {
            for (i, theta) in history.iter().enumerate() {
                if i % stride == 0 || i + 1 == history.len() {
                    let nu = g.generate_state_with(theta, &label)?.to_density();
                    traj.push(bloch_row(Some(i + 1), &label, &nu)?);
                }
            }
        }
        out.push(("trajectory".into(), traj));
    }
    Ok(out)
}
