use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qgaa::hamiltonian::{dataset_to_ensemble, ground_state, MoleculeDataset};
use qgaa::metrics::{ensemble_rank, DEFAULT_RANK_TOL};
use qgaa::pipeline::{export_artifact, run_experiment, ExperimentConfig, RunArtifact, Stage};

#[derive(Parser)]
#[command(name = "qgaa", version, about = "Autoencoder and adversarial training of labelled quantum state families")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct RunArgs {
    /// Experiment config (JSON).
    #[arg(long, short)]
    config: PathBuf,
    /// Output directory; overrides the config.
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Seed; overrides the config and QGAA_SEED.
    #[arg(long)]
    seed: Option<u64>,
    /// Run directory supplying earlier stages' parameters.
    #[arg(long)]
    from: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Entangled-family demo with the config's stages.
    Entangled(RunArgs),
    /// Autoencoder stage only.
    Qae(RunArgs),
    /// Adversarial stage; trains the autoencoder first unless --from is given.
    Qgan(RunArgs),
    /// Generation sweep; trains earlier stages unless --from is given.
    Generate(RunArgs),
    /// Full-register adversarial baseline without an autoencoder.
    Baseline(RunArgs),
    /// Hamiltonian utilities.
    Ham {
        #[command(subcommand)]
        cmd: HamCmd,
    },
    /// Rank of the uniform mixture of ground states.
    Rank {
        #[arg(long, short)]
        file: PathBuf,
        /// Bond lengths to include; all when omitted.
        #[arg(long, num_args = 1.., value_delimiter = ',')]
        r: Vec<f64>,
        #[arg(long, default_value_t = DEFAULT_RANK_TOL)]
        tol: f64,
    },
}

#[derive(Subcommand)]
enum HamCmd {
    /// Exact ground-state energy at each bond length.
    GroundState {
        #[arg(long, short)]
        file: PathBuf,
        #[arg(long, num_args = 1.., value_delimiter = ',')]
        r: Vec<f64>,
    },
}

fn select(ds: MoleculeDataset, r: &[f64]) -> qgaa::Result<MoleculeDataset> {
    if r.is_empty() {
        Ok(ds)
    } else {
        ds.select(r)
    }
}

fn run(args: RunArgs, stages: Option<Vec<Stage>>, resumable: &[Stage]) -> qgaa::Result<u8> {
    let mut cfg = ExperimentConfig::load(&args.config)?;
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(out) = args.out {
        cfg.output_dir = Some(out);
    }
    if let Some(from) = &args.from {
        cfg.resume_from = Some(from.clone());
    }
    if let Some(mut stages) = stages {
        if cfg.resume_from.is_some() {
            stages.retain(|s| !resumable.contains(s));
        }
        cfg.stages = stages;
    }
    cfg.validate()?;
    let art = run_experiment(&cfg)?;
    report(&art);
    if let Some(dir) = &cfg.output_dir {
        export_artifact(&art, dir)?;
        println!("wrote {}", dir.display());
    }
    let misses = art.gate_misses();
    for m in &misses {
        println!("gate missed: {m}");
    }
    Ok(if misses.is_empty() { 0 } else { 2 })
}

fn report(art: &RunArtifact) {
    for stage in ["qae", "generate", "baseline"] {
        if let Some(s) = art.summary(stage) {
            print!("{stage:>9}: n {:>3}  fidelity {:.4} ± {:.4}  purity {:.4}", s.n, s.mean_fidelity, s.std_fidelity, s.mean_purity);
            if let (Some(m), Some(sd)) = (s.mean_abs_de, s.std_abs_de) {
                print!("  |ΔE| {m:.4} ± {sd:.4} Ha");
            }
            println!();
        }
    }
    for (name, g) in [("qgan", &art.qgan), ("baseline game", &art.baseline)] {
        if let Some(g) = g {
            if let Some(l) = g.last() {
                println!(
                    "{name}: {:?} after {} iterations (restart {})  loss {:.4}  p_real {:.3}  p_fake {:.3}  overlap {:.4}",
                    g.status,
                    g.record.len(),
                    g.restart,
                    l.loss,
                    l.p_real,
                    l.p_fake,
                    l.mean_fidelity
                );
            }
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let all = vec![Stage::Qae, Stage::Qgan, Stage::Generate];
    let result = match cli.cmd {
        Cmd::Entangled(a) => run(a, None, &[]),
        Cmd::Qae(a) => run(a, Some(vec![Stage::Qae]), &[]),
        Cmd::Qgan(a) => run(a, Some(vec![Stage::Qae, Stage::Qgan]), &[Stage::Qae]),
        Cmd::Generate(a) => run(a, Some(all), &[Stage::Qae, Stage::Qgan]),
        Cmd::Baseline(a) => run(a, Some(vec![Stage::Baseline]), &[]),
        Cmd::Ham { cmd: HamCmd::GroundState { file, r } } => (|| {
            let ds = select(MoleculeDataset::load(file)?, &r)?;
            println!("r,energy");
            for e in ds.entries() {
                println!("{},{:.10}", e.r, ground_state(&e.hamiltonian)?.0);
            }
            Ok(0)
        })(),
        Cmd::Rank { file, r, tol } => (|| {
            let ds = select(MoleculeDataset::load(file)?, &r)?;
            let rank = ensemble_rank(&dataset_to_ensemble(&ds)?, tol)?;
            println!("{rank}");
            Ok(0)
        })(),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
