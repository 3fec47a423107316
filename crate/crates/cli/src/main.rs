//! Command-line front end for the emocue speaker identification pipeline.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod config;
mod error;

use config::RunConfig;
use error::CliError;

#[derive(Parser)]
#[command(name = "emocue", version, about = "Two-stage emotion-cue speaker identification")]
struct Cli {
    /// TOML file with run settings; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for every default artifact path.
    #[arg(long, global = true, default_value = "emocue-out")]
    out: PathBuf,
    #[command(flatten)]
    run: RunArgs,
    #[command(subcommand)]
    command: Command,
}

/// Run settings. Defaults: alpha 0.5, 9 states, 10 mixtures, 3 suprasegmental
/// mixtures, mapping 3,3,3, train sentences 1-4, test sentences 5-8, variance floor
/// 1e-4, tol 1e-5, 40 iterations, seed 0, no length normalization.
#[derive(Args, Debug, Default, Clone)]
pub struct RunArgs {
    /// Fusion weight of the prosodic score, in [0, 1].
    #[arg(long, global = true)]
    pub alpha: Option<f64>,
    /// Acoustic HMM states.
    #[arg(long, global = true)]
    pub states: Option<usize>,
    /// Gaussian components per acoustic state.
    #[arg(long, global = true)]
    pub mixtures: Option<usize>,
    /// Gaussian components per suprasegmental state.
    #[arg(long, global = true)]
    pub supra_mixtures: Option<usize>,
    /// Acoustic states per suprasegmental state, e.g. 3,3,3.
    #[arg(long, global = true, value_delimiter = ',')]
    pub supra_mapping: Option<Vec<usize>>,
    /// Sentence indices used for training.
    #[arg(long, global = true, value_delimiter = ',')]
    pub train_sentences: Option<Vec<u32>>,
    /// Sentence indices used for testing.
    #[arg(long, global = true, value_delimiter = ',')]
    pub test_sentences: Option<Vec<u32>>,
    /// Lower bound on every Gaussian variance.
    #[arg(long, global = true)]
    pub variance_floor: Option<f64>,
    /// Relative log-likelihood gain below which training stops.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Maximum Baum-Welch iterations.
    #[arg(long, global = true)]
    pub max_iters: Option<usize>,
    /// Seed for every random choice.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Divide acoustic and prosodic log-likelihoods by their lengths before fusing.
    #[arg(long, global = true, num_args = 0..=1, default_missing_value = "true")]
    pub length_normalize: Option<bool>,
    /// Emotion labels of the corpus, in order.
    #[arg(long, global = true, value_delimiter = ',')]
    pub emotions: Option<Vec<String>>,
    /// Largest sentence index a manifest may use.
    #[arg(long, global = true)]
    pub max_sentence: Option<u32>,
    /// Largest repetition index a manifest may use.
    #[arg(long, global = true)]
    pub max_repetition: Option<u32>,
}

#[derive(Subcommand)]
enum Command {
    /// Extract MFCC and prosodic features for every manifest record.
    Extract(commands::CorpusPaths),
    /// Train the acoustic and prosodic model of every emotion.
    TrainEmotions(commands::CorpusPaths),
    /// Train one acoustic model per (speaker, emotion) pair.
    TrainSpeakers(commands::CorpusPaths),
    /// Train one emotion-independent acoustic model per speaker.
    TrainOnestage(commands::CorpusPaths),
    /// Identify the emotion and speaker of test utterances.
    Identify(commands::IdentifyArgs),
    /// Confusion matrix and per-emotion, per-gender tables from a results file.
    Evaluate(commands::EvaluateArgs),
    /// Two-stage accuracy for fusion weights 0.0, 0.1, ..., 1.0.
    SweepAlpha(commands::SweepArgs),
    /// Generate a synthetic corpus with known generators.
    GenSynthetic(commands::SynthArgs),
    /// Student t with the pooled standard deviation.
    Ttest(commands::TtestArgs),
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = RunConfig::load(cli.config.as_deref(), &cli.run)?;
    let out = cli.out;
    match cli.command {
        Command::Extract(p) => commands::extract(&cfg, &out, &p),
        Command::TrainEmotions(p) => commands::train_emotions(&cfg, &out, &p),
        Command::TrainSpeakers(p) => commands::train_speakers(&cfg, &out, &p),
        Command::TrainOnestage(p) => commands::train_one_stage(&cfg, &out, &p),
        Command::Identify(a) => commands::identify(&cfg, &out, &a),
        Command::Evaluate(a) => commands::evaluate(&out, &a),
        Command::SweepAlpha(a) => commands::sweep_alpha(&cfg, &out, &a),
        Command::GenSynthetic(a) => commands::gen_synthetic(&cfg, &out, &a),
        Command::Ttest(a) => commands::ttest(&a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("emocue: {e}");
            e.exit_code()
        }
    }
}
