use std::path::{Path, PathBuf};

use clap::Args;

use emocue::corpus::{
    load_manifest, split, synthesize_corpus, FeatureCache, Normalizer, SynthSpec, UtteranceRecord,
};
use emocue::eval::{alpha_sweep, default_alphas, evaluate_results, pooled_t, TTestResult, T_CRITICAL_005};
use emocue::recognizer::{
    identify_records, labelled, train_emotion_models, train_one_stage_models, train_speaker_models,
    write_emotion_models, write_one_stage_models, write_speaker_models, BankManifest, ModelBank, ResultsTable,
    BANK_MANIFEST,
};

use crate::config::RunConfig;
use crate::error::CliError;

const NORMALIZER_FILE: &str = "normalization.json";

#[derive(Args, Debug, Clone)]
pub struct CorpusPaths {
    /// Corpus manifest [default: <out>/manifest.tsv].
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// Feature cache [default: <out>/features.json].
    #[arg(long)]
    features: Option<PathBuf>,
    /// Model directory [default: <out>/models].
    #[arg(long)]
    models: Option<PathBuf>,
}

impl CorpusPaths {
    fn manifest(&self, out: &Path) -> PathBuf {
        self.manifest.clone().unwrap_or_else(|| out.join("manifest.tsv"))
    }

    fn features(&self, out: &Path) -> PathBuf {
        self.features.clone().unwrap_or_else(|| out.join("features.json"))
    }

    fn models(&self, out: &Path) -> PathBuf {
        self.models.clone().unwrap_or_else(|| out.join("models"))
    }
}

#[derive(Args, Debug, Clone)]
pub struct IdentifyArgs {
    #[command(flatten)]
    paths: CorpusPaths,
    /// Identify only this utterance id and print the result.
    #[arg(long)]
    utterance: Option<String>,
    /// Results file [default: <out>/results.tsv].
    #[arg(long)]
    results: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct EvaluateArgs {
    /// Results file [default: <out>/results.tsv].
    #[arg(long)]
    results: Option<PathBuf>,
    /// Output directory for the tables [default: <out>/eval].
    #[arg(long)]
    eval_dir: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct SweepArgs {
    #[command(flatten)]
    paths: CorpusPaths,
    /// Sweep table [default: <out>/alpha_sweep.tsv].
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct SynthArgs {
    #[arg(long, default_value_t = 5)]
    speakers: usize,
    #[arg(long, default_value_t = 3)]
    repetitions: u32,
    /// Class offsets in units of within-class standard deviation.
    #[arg(long, default_value_t = 6.0)]
    separation: f64,
    /// Weight of the emotion-independent part of each speaker's acoustics, in [0, 1].
    #[arg(long, default_value_t = 0.5)]
    speaker_constancy: f64,
    /// Shorthand for --speaker-constancy 0: acoustics carry no emotion information.
    #[arg(long)]
    prosody_dominant: bool,
}

#[derive(Args, Debug, Clone)]
pub struct TtestArgs {
    /// First sample (the baseline), comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required_unless_present = "mean_1")]
    sample_1: Vec<f64>,
    /// Second sample, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required_unless_present = "mean_2")]
    sample_2: Vec<f64>,
    /// Mean of the first sample, instead of --sample-1.
    #[arg(long, requires = "sd_1", conflicts_with = "sample_1")]
    mean_1: Option<f64>,
    #[arg(long)]
    sd_1: Option<f64>,
    /// Mean of the second sample, instead of --sample-2.
    #[arg(long, requires = "sd_2", conflicts_with = "sample_2")]
    mean_2: Option<f64>,
    #[arg(long)]
    sd_2: Option<f64>,
    /// The n in the pooled standard deviation.
    #[arg(long)]
    n_pool: usize,
    /// Also recompute t from means and deviations rounded to this many decimals.
    #[arg(long, default_value_t = 2)]
    summary_decimals: u32,
}

fn load_records(cfg: &RunConfig, paths: &CorpusPaths, out: &Path) -> Result<Vec<UtteranceRecord>, CliError> {
    Ok(load_manifest(paths.manifest(out), &cfg.labels())?)
}

fn first_seen(values: impl Iterator<Item = String>) -> Vec<String> {
    let mut list: Vec<String> = Vec::new();
    for v in values {
        if !list.contains(&v) {
            list.push(v);
        }
    }
    list
}

fn normalize_cache(norm: &Normalizer, cache: &FeatureCache, records: &[UtteranceRecord]) -> Result<FeatureCache, CliError> {
    let mut out = FeatureCache::default();
    for r in records {
        out.insert(r.id.clone(), norm.apply_utterance(cache.get(&r.id)?)?);
    }
    Ok(out)
}

/// Training records with features normalized by statistics of those records, which
/// are saved next to the models.
struct TrainingData {
    records: Vec<UtteranceRecord>,
    cache: FeatureCache,
    speakers: Vec<String>,
    models: PathBuf,
}

fn training_data(cfg: &RunConfig, out: &Path, paths: &CorpusPaths) -> Result<TrainingData, CliError> {
    let all = load_records(cfg, paths, out)?;
    let (train, _) = split(&all, &cfg.split()?);
    if train.is_empty() {
        return Err(emocue::Error::EmptyTrainingSet.into());
    }
    let raw = FeatureCache::load(paths.features(out))?;
    let train_feats = train.iter().map(|r| raw.get(&r.id).map(|u| &u.features)).collect::<Result<Vec<_>, _>>()?;
    let norm = Normalizer::fit(train_feats)?;
    let models = paths.models(out);
    std::fs::create_dir_all(&models).map_err(|e| emocue::Error::io(&models, e))?;
    norm.save(models.join(NORMALIZER_FILE))?;
    let cache = normalize_cache(&norm, &raw, &train)?;
    let speakers = first_seen(train.iter().map(|r| r.speaker.clone()));
    Ok(TrainingData {
        records: train,
        cache,
        speakers,
        models,
    })
}

fn update_bank(models: &Path, part: BankManifest) -> Result<(), CliError> {
    let path = models.join(BANK_MANIFEST);
    let mut manifest = BankManifest::read_or_default(&path)?;
    manifest.merge(part);
    manifest.write(&path)?;
    Ok(())
}

pub fn extract(cfg: &RunConfig, out: &Path, paths: &CorpusPaths) -> Result<(), CliError> {
    let records = load_records(cfg, paths, out)?;
    let cache = FeatureCache::extract(&records)?;
    let dest = paths.features(out);
    if let Some(dir) = dest.parent() {
        std::fs::create_dir_all(dir).map_err(|e| emocue::Error::io(dir, e))?;
    }
    cache.save(&dest)?;
    eprintln!("extracted {} utterances into {}", cache.len(), dest.display());
    Ok(())
}

pub fn train_emotions(cfg: &RunConfig, out: &Path, paths: &CorpusPaths) -> Result<(), CliError> {
    let data = training_data(cfg, out, paths)?;
    let models = train_emotion_models(&cfg.emotions, &labelled(&data.records, &data.cache)?, &cfg.bank()?)?;
    update_bank(&data.models, write_emotion_models(&data.models, &cfg.emotions, &models)?)?;
    eprintln!("trained {} emotion models", models.len());
    Ok(())
}

pub fn train_speakers(cfg: &RunConfig, out: &Path, paths: &CorpusPaths) -> Result<(), CliError> {
    let data = training_data(cfg, out, paths)?;
    let train = labelled(&data.records, &data.cache)?;
    let models = train_speaker_models(&cfg.emotions, &data.speakers, &train, &cfg.bank()?)?;
    update_bank(&data.models, write_speaker_models(&data.models, &cfg.emotions, &data.speakers, &models)?)?;
    eprintln!("trained {} speaker models", cfg.emotions.len() * data.speakers.len());
    Ok(())
}

pub fn train_one_stage(cfg: &RunConfig, out: &Path, paths: &CorpusPaths) -> Result<(), CliError> {
    let data = training_data(cfg, out, paths)?;
    let train = labelled(&data.records, &data.cache)?;
    let models = train_one_stage_models(&data.speakers, &train, &cfg.bank()?)?;
    update_bank(&data.models, write_one_stage_models(&data.models, &data.speakers, &models)?)?;
    eprintln!("trained {} one-stage models", models.len());
    Ok(())
}

/// Bank plus the records to score, normalized with the training statistics.
fn scoring_inputs(
    cfg: &RunConfig,
    out: &Path,
    paths: &CorpusPaths,
    only: Option<&str>,
) -> Result<(ModelBank, Vec<UtteranceRecord>, FeatureCache), CliError> {
    let models = paths.models(out);
    let bank = ModelBank::load(models.join(BANK_MANIFEST))?;
    let norm = Normalizer::load(models.join(NORMALIZER_FILE))?;
    let all = load_records(cfg, paths, out)?;
    let records = match only {
        Some(id) => {
            let r = all.into_iter().find(|r| r.id == id).ok_or_else(|| emocue::Error::MissingFeatures(id.to_string()))?;
            vec![r]
        }
        None => split(&all, &cfg.split()?).1,
    };
    if records.is_empty() {
        return Err(emocue::Error::EmptyResults.into());
    }
    let raw = FeatureCache::load(paths.features(out))?;
    let cache = normalize_cache(&norm, &raw, &records)?;
    Ok((bank, records, cache))
}

pub fn identify(cfg: &RunConfig, out: &Path, args: &IdentifyArgs) -> Result<(), CliError> {
    let (bank, records, cache) = scoring_inputs(cfg, out, &args.paths, args.utterance.as_deref())?;
    let rows = identify_records(&records, &cache, &bank, &cfg.fusion()?)?;
    if args.utterance.is_some() {
        let r = &rows[0];
        println!("id\t{}", r.id);
        println!("identified_emotion\t{}", r.identified_emotion);
        println!("identified_speaker\t{}", r.identified_speaker);
        if let Some(s) = &r.one_stage_speaker {
            println!("one_stage_speaker\t{s}");
        }
        for (e, v) in bank.emotions().iter().zip(&r.emotion_scores) {
            println!("emotion_score:{e}\t{v}");
        }
        for (s, v) in bank.speakers().iter().zip(&r.speaker_scores) {
            println!("speaker_score:{s}\t{v}");
        }
        if args.results.is_none() {
            return Ok(());
        }
    }
    let dest = args.results.clone().unwrap_or_else(|| out.join("results.tsv"));
    let table = ResultsTable {
        emotions: bank.emotions().to_vec(),
        speakers: bank.speakers().to_vec(),
        rows,
    };
    table.write(&dest)?;
    eprintln!("wrote {} results to {}", table.rows.len(), dest.display());
    Ok(())
}

pub fn evaluate(out: &Path, args: &EvaluateArgs) -> Result<(), CliError> {
    let src = args.results.clone().unwrap_or_else(|| out.join("results.tsv"));
    let table = ResultsTable::read(&src)?;
    let ev = evaluate_results(&table)?;
    let dir = args.eval_dir.clone().unwrap_or_else(|| out.join("eval"));
    ev.write(&dir)?;
    println!("emotion_accuracy\t{:.2}", ev.emotion_accuracy);
    println!("average_diagonal\t{:.2}", ev.average_diagonal);
    println!("two_stage_mean\t{:.2}", ev.two_stage.mean);
    println!("two_stage_sd\t{:.2}", ev.two_stage.sd);
    if let Some(one) = &ev.one_stage {
        println!("one_stage_mean\t{:.2}", one.mean);
        println!("one_stage_sd\t{:.2}", one.sd);
    }
    eprintln!("tables written to {}", dir.display());
    Ok(())
}

pub fn sweep_alpha(cfg: &RunConfig, out: &Path, args: &SweepArgs) -> Result<(), CliError> {
    let (bank, records, cache) = scoring_inputs(cfg, out, &args.paths, None)?;
    let sweep = alpha_sweep(&bank, &labelled(&records, &cache)?, &default_alphas(), cfg.length_normalize)?;
    let dest = args.output.clone().unwrap_or_else(|| out.join("alpha_sweep.tsv"));
    sweep.write_tsv(&dest)?;
    for (alpha, acc) in sweep.alphas.iter().zip(&sweep.overall_speaker_accuracy) {
        println!("{alpha}\t{acc:.2}");
    }
    eprintln!("sweep written to {}", dest.display());
    Ok(())
}

pub fn gen_synthetic(cfg: &RunConfig, out: &Path, args: &SynthArgs) -> Result<(), CliError> {
    let spec = SynthSpec {
        n_speakers: args.speakers,
        emotions: cfg.emotions.clone(),
        repetitions: args.repetitions,
        separation: args.separation,
        speaker_constancy: if args.prosody_dominant { 0.0 } else { args.speaker_constancy },
        seed: cfg.seed,
        ..SynthSpec::default()
    };
    let corpus = synthesize_corpus(&spec)?;
    corpus.write(out)?;
    eprintln!("wrote {} synthetic utterances to {}", corpus.records.len(), out.display());
    Ok(())
}

pub fn ttest(args: &TtestArgs) -> Result<(), CliError> {
    let result = match (args.mean_1, args.sd_1, args.mean_2, args.sd_2) {
        (Some(m1), Some(s1), Some(m2), Some(s2)) => TTestResult::from_summaries(m1, s1, m2, s2, args.n_pool)?,
        _ if !args.sample_1.is_empty() && !args.sample_2.is_empty() && args.mean_1.is_none() && args.mean_2.is_none() => {
            pooled_t(&args.sample_1, &args.sample_2, args.n_pool)?
        }
        _ => {
            return Err(CliError::Usage(
                "give both samples, or --mean-1/--sd-1 and --mean-2/--sd-2".into(),
            ))
        }
    };
    let rounded = result.from_rounded_summaries(args.summary_decimals);
    println!("mean_1\t{:.4}", result.mean_1);
    println!("sd_1\t{:.4}", result.sd_1);
    println!("mean_2\t{:.4}", result.mean_2);
    println!("sd_2\t{:.4}", result.sd_2);
    println!("n_pool\t{}", result.n_pool);
    println!("sd_pooled\t{:.4}", result.sd_pooled);
    println!("t_full_precision\t{:.3}", result.t);
    println!("t\t{:.3}", rounded.t);
    println!("t_critical_0.05\t{T_CRITICAL_005}");
    Ok(())
}
