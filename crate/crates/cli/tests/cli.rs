use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, Output};

use emocue::dsp::write_wav;

fn emocue(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_emocue"))
        .arg("--out")
        .arg(dir)
        .args(args)
        .output()
        .expect("spawn emocue")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn value<'a>(text: &'a str, key: &str) -> Option<&'a str> {
    text.lines().find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix('\t')))
}

#[test]
fn ttest_from_reference_samples() {
    let dir = tempfile::tempdir().unwrap();
    let o = emocue(
        dir.path(),
        &[
            "ttest",
            "--sample-1",
            "85,62,68,72.5,70.5,71.5",
            "--sample-2",
            "90,72.5,76.5,83,78,79.5",
            "--n-pool",
            "50",
        ],
    );
    assert!(o.status.success(), "{o:?}");
    let text = stdout(&o);
    assert_eq!(value(&text, "t"), Some("6.093"));
    assert_eq!(value(&text, "t_full_precision"), Some("6.088"));
    assert_eq!(value(&text, "t_critical_0.05"), Some("1.645"));
}

#[test]
fn ttest_from_summaries() {
    let dir = tempfile::tempdir().unwrap();
    let o = emocue(
        dir.path(),
        &["ttest", "--mean-1", "75.92", "--sd-1", "6.44", "--mean-2", "79.92", "--sd-2", "6.03", "--n-pool", "50"],
    );
    assert!(o.status.success(), "{o:?}");
    assert_eq!(value(&stdout(&o), "t"), Some("3.206"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(emocue(dir.path(), &["--help"]).status.code(), Some(0));
    assert_eq!(emocue(dir.path(), &["frobnicate"]).status.code(), Some(1));
    assert_eq!(emocue(dir.path(), &["--alpha", "1.5", "evaluate"]).status.code(), Some(1));
    let missing = emocue(dir.path(), &["extract", "--manifest", "nope.tsv"]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&missing.stderr).starts_with("emocue: "));
    let zero = emocue(dir.path(), &["ttest", "--sample-1", "1,2", "--sample-2", "3,4", "--n-pool", "0"]);
    assert_eq!(zero.status.code(), Some(1));
}

#[test]
fn config_file_is_read_and_validated() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "alpha = 2.0\n").unwrap();
    let o = emocue(dir.path(), &["--config", bad.to_str().unwrap(), "evaluate"]);
    assert_eq!(o.status.code(), Some(1));
    let unknown = dir.path().join("unknown.toml");
    std::fs::write(&unknown, "alfa = 0.5\n").unwrap();
    let o = emocue(dir.path(), &["--config", unknown.to_str().unwrap(), "evaluate"]);
    assert_eq!(o.status.code(), Some(1));
    // The flag wins over the file, so validation passes and the run fails later on data.
    let o = emocue(dir.path(), &["--config", bad.to_str().unwrap(), "--alpha", "0.5", "evaluate"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn extract_reads_wav_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let mut manifest = String::from("id\tspeaker\tgender\temotion\tsentence\trepetition\taudio\n");
    for (i, f0) in [120.0, 210.0].iter().enumerate() {
        let samples: Vec<i16> =
            (0..8000).map(|n| (9000.0 * (2.0 * PI * f0 * n as f64 / 16_000.0).sin()) as i16).collect();
        let path = dir.path().join(format!("u{i}.wav"));
        write_wav(&path, &samples, 16_000).unwrap();
        let gender = if i == 0 { "male" } else { "female" };
        manifest.push_str(&format!("u{i}\ts{i}\t{gender}\tneutral\t1\t1\t{}\n", path.display()));
    }
    std::fs::write(dir.path().join("manifest.tsv"), manifest).unwrap();
    let o = emocue(dir.path(), &["extract"]);
    assert!(o.status.success(), "{o:?}");
    let cache = emocue::corpus::FeatureCache::load(dir.path().join("features.json")).unwrap();
    let u = cache.get("u1").unwrap();
    assert_eq!(u.features.dim(), 16);
    assert_eq!(u.features.len(), u.prosody.f0.len());
}

#[test]
fn synthetic_corpus_has_no_audio_to_extract() {
    let dir = tempfile::tempdir().unwrap();
    let o = emocue(dir.path(), &["gen-synthetic", "--speakers", "2", "--repetitions", "1"]);
    assert!(o.status.success(), "{o:?}");
    assert!(dir.path().join("manifest.tsv").exists());
    assert!(dir.path().join("features.json").exists());
    assert_eq!(emocue(dir.path(), &["extract"]).status.code(), Some(2));
}

#[test]
fn single_utterance_identification() {
    let dir = tempfile::tempdir().unwrap();
    let small = ["--emotions", "neutral,angry", "--mixtures", "2", "--max-iters", "5"];
    let run = |cmd: &[&str]| {
        let mut args: Vec<&str> = cmd.to_vec();
        args.extend_from_slice(&small);
        emocue(dir.path(), &args)
    };
    assert!(run(&["gen-synthetic", "--speakers", "2", "--repetitions", "1"]).status.success());
    for cmd in ["train-emotions", "train-speakers"] {
        let o = run(&[cmd]);
        assert!(o.status.success(), "{cmd}: {o:?}");
    }
    let o = run(&["identify", "--utterance", "spk02_angry_t1_r1"]);
    assert!(o.status.success(), "{o:?}");
    let text = stdout(&o);
    assert_eq!(value(&text, "id"), Some("spk02_angry_t1_r1"));
    assert!(value(&text, "identified_speaker").is_some());
    assert!(value(&text, "one_stage_speaker").is_none());
    assert!(value(&text, "speaker_score:spk01").unwrap().parse::<f64>().unwrap().is_finite());
    assert!(!dir.path().join("results.tsv").exists());
    assert_eq!(run(&["identify", "--utterance", "missing"]).status.code(), Some(2));
}
