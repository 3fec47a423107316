mod common;

use std::collections::{BTreeMap, HashSet};
use std::io::Write;

use common::*;
use emocue::corpus::*;
use emocue::{Error, FeatureSequence};
use proptest::prelude::*;

fn shaped_manifest(speakers: usize, emotions: &[&str], sentences: u32, reps: u32) -> String {
    let mut text = MANIFEST_HEADER.join("\t");
    text.push('\n');
    for s in 0..speakers {
        let gender = if s % 2 == 0 { "male" } else { "female" };
        for e in emotions {
            for t in 1..=sentences {
                for r in 1..=reps {
                    text.push_str(&format!("s{s}_{e}_{t}_{r}\ts{s}\t{gender}\t{e}\t{t}\t{r}\taudio/s{s}_{e}_{t}_{r}.wav\n"));
                }
            }
        }
    }
    text
}

#[test]
fn full_size_corpus_counts() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("manifest.tsv");
    std::fs::write(&path, shaped_manifest(50, &DEFAULT_EMOTIONS, 8, 9)).unwrap();
    let records = load_manifest(&path, &CorpusLabels::default()).unwrap();
    assert_eq!(records.len(), 21_600);
    assert_eq!(records[0].audio.as_deref(), Some(dir.path().join("audio/s0_neutral_1_1.wav").as_path()));

    let (train, test) = split(&records, &SplitProtocol::default());
    assert_eq!(test.len(), 10_800);
    for emotion in DEFAULT_EMOTIONS {
        assert_eq!(train.iter().filter(|r| r.emotion == emotion).count(), 1_800);
    }
    let mut per_pair: BTreeMap<(&str, &str), usize> = BTreeMap::new();
    for r in &train {
        *per_pair.entry((&r.speaker, &r.emotion)).or_default() += 1;
    }
    assert_eq!(per_pair.len(), 300);
    assert!(per_pair.values().all(|&n| n == 36));
}

#[test]
fn empty_file_and_duplicates() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.tsv");
    std::fs::File::create(&path).unwrap();
    assert!(load_manifest(&path, &CorpusLabels::default()).unwrap().is_empty());

    let mut text = shaped_manifest(1, &["sad"], 1, 1);
    text.push_str("other\ts0\tmale\tsad\t1\t1\t\n");
    let err = parse_manifest(text.as_bytes(), &CorpusLabels::default(), "dup").unwrap_err();
    assert!(matches!(err, Error::DuplicateUtterance(_)));

    let bad = shaped_manifest(1, &["bored"], 1, 1);
    assert!(matches!(
        parse_manifest(bad.as_bytes(), &CorpusLabels::default(), "label"),
        Err(Error::UnknownLabel { field: "emotion", .. })
    ));
    let missing = dir.path().join("nope.tsv");
    assert!(matches!(load_manifest(&missing, &CorpusLabels::default()), Err(Error::Io { .. })));
}

#[test]
fn manifest_write_then_load_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let records = parse_manifest(shaped_manifest(2, &["angry", "fear"], 3, 2).as_bytes(), &CorpusLabels::default(), "t").unwrap();
    let path = dir.path().join("m.tsv");
    write_manifest(&path, &records).unwrap();
    let back = load_manifest(&path, &CorpusLabels::default()).unwrap();
    assert_eq!(back.len(), records.len());
    for (a, b) in records.iter().zip(&back) {
        assert_eq!(a.id, b.id);
        assert_eq!(a.gender, b.gender);
        assert_eq!(b.audio.as_ref().unwrap(), &dir.path().join(a.audio.as_ref().unwrap()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn split_counts_follow_the_shape(
        speakers in 1usize..6,
        n_emotions in 1usize..=6,
        sentences in 2u32..=8,
        reps in 1u32..=9,
        cut in 1u32..8,
    ) {
        let cut = cut.min(sentences - 1);
        let emotions = &DEFAULT_EMOTIONS[..n_emotions];
        let records = parse_manifest(shaped_manifest(speakers, emotions, sentences, reps).as_bytes(), &CorpusLabels::default(), "p").unwrap();
        let protocol = SplitProtocol::new(1..=cut, cut + 1..=sentences).unwrap();
        let (train, test) = split(&records, &protocol);
        prop_assert_eq!(train.len(), speakers * n_emotions * (cut * reps) as usize);
        prop_assert_eq!(test.len(), speakers * n_emotions * ((sentences - cut) * reps) as usize);
        let train_ids: HashSet<&str> = train.iter().map(|r| r.id.as_str()).collect();
        let test_ids: HashSet<&str> = test.iter().map(|r| r.id.as_str()).collect();
        prop_assert!(train_ids.is_disjoint(&test_ids));
        prop_assert_eq!(train_ids.len() + test_ids.len(), records.len());
    }
}

#[test]
fn normalisation_uses_training_statistics_only() {
    let mut r = rng(9);
    let train: Vec<_> = (0..5).map(|i| random_utterance(&mut r, 30 + i, 4)).collect();
    let shifted: Vec<_> = train
        .iter()
        .map(|u| {
            let mut u = u.clone();
            u.features.frames_mut().for_each(|x| x.iter_mut().for_each(|v| *v = 3.0 * *v + 10.0));
            u
        })
        .collect();
    let (ntrain, ntest, norm) = normalize_features(&train, &shifted).unwrap();

    let frames: Vec<&[f64]> = ntrain.iter().flat_map(|u| u.features.frames()).collect();
    for d in 0..4 {
        let n = frames.len() as f64;
        let m: f64 = frames.iter().map(|x| x[d]).sum::<f64>() / n;
        let v: f64 = frames.iter().map(|x| (x[d] - m).powi(2)).sum::<f64>() / n;
        assert!(m.abs() < 1e-9);
        assert!((v - 1.0).abs() < 1e-6);
    }
    for (a, b) in ntrain.iter().zip(&ntest) {
        assert_eq!(a.prosody, b.prosody);
    }
    // Test features are mapped with the training statistics, not their own.
    let test_mean: f64 = ntest.iter().flat_map(|u| u.features.frames()).map(|x| x[0]).sum::<f64>() / frames.len() as f64;
    assert!(test_mean > 1.0);
    for (u, n) in shifted.iter().zip(&ntest) {
        for (raw, z) in u.features.frames().zip(n.features.frames()) {
            for d in 0..4 {
                assert!((z[d] - (raw[d] - norm.mean[d]) / norm.std[d]).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn constant_dimension_is_degenerate() {
    let seq = FeatureSequence::from_rows(2, &[vec![1.0, 5.0], vec![2.0, 5.0], vec![3.0, 5.0]]).unwrap();
    assert!(matches!(Normalizer::fit([&seq]), Err(Error::DegenerateDimension(1))));
}

#[test]
fn synthetic_corpus_is_reproducible_and_reloadable() {
    let spec = SynthSpec {
        n_speakers: 3,
        repetitions: 1,
        ..SynthSpec::default()
    };
    let a = synthesize_corpus(&spec).unwrap();
    let b = synthesize_corpus(&spec).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.records.len(), 3 * 6 * 8);

    let dir = tempfile::tempdir().unwrap();
    a.write(dir.path()).unwrap();
    let again = tempfile::tempdir().unwrap();
    b.write(again.path()).unwrap();
    for f in ["manifest.tsv", "features.json", "generators.json"] {
        assert_eq!(
            std::fs::read(dir.path().join(f)).unwrap(),
            std::fs::read(again.path().join(f)).unwrap(),
            "{f}"
        );
    }
    let records = load_manifest(dir.path().join("manifest.tsv"), &CorpusLabels::default()).unwrap();
    assert_eq!(records, a.records);
    let cache = FeatureCache::load(dir.path().join("features.json")).unwrap();
    assert_eq!(cache, a.features);
    let mut f = std::fs::OpenOptions::new().append(true).open(dir.path().join("features.json")).unwrap();
    writeln!(f, "trailing").unwrap();
    assert!(FeatureCache::load(dir.path().join("features.json")).is_err());
}
