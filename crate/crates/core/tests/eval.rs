use emocue::corpus::Gender;
use emocue::eval::*;
use emocue::Error;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn labels(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

const EMOTIONS: [&str; 6] = ["neutral", "angry", "sad", "happy", "disgust", "fear"];

/// Rows identified, columns true emotion.
const CONFUSION_A: [[f64; 6]; 6] = [
    [94.0, 4.0, 2.0, 4.0, 2.0, 2.0],
    [0.0, 78.0, 6.0, 2.0, 10.0, 3.0],
    [4.0, 5.0, 80.0, 2.0, 3.0, 7.0],
    [1.0, 0.0, 2.0, 88.0, 1.0, 2.0],
    [0.0, 10.0, 2.0, 1.0, 80.0, 3.0],
    [1.0, 3.0, 8.0, 3.0, 4.0, 83.0],
];

const CONFUSION_B: [[f64; 6]; 6] = [
    [96.0, 3.0, 3.0, 7.0, 1.0, 1.0],
    [0.0, 75.0, 6.0, 2.0, 8.0, 2.0],
    [1.0, 5.0, 77.0, 2.0, 5.0, 8.0],
    [1.0, 3.0, 2.0, 84.0, 1.0, 3.0],
    [0.0, 8.0, 4.0, 2.0, 82.0, 4.0],
    [2.0, 6.0, 8.0, 3.0, 3.0, 82.0],
];

/// (male, female) accuracy per emotion.
const TWO_STAGE: [(f64, f64); 6] = [(89.0, 91.0), (72.0, 73.0), (76.0, 77.0), (82.0, 84.0), (78.0, 78.0), (80.0, 79.0)];
const ONE_STAGE: [(f64, f64); 6] = [(84.0, 86.0), (62.0, 62.0), (67.0, 69.0), (73.0, 72.0), (71.0, 70.0), (71.0, 72.0)];
const HMM_ONLY: [(f64, f64); 6] = [(87.0, 88.0), (68.0, 69.0), (71.0, 73.0), (76.0, 77.0), (74.0, 75.0), (77.0, 76.0)];

fn table(cells: &[(f64, f64); 6]) -> PerformanceTable {
    let rows: Vec<(&str, Option<f64>, Option<f64>)> =
        EMOTIONS.iter().zip(cells).map(|(e, (m, f))| (*e, Some(*m), Some(*f))).collect();
    PerformanceTable::from_cells(&rows).unwrap()
}

fn matrix(cells: &[[f64; 6]; 6]) -> ConfusionMatrix {
    ConfusionMatrix::from_counts(labels(&EMOTIONS), cells.iter().map(|r| r.to_vec()).collect()).unwrap()
}

#[test]
fn reference_confusion_matrices() {
    for (cells, avg) in [(&CONFUSION_A, 83.83), (&CONFUSION_B, 82.67)] {
        let cm = matrix(cells);
        for s in cm.column_sums() {
            assert!((s - 100.0).abs() < 1e-9);
        }
        // The reference columns already sum to 100, so renormalising changes nothing.
        for (r, row) in cells.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                assert!((cm.cell(r, c) - v).abs() < 1e-9);
            }
        }
        assert!((average_diagonal(&cm) - avg).abs() < 0.01);
    }
}

#[test]
fn confusion_from_pairs() {
    let l = labels(&["a", "b"]);
    let perfect = confusion_matrix(&l, &[("a", "a"), ("b", "b"), ("b", "b")]).unwrap();
    assert_eq!(perfect.cells(), &[vec![100.0, 0.0], vec![0.0, 100.0]]);
    assert_eq!(average_diagonal(&perfect), 100.0);
    let mixed = confusion_matrix(&l, &[("a", "b"), ("a", "a"), ("a", "a"), ("b", "a")]).unwrap();
    assert!((mixed.cell(0, 0) - 200.0 / 3.0).abs() < 1e-12);
    assert!((mixed.cell(1, 0) - 100.0 / 3.0).abs() < 1e-12);
    assert_eq!(mixed.cell(0, 1), 100.0);
    assert!(matches!(confusion_matrix::<&str>(&l, &[]), Err(Error::EmptyResults)));
    assert!(matches!(confusion_matrix(&l, &[("a", "z")]), Err(Error::UnknownLabel { .. })));
}

#[test]
fn uniform_guessing_fills_every_cell_evenly() {
    let l = labels(&EMOTIONS);
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let pairs: Vec<(&str, &str)> = (0..60_000)
        .map(|i| (EMOTIONS[i % 6], EMOTIONS[rng.random_range(0..6)]))
        .collect();
    let cm = confusion_matrix(&l, &pairs).unwrap();
    for row in cm.cells() {
        for v in row {
            assert!((v - 100.0 / 6.0).abs() < 2.0, "{v}");
        }
    }
}

#[test]
fn reference_table_statistics() {
    let two = table(&TWO_STAGE);
    assert_eq!(two.averages(), vec![90.0, 72.5, 76.5, 83.0, 78.0, 79.5]);
    assert_eq!(round_to(two.mean, 2), 79.92);
    assert_eq!(round_to(two.sd, 2), 6.03);
    let one = table(&ONE_STAGE);
    assert_eq!(round_to(one.mean, 2), 71.58);
    assert_eq!(round_to(one.sd, 2), 7.57);
    let hmm = table(&HMM_ONLY);
    assert_eq!(round_to(hmm.mean, 2), 75.92);
    assert_eq!(round_to(hmm.sd, 2), 6.44);
}

#[test]
fn pooled_t_on_reference_tables() {
    let (two, one, hmm) = (table(&TWO_STAGE).averages(), table(&ONE_STAGE).averages(), table(&HMM_ONLY).averages());
    let t = pooled_t(&one, &two, 50).unwrap();
    assert!((t.from_rounded_summaries(2).t - 6.093).abs() < 0.005);
    // Full precision lands just outside that window.
    assert!((t.t - 6.088).abs() < 0.0005);
    let t = pooled_t(&hmm, &two, 50).unwrap();
    assert!((t.from_rounded_summaries(2).t - 3.206).abs() < 0.005);
    assert!((t.t - 3.206).abs() < 0.005);
    let t = pooled_t(&one, &two, 6).unwrap();
    assert!((t.t - 2.111).abs() < 0.005);
    assert!(t.exceeds_critical());
    assert_eq!(T_CRITICAL_005, 1.645);
}

#[test]
fn pooled_t_definition() {
    let t = TTestResult::from_summaries(71.58, 7.57, 79.92, 6.03, 50).unwrap();
    assert_eq!(t.sd_pooled, ((7.57f64 * 7.57 + 6.03 * 6.03) / 50.0).sqrt());
    assert_eq!(t.t, (79.92 - 71.58) / t.sd_pooled);
    let same = pooled_t(&[1.0, 2.0, 4.0], &[1.0, 2.0, 4.0], 3).unwrap();
    assert_eq!(same.t, 0.0);
}

proptest! {
    #[test]
    fn pooled_t_is_antisymmetric(
        a in prop::collection::vec(0.0f64..100.0, 2..10),
        b in prop::collection::vec(0.0f64..100.0, 2..10),
        n in 1usize..100,
    ) {
        let ab = pooled_t(&a, &b, n).unwrap();
        let ba = pooled_t(&b, &a, n).unwrap();
        prop_assert!((ab.t + ba.t).abs() <= 1e-9 * ab.t.abs().max(1.0));
    }

    #[test]
    fn performance_table_ignores_result_order(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let speakers = ["m1", "f1", "m2", "f2"];
        let owned: Vec<(String, String, String, Gender)> = (0..80)
            .map(|i| {
                let s = i % 4;
                let guess = if rng.random_bool(0.7) { s } else { rng.random_range(0..4) };
                let gender = if s % 2 == 0 { Gender::Male } else { Gender::Female };
                (speakers[s].to_string(), speakers[guess].to_string(), EMOTIONS[rng.random_range(0..6)].to_string(), gender)
            })
            .collect();
        let base = performance_table(&labels(&EMOTIONS), &outcomes(&owned)).unwrap();
        let mut shuffled = owned.clone();
        shuffled.shuffle(&mut rng);
        prop_assert_eq!(performance_table(&labels(&EMOTIONS), &outcomes(&shuffled)).unwrap(), base);
    }

    #[test]
    fn average_diagonal_is_a_percentage(counts in prop::collection::vec(0u32..50, 16)) {
        let rows: Vec<Vec<f64>> = counts.chunks(4).map(|r| r.iter().map(|&c| f64::from(c)).collect()).collect();
        let cm = ConfusionMatrix::from_counts(labels(&["a", "b", "c", "d"]), rows).unwrap();
        let d = average_diagonal(&cm);
        prop_assert!((0.0..=100.0).contains(&d));
    }
}

type Owned = (String, String, String, Gender);

fn outcomes(v: &[Owned]) -> Vec<SpeakerOutcome<'_>> {
    v.iter()
        .map(|(t, i, e, g)| SpeakerOutcome { true_speaker: t, identified_speaker: i, emotion: e, gender: *g })
        .collect()
}

#[test]
fn all_correct_results() {
    let outcomes: Vec<SpeakerOutcome> = EMOTIONS
        .iter()
        .flat_map(|e| {
            [("a", Gender::Male), ("b", Gender::Female)].map(|(s, g)| SpeakerOutcome {
                true_speaker: s,
                identified_speaker: s,
                emotion: e,
                gender: g,
            })
        })
        .collect();
    let t = performance_table(&labels(&EMOTIONS), &outcomes).unwrap();
    assert!(t.rows.iter().all(|r| r.male == Some(100.0) && r.female == Some(100.0) && r.average == 100.0));
    assert_eq!(t.mean, 100.0);
    assert_eq!(t.sd, 0.0);
    assert!(matches!(performance_table(&labels(&EMOTIONS), &[]), Err(Error::EmptyResults)));
}

#[test]
fn single_gender_rows_average_what_is_present() {
    let outcomes = [
        SpeakerOutcome { true_speaker: "a", identified_speaker: "a", emotion: "sad", gender: Gender::Female },
        SpeakerOutcome { true_speaker: "a", identified_speaker: "b", emotion: "sad", gender: Gender::Female },
    ];
    let t = performance_table(&labels(&EMOTIONS), &outcomes).unwrap();
    assert_eq!(t.rows.len(), 1);
    assert_eq!(t.rows[0].male, None);
    assert_eq!(t.rows[0].average, 50.0);
    assert_eq!(t.rows[0].count, 2);
}
