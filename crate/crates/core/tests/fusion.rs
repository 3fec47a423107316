mod common;

use common::*;
use emocue::hmm::forward_log_likelihood;
use emocue::sphmm::{fused_score, score_parts, FusionConfig, SupraMapping};

#[test]
fn end_points_and_midpoint_match_component_scores() {
    let mut r = rng(3);
    for case in 0..20 {
        let acoustic = random_model(&mut r, 9, 2, 4);
        let supra = random_supra(&mut r, SupraMapping::default());
        let utt = random_utterance(&mut r, 30 + case, 4);
        let a = forward_log_likelihood(&acoustic, &utt.features).unwrap();
        let p = forward_log_likelihood(&supra.hmm, &supra.observations(&acoustic, &utt).unwrap()).unwrap();
        let f = |alpha| fused_score(&acoustic, &supra, &utt, &FusionConfig::new(alpha, false).unwrap()).unwrap();
        assert!((f(0.0) - a).abs() <= 1e-12);
        assert!((f(1.0) - p).abs() <= 1e-12);
        assert!((f(0.5) - 0.5 * (a + p)).abs() <= 1e-12);
    }
}

#[test]
fn fused_score_is_affine_in_alpha() {
    let mut r = rng(4);
    for _ in 0..10 {
        let acoustic = random_model(&mut r, 9, 2, 3);
        let supra = random_supra(&mut r, SupraMapping::default());
        let utt = random_utterance(&mut r, 45, 3);
        for normalize in [false, true] {
            let f = |alpha: f64| fused_score(&acoustic, &supra, &utt, &FusionConfig::new(alpha, normalize).unwrap()).unwrap();
            let (f0, f1) = (f(0.0), f(1.0));
            for i in 0..=10 {
                let alpha = i as f64 / 10.0;
                let line = f0 + alpha * (f1 - f0);
                assert!((f(alpha) - line).abs() <= 1e-12 * f0.abs().max(f1.abs()).max(1.0), "alpha {alpha}");
            }
        }
    }
}

#[test]
fn prosodic_model_is_never_consulted_at_alpha_zero() {
    let mut r = rng(5);
    let acoustic = random_model(&mut r, 9, 2, 4);
    let utt = random_utterance(&mut r, 40, 4);
    // A six-state mapping cannot align against a nine-state acoustic model.
    let broken = random_supra(&mut r, SupraMapping::new(vec![2, 2, 2]).unwrap());
    assert!(score_parts(&acoustic, &broken, &utt).is_err());
    let zero = FusionConfig::new(0.0, false).unwrap();
    let want = forward_log_likelihood(&acoustic, &utt.features).unwrap();
    assert_eq!(fused_score(&acoustic, &broken, &utt, &zero).unwrap(), want);
    let other = random_supra(&mut r, SupraMapping::default());
    assert_eq!(fused_score(&acoustic, &other, &utt, &zero).unwrap(), want);
}

#[test]
fn length_normalisation_divides_each_stream_by_its_own_length() {
    let mut r = rng(6);
    let acoustic = random_model(&mut r, 9, 2, 4);
    let supra = random_supra(&mut r, SupraMapping::default());
    let utt = random_utterance(&mut r, 60, 4);
    let parts = score_parts(&acoustic, &supra, &utt).unwrap();
    assert_eq!(parts.acoustic_len, 60);
    assert_eq!(parts.prosodic_len, 9);
    let cfg = FusionConfig::new(0.3, true).unwrap();
    let want = 0.7 * parts.acoustic / 60.0 + 0.3 * parts.prosodic / 9.0;
    assert!((fused_score(&acoustic, &supra, &utt, &cfg).unwrap() - want).abs() < 1e-12);
}
