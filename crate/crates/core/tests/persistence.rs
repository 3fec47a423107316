mod common;

use common::*;
use emocue::hmm::LtrHmm;
use emocue::sphmm::{SupraMapping, SuprasegmentalModel};
use emocue::Error;

#[test]
fn models_round_trip_bit_for_bit() {
    let mut r = rng(21);
    let dir = tempfile::tempdir().unwrap();
    for i in 0..10 {
        let model = random_model(&mut r, 1 + i % 9, 1 + i % 4, 16);
        let path = dir.path().join(format!("m{i}.json"));
        model.save(&path).unwrap();
        let back = LtrHmm::load(&path).unwrap();
        assert_eq!(back, model);
        for (a, b) in back.states().iter().zip(model.states()) {
            for (x, y) in a.means.iter().flatten().zip(b.means.iter().flatten()) {
                assert_eq!(x.to_bits(), y.to_bits());
            }
        }
        back.save(dir.path().join("again.json")).unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), std::fs::read(dir.path().join("again.json")).unwrap());
    }
    let supra = random_supra(&mut r, SupraMapping::default());
    supra.save(dir.path().join("s.json")).unwrap();
    assert_eq!(SuprasegmentalModel::load(dir.path().join("s.json")).unwrap(), supra);
}

#[test]
fn wrong_kind_and_corrupt_files_are_rejected() {
    let mut r = rng(22);
    let dir = tempfile::tempdir().unwrap();
    let supra = random_supra(&mut r, SupraMapping::default());
    supra.save(dir.path().join("s.json")).unwrap();
    assert!(matches!(LtrHmm::load(dir.path().join("s.json")), Err(Error::Parse { .. })));
    std::fs::write(dir.path().join("bad.json"), "{\"format\":\"emocue\"").unwrap();
    assert!(matches!(LtrHmm::load(dir.path().join("bad.json")), Err(Error::Parse { .. })));
    // Valid JSON, but with a transition row more than there are states.
    let model = random_model(&mut r, 2, 1, 2);
    model.save(dir.path().join("m.json")).unwrap();
    let text = std::fs::read_to_string(dir.path().join("m.json")).unwrap();
    let tampered = text.replacen("\"transitions\":[[", "\"transitions\":[[0.25,0.25],[", 1);
    std::fs::write(dir.path().join("t.json"), &tampered).unwrap();
    assert!(LtrHmm::load(dir.path().join("t.json")).is_err());
}
