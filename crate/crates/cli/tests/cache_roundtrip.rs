use std::fs;

use pseudopoints::local::{local_points, LocalCurveData};
use pseudopoints::BivariatePoly;
use pseudopoints_cli::cache::{load, store, LocalCache};

fn curve() -> BivariatePoly {
    "V^2 - U^3 - 1".parse().unwrap()
}

fn records(primes: &[u64]) -> Vec<LocalCurveData> {
    primes
        .iter()
        .map(|&p| local_points(&curve(), p).unwrap())
        .collect()
}

#[test]
fn store_then_load_is_identity() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cache.jsonl");
    let key = curve().to_string();

    store(&path, &key, &records(&[3])).unwrap();
    let (loaded, warnings) = load(&path, &key).unwrap();
    assert_eq!(loaded, records(&[3]));
    assert_eq!(warnings, 0);

    let all = records(&[2, 3, 5, 7, 11, 97]);
    store(&path, &key, &all).unwrap();
    assert_eq!(load(&path, &key).unwrap().0, all);
    assert!(load(&path, "U - V^2").unwrap().0.is_empty());
}

#[test]
fn degenerate_records_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cache.jsonl");
    let f: BivariatePoly = "3*V^2 - 3*U".parse().unwrap();
    let data = vec![local_points(&f, 3).unwrap(), local_points(&f, 5).unwrap()];
    assert!(data[0].is_degenerate());
    store(&path, &f.to_string(), &data).unwrap();
    assert_eq!(load(&path, &f.to_string()).unwrap().0, data);
}

#[test]
fn corrupt_middle_line_is_skipped_with_one_warning() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cache.jsonl");
    let key = curve().to_string();
    store(&path, &key, &records(&[3, 5, 7])).unwrap();

    let text = fs::read_to_string(&path).unwrap();
    let mut lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    lines[1] = "{\"curve\": \"V^2 - U^3 - 1\", \"p\": 5, garbage";
    fs::write(&path, lines.join("\n") + "\n").unwrap();

    let (loaded, warnings) = load(&path, &key).unwrap();
    assert_eq!(warnings, 1);
    assert_eq!(loaded, records(&[3, 7]));
}

#[test]
fn inconsistent_record_counts_as_corrupt() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cache.jsonl");
    let key = curve().to_string();
    store(&path, &key, &records(&[5])).unwrap();
    let text = fs::read_to_string(&path).unwrap();
    fs::write(
        &path,
        text.replace("\"point_count\":5", "\"point_count\":6"),
    )
    .unwrap();
    let (loaded, warnings) = load(&path, &key).unwrap();
    assert!(loaded.is_empty());
    assert_eq!(warnings, 1);
}

#[test]
fn empty_or_missing_file_is_an_empty_cache() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cache.jsonl");
    assert!(LocalCache::open(&path).unwrap().is_empty());
    fs::write(&path, "").unwrap();
    let (loaded, warnings) = load(&path, &curve().to_string()).unwrap();
    assert!(loaded.is_empty());
    assert_eq!(warnings, 0);
}
