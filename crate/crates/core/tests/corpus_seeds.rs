//! Replays the checked-in fuzz corpus through the same entry points the fuzz
//! targets use, so the seeds keep working on a stable toolchain. Seeds named
//! `valid-*` must be accepted; the rest only have to fail cleanly.

use chrono::NaiveDate;
use housecast_core::forecast::resolve_inputs;
use housecast_core::ingest::{parse_districts, parse_elections, parse_polls, parse_ratings};
use housecast_core::models::parse_override;
use housecast_core::{Dataset, ForecastRequest, Manifest};
use std::path::{Path, PathBuf};

fn corpus(target: &str) -> Vec<(String, Vec<u8>)> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut seeds: Vec<_> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .collect();
    seeds.sort();
    assert!(!seeds.is_empty(), "no seeds in {}", dir.display());
    seeds
        .into_iter()
        .map(|p: PathBuf| {
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                std::fs::read(&p).unwrap(),
            )
        })
        .collect()
}

fn check<T, E: std::fmt::Debug>(name: &str, result: Result<T, E>) {
    if name.starts_with("valid-") {
        if let Err(e) = result {
            panic!("{name} was rejected: {e:?}");
        }
    }
}

#[test]
fn csv_seeds() {
    let election = NaiveDate::from_ymd_opt(2018, 11, 6).unwrap();
    for (name, bytes) in corpus("polls_csv") {
        check(&name, parse_polls(bytes.as_slice(), election));
    }
    for (name, bytes) in corpus("elections_csv") {
        check(&name, parse_elections(bytes.as_slice()));
    }
    for (name, bytes) in corpus("districts_csv") {
        check(&name, parse_districts(bytes.as_slice()));
    }
    for (name, bytes) in corpus("ratings_csv") {
        check(&name, parse_ratings(bytes.as_slice()));
    }
}

#[test]
fn manifest_seeds() {
    for (name, bytes) in corpus("manifest_toml") {
        let text = String::from_utf8_lossy(&bytes);
        check(&name, Manifest::from_toml_str(&text));
    }
}

#[test]
fn request_seeds() {
    let dataset =
        Dataset::load(Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/us-house-2018"))
            .unwrap();
    for (name, bytes) in corpus("forecast_request_json") {
        let parsed = serde_json::from_slice::<ForecastRequest>(&bytes).map_err(|e| e.to_string());
        let resolved = parsed.and_then(|r| resolve_inputs(&dataset, &r).map_err(|e| e.to_string()));
        check(&name, resolved);
    }
}

#[test]
fn override_seeds() {
    for (name, bytes) in corpus("override_kv") {
        let text = String::from_utf8_lossy(&bytes);
        for line in text.lines() {
            check(&name, parse_override(line));
        }
    }
}
