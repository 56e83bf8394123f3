#![no_main]

use housecast_core::ingest::parse_ratings;
use housecast_core::models::seats_in_play_differential;
use housecast_core::InTroubleDefinition;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(rows) = parse_ratings(data) {
        let lean = seats_in_play_differential(&rows, InTroubleDefinition::LeanOrWorse);
        let toss = seats_in_play_differential(&rows, InTroubleDefinition::TossupOrWorse);
        assert!(lean.unsigned_abs() as usize <= rows.len());
        assert!(toss.unsigned_abs() as usize <= rows.len());
    }
});
