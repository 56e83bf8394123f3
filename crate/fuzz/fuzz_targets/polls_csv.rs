#![no_main]

use chrono::NaiveDate;
use housecast_core::ingest::parse_polls;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let election = NaiveDate::from_ymd_opt(2018, 11, 6).unwrap();
    if let Ok(polls) = parse_polls(data, election) {
        for p in &polls {
            assert!(p.end_date >= p.start_date);
            assert!(p.dem_pct.is_finite() && p.rep_pct.is_finite());
        }
    }
});
