#![no_main]

use housecast_core::ingest::{parse_districts, write_csv};
use housecast_core::simulation::{district_baselines, SimulationConfig};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(rows) = parse_districts(data) {
        let mut out = Vec::new();
        write_csv(&mut out, &rows).unwrap();
        assert_eq!(parse_districts(out.as_slice()).unwrap(), rows);
        let _ = district_baselines(&rows, &SimulationConfig::default());
    }
});
