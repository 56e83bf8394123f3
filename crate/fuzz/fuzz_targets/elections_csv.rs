#![no_main]

use housecast_core::ingest::{parse_elections, write_csv};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(rows) = parse_elections(data) {
        let mut out = Vec::new();
        write_csv(&mut out, &rows).unwrap();
        assert_eq!(parse_elections(out.as_slice()).unwrap(), rows);
    }
});
