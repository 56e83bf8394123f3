#![no_main]

use housecast_core::Manifest;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(m) = Manifest::from_toml_str(text) {
            assert!(m.simulation.validate().is_ok());
        }
    }
});
