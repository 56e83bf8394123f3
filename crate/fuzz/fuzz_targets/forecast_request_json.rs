#![no_main]

use housecast_core::forecast::resolve_inputs;
use housecast_core::{Dataset, ForecastRequest};
use libfuzzer_sys::fuzz_target;
use std::sync::OnceLock;

static DATASET: OnceLock<Dataset> = OnceLock::new();

fuzz_target!(|data: &[u8]| {
    let dataset = DATASET.get_or_init(|| {
        Dataset::load(concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/../crates/core/fixtures/us-house-2018"
        ))
        .unwrap()
    });
    if let Ok(request) = serde_json::from_slice::<ForecastRequest>(data) {
        let _ = request.model();
        if let Ok(inputs) = resolve_inputs(dataset, &request) {
            assert!(inputs.validate().is_ok());
        }
    }
});
