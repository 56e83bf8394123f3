#![no_main]

use housecast_core::models::parse_override;
use housecast_core::ForecastInputs;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let mut inputs = ForecastInputs {
        year: 2018,
        president_party: housecast_core::Party::R,
        rep_seats_held: 241,
        generic_margin_sep: Some(-8.0),
        generic_dem_share_early: Some(4.0),
        rdi_growth_h1: Some(1.3),
        approval_june: Some(42.0),
        disapproval_june: Some(54.0),
        expert_seat_differential: Some(-58),
        use_disapproval: false,
        in_trouble_definition: Default::default(),
        expert_weight: 0.5,
    };
    for line in text.lines() {
        if let Ok((key, value)) = parse_override(line) {
            let before = inputs.clone();
            if inputs.set(key, value).is_err() {
                assert_eq!(inputs, before);
            }
        }
    }
    assert!(inputs.validate().is_ok());
});
