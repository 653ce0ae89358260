#![no_main]

use libfuzzer_sys::fuzz_target;
use perclab::env::McEstimate;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(e) = McEstimate::from_json(text) {
        assert!((0.0..=1.0).contains(&e.estimate));
        assert_eq!(McEstimate::from_json(&e.to_json()).unwrap(), e);
    }
});
