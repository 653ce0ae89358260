#![no_main]

use libfuzzer_sys::fuzz_target;
use perclab::env::ClockArray;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(a) = ClockArray::from_csv(text) {
        // whatever parses must survive a round trip
        let b = ClockArray::from_csv(&a.to_csv()).expect("round trip");
        assert_eq!(a, b);
    }
});
