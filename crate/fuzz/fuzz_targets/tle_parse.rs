#![no_main]

use libfuzzer_sys::fuzz_target;
use satqkd::orbit::parse_tle;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(tle) = parse_tle(text) {
        assert!((0.0..1.0).contains(&tle.eccentricity));
        assert!(tle.mean_motion > 0.0);
    }
});
