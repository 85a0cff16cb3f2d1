#![no_main]

use libfuzzer_sys::fuzz_target;
use satqkd::orbit::Ephemeris;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(e) = Ephemeris::parse_csv(text) {
        let (a, b) = e.span();
        assert!(a <= b);
    }
});
