#![no_main]

use libfuzzer_sys::fuzz_target;
use satqkd_cli::config::parse_station_file;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(stations) = parse_station_file(text) {
        for s in stations {
            assert!((-90.0..=90.0).contains(&s.latitude));
        }
    }
});
