#![no_main]

use libfuzzer_sys::fuzz_target;
use satqkd_cli::Scenario;
use std::path::Path;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if satqkd_cli::config::parse_config(text).is_ok() {
        // Full resolution without touching the filesystem beyond a missing base.
        let _ = Scenario::from_text(text, Path::new("/nonexistent"), Some(0));
    }
});
