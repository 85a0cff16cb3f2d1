#![no_main]

use libfuzzer_sys::fuzz_target;
use satqkd_cli::run::{key_matrix_from_samples, parse_linkbudget};
use satqkd_cli::Scenario;
use std::path::Path;
use std::sync::OnceLock;

const SCENARIO: &str = r#"
span = ["2016-09-19T00:00:00Z", "2016-09-19T01:00:00Z"]

[satellite]
tle = """
1 41731U 00000A   16263.00000000  .00000000  00000-0  00000-0 0  9994
2 41731  97.3700   5.0000 0012000  90.0000   0.0000 15.21936487    07
"""

[[stations]]
name = "Alpha"
latitude = 40.0
longitude = 116.0
altitude = 50.0

[[stations]]
name = "Beta"
latitude = 30.0
longitude = 104.0
altitude = 500.0
"#;

fn scenario() -> &'static Scenario {
    static SC: OnceLock<Scenario> = OnceLock::new();
    SC.get_or_init(|| Scenario::from_text(SCENARIO, Path::new("."), None).expect("fixture scenario"))
}

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(samples) = parse_linkbudget(scenario(), text) {
        let _ = key_matrix_from_samples(scenario(), &samples);
    }
});
