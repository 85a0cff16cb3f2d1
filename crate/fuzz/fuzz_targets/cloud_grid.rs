#![no_main]

use libfuzzer_sys::fuzz_target;
use satqkd::CloudGrid;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(grid) = CloudGrid::parse(text) {
        let again = CloudGrid::parse(&grid.to_text()).expect("written grid parses");
        assert_eq!(again.dims(), grid.dims());
    }
});
