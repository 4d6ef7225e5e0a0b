#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(support) = apcsf_support::parse_support(text) {
        let _ = support.minimum_width();
        let _ = support.project(apcsf_geometry::Vec2::new(1.0, 2.0));
    }
});
