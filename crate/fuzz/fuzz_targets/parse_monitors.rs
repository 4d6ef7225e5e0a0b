#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(records) = apcsf_flow::parse_monitors(text) {
        let written = apcsf_flow::monitors_to_string(&records);
        let again = apcsf_flow::parse_monitors(&written).expect("written monitors parse");
        assert_eq!(again.len(), records.len());
    }
});
