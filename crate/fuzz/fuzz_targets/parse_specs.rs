#![no_main]

use libfuzzer_sys::fuzz_target;

// The short command-line forms: `circle(R)`, `ellipse(A,B)`, `arc(R,BUMP)`, ...
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let _ = apcsf_cli::parse_support_spec(text);
    let _ = apcsf_cli::InitialSpec::parse(text);
});
