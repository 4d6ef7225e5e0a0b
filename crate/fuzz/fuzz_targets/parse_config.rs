#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(config) = apcsf_cli::ExperimentConfig::from_json(text) {
        // Validation may reject the config, but must not panic.
        let _ = config.validate();
        let back = apcsf_cli::ExperimentConfig::from_json(&config.to_json()).expect("serialized config parses");
        assert_eq!(back.to_json(), config.to_json());
    }
});
