#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(doc) = apcsf_geometry::parse_curve(text) {
        // Whatever parses must survive conversion and a round trip.
        let _ = doc.to_open();
        let _ = doc.to_closed();
        let again = apcsf_geometry::parse_curve(&doc.to_json()).expect("serialized document parses");
        assert_eq!(again.to_json(), doc.to_json());
    }
});
