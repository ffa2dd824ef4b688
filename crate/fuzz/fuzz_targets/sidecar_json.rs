#![no_main]

use libfuzzer_sys::fuzz_target;
use snc::harness::parse_sidecar;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(side) = parse_sidecar(s) {
            assert!(!side.config.snr.points().is_empty());
        }
    }
});
