#![no_main]

use libfuzzer_sys::fuzz_target;
use snc::harness::parse_cli;

// NUL-separated argv, program name prepended.
fuzz_target!(|data: &[u8]| {
    let s = String::from_utf8_lossy(data);
    let argv = std::iter::once("snc-sim").chain(s.split('\0'));
    if let Ok(cfg) = parse_cli(argv) {
        assert!(cfg.validate().is_ok());
        let _ = cfg.block_len();
    }
});
