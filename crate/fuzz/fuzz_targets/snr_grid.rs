#![no_main]

use libfuzzer_sys::fuzz_target;
use snc::harness::{parse_snr_grid, MAX_GRID_POINTS};

fuzz_target!(|data: &[u8]| {
    let s = String::from_utf8_lossy(data);
    if let Ok(grid) = parse_snr_grid(&s) {
        let pts = grid.points();
        assert!(!pts.is_empty() && pts.len() <= MAX_GRID_POINTS);
        assert!(pts.iter().all(|p| p.is_finite()));
    }
});
