#![no_main]

use libfuzzer_sys::fuzz_target;
use snc::harness::{parse_antenna_list, MAX_ANTENNAS};

fuzz_target!(|data: &[u8]| {
    let s = String::from_utf8_lossy(data);
    if let Ok(list) = parse_antenna_list(&s) {
        assert!(list.iter().all(|&a| (1..=MAX_ANTENNAS).contains(&a)));
        let joined = list
            .iter()
            .map(|a| a.to_string())
            .collect::<Vec<_>>()
            .join(",");
        assert_eq!(parse_antenna_list(&joined).ok(), Some(list));
    }
});
