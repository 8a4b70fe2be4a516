#![no_main]

use libfuzzer_sys::fuzz_target;
use slhkit_cli::format::{parse_angle_list, parse_angle_matrix, parse_int_list, parse_int_matrix};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(ints) = parse_int_list(text) {
        let joined = ints.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
        assert_eq!(parse_int_list(&joined).expect("joined list parses"), ints);
    }
    let _ = parse_int_matrix(text);
    let _ = parse_angle_list(text);
    let _ = parse_angle_matrix(text);
});
