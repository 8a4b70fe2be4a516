#![no_main]

use libfuzzer_sys::fuzz_target;
use slhkit_cli::angle::{format_complex, parse_complex};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(z) = parse_complex(text) else { return };
    let back = parse_complex(&format_complex(z)).expect("display parses");
    assert_eq!((back.re.to_bits(), back.im.to_bits()), (z.re.to_bits(), z.im.to_bits()));
});
