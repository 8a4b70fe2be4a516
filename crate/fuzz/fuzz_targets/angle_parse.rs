#![no_main]

use libfuzzer_sys::fuzz_target;
use slhkit_cli::angle::{parse_control, Angle};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(angle) = text.parse::<Angle>() {
        let back: Angle = angle.to_string().parse().expect("display parses");
        assert_eq!(back.radians().to_bits(), angle.radians().to_bits());
    }
    if let Ok(p) = parse_control(text) {
        assert_eq!(parse_control(&p.to_string()), Ok(p));
    }
});
