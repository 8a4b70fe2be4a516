#![no_main]

use libfuzzer_sys::fuzz_target;
use slhkit_cli::schedule::PhaseSchedule;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(schedule) = PhaseSchedule::parse(text) else { return };
    let printed = schedule.to_string();
    assert_eq!(PhaseSchedule::parse(&printed).expect("canonical form parses"), schedule);
});
