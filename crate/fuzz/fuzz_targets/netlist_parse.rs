#![no_main]

use libfuzzer_sys::fuzz_target;
use slhkit_cli::netlist::Netlist;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(net) = Netlist::parse(text) else { return };
    let printed = net.to_string();
    let again = Netlist::parse(&printed).expect("canonical form parses");
    assert_eq!(again, net);
    assert_eq!(again.to_string(), printed);
    let _ = net.elaborate();
});
