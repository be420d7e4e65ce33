#![no_main]
use libfuzzer_sys::fuzz_target;
use msgames_ms::doc::{parse_board_spec, parse_structure_spec};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let _ = parse_structure_spec(text);
    let _ = parse_board_spec(text);
});
