#![no_main]
use libfuzzer_sys::fuzz_target;
use msgames_cli::api::{parse_create, parse_move};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let _ = parse_create(text);
    let _ = parse_move(text);
});
