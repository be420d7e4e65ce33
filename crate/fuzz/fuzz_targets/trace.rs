#![no_main]
use libfuzzer_sys::fuzz_target;
use msgames_lab::Trace;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(t) = Trace::parse(text) {
        if t.replay().is_ok() {
            let again = Trace::parse(&t.render()).expect("rendered trace parses");
            assert_eq!(again, t);
        }
    }
});
