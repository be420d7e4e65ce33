#![no_main]
use libfuzzer_sys::fuzz_target;
use msgames_sentences::parse;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(f) = parse(text) {
        // printing and reparsing is the identity
        let again = parse(&f.to_string()).expect("printed sentence parses");
        assert_eq!(again, f);
    }
});
