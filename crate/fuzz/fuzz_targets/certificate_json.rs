#![no_main]
use libfuzzer_sys::fuzz_target;
use msgames_ms::{replay_certificate, SpoilerCertificate};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok((state, cert)) = SpoilerCertificate::from_json(text) {
        let _ = replay_certificate(&state, &cert);
    }
});
