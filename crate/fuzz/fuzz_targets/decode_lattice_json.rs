#![no_main]

use hinv::Hyperlattice;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    // small bound so a hostile characteristic cannot blow up memory
    if let Ok(l) = Hyperlattice::from_json_with_bound(s, 4_096) {
        assert!(l.len() <= 4_096);
    }
});
