#![no_main]

use hinv::segre::reduce;
use hinv::{RawSegre, SegreChar};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(raw) = s.parse::<RawSegre>() {
        // reduction always yields a valid characteristic
        let reduced = reduce(&raw).segre;
        let again: SegreChar = reduced.to_string().parse().unwrap();
        assert_eq!(again, reduced);
    }
    if let Ok(a) = s.parse::<SegreChar>() {
        assert_eq!(a.to_string().parse::<SegreChar>().unwrap(), a);
    }
});
