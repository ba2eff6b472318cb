#![no_main]

use hinv::Hypertuple;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(u) = s.parse::<Hypertuple>() {
        assert_eq!(u.to_string().parse::<Hypertuple>().unwrap(), u);
    }
});
