#![no_main]

use eisenstein_template::cli::parse_complex;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(z) = parse_complex(s) {
        assert!(z.re.is_finite() && z.im.is_finite());
    }
});
