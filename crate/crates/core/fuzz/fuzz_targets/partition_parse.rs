#![no_main]

use eisenstein_template::glcoords::{classical_parameters, is_zero_sum, GLPartition};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(p) = s.parse::<GLPartition>() {
        let back: GLPartition = p.to_string().parse().expect("display round trip");
        assert_eq!(back, p);
        if p.n() <= 12 {
            let params = classical_parameters(&p).expect("parameters for a valid partition");
            assert!(is_zero_sum(&params));
        }
    }
});
