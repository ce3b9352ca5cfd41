#![no_main]

use eisenstein_template::roots::{CartanType, RootSystem};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(t) = s.parse::<CartanType>() {
        let back: CartanType = t.to_string().parse().expect("display round trip");
        assert_eq!(back, t);
        if t.rank() <= 8 {
            let rs = RootSystem::new(t);
            assert_eq!(rs.positive_roots().len(), t.positive_root_count());
        }
    }
});
