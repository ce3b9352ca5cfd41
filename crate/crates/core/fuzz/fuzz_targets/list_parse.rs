#![no_main]

use eisenstein_template::cli::{parse_complex_list, parse_int_list, parse_symbol_map};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let _ = parse_complex_list(s);
    let _ = parse_int_list(s);
    let _ = parse_symbol_map(s);
});
