#![no_main]

use eisenstein_template::symalg::FormulaExpression;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(f) = FormulaExpression::from_json(s) {
        let again = FormulaExpression::from_json(&f.to_json()).expect("re-encoded JSON parses");
        assert_eq!(again, f);
        let _ = f.to_text();
        let _ = f.to_latex();
    }
});
