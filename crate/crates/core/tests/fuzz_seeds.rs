use std::fs;
use std::path::PathBuf;

use eisenstein_template::cli::{parse_complex, parse_complex_list, parse_int_list, parse_symbol_map};
use eisenstein_template::glcoords::GLPartition;
use eisenstein_template::roots::CartanType;
use eisenstein_template::symalg::FormulaExpression;

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fuzz/corpus")
        .join(target);
    let mut out: Vec<(String, String)> = fs::read_dir(&dir)
        .unwrap()
        .map(|e| {
            let path = e.unwrap().path();
            let name = path.file_name().unwrap().to_string_lossy().into_owned();
            (name, fs::read_to_string(&path).unwrap())
        })
        .filter(|(name, _)| name.starts_with("seed_"))
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn formula_json_seeds_parse() {
    for (name, s) in seeds("formula_json") {
        let f = FormulaExpression::from_json(&s).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(FormulaExpression::from_json(&f.to_json()).unwrap(), f, "{name}");
    }
}

#[test]
fn complex_seeds_parse() {
    for (name, s) in seeds("complex_parse") {
        assert!(parse_complex(&s).is_ok(), "{name}: {s:?}");
    }
}

#[test]
fn list_seeds_parse() {
    for (name, s) in seeds("list_parse") {
        let any = parse_complex_list(&s).is_ok() || parse_int_list(&s).is_ok() || parse_symbol_map(&s).is_ok();
        assert!(any, "{name}: {s:?}");
    }
}

#[test]
fn cartan_type_seeds_parse() {
    for (name, s) in seeds("cartan_type_parse") {
        assert!(s.parse::<CartanType>().is_ok(), "{name}: {s:?}");
    }
}

#[test]
fn partition_seeds_parse() {
    for (name, s) in seeds("partition_parse") {
        assert!(s.parse::<GLPartition>().is_ok(), "{name}: {s:?}");
    }
}
