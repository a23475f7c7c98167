mod common;

use borderfj::bench::bundled;
use borderfj::expr::parse;
use borderfj::fj::{reduce, ReduceOptions};
use borderfj::io::{emit_report, emit_report_string, load_str, REPORT_KEYS, REPORT_SCHEMA};
use borderfj::params::degeneracy_locus;
use borderfj::theorem::verify_theorem1;
use jsonschema::JSONSchema;
use serde_json::Value;

const BASE_KEYS: [&str; 7] = [
    "Constraints",
    "ExtendedMatrix",
    "ExtendedOneForm",
    "ExtendedSymplecticVariables",
    "InverseExtendedMatrix",
    "IterationCount",
    "MatrixStatus",
];

fn full_report(src: &str, seed: u64) -> Value {
    let opts = ReduceOptions::with_seed(seed);
    let r = reduce(&load_str(src).unwrap(), &opts).unwrap();
    let v = verify_theorem1(&r, 20, &opts.zero).unwrap();
    emit_report(&r, Some(&v), Some(&degeneracy_locus(&r)))
}

fn sources() -> Vec<String> {
    let mut s: Vec<String> = bundled().into_iter().map(|c| c.system_text.to_string()).collect();
    s.extend((0..15).map(common::fuzz_system));
    s
}

#[test]
fn keys_are_exact() {
    let doc = full_report(bundled()[0].system_text, 1);
    let keys: Vec<&str> = doc.as_object().unwrap().keys().map(String::as_str).collect();
    let mut expected = REPORT_KEYS.to_vec();
    expected.sort();
    let mut got = keys.clone();
    got.sort();
    assert_eq!(got, expected);
    for k in BASE_KEYS {
        assert!(keys.contains(&k), "missing {k}");
    }
}

#[test]
fn reports_validate_against_schema() {
    let schema: Value = serde_json::from_str(REPORT_SCHEMA).unwrap();
    let compiled = JSONSchema::compile(&schema).unwrap();
    for src in sources() {
        let doc = full_report(&src, 3);
        let result = compiled
            .validate(&doc)
            .map_err(|errors| errors.map(|e| e.to_string()).collect::<Vec<_>>());
        if let Err(msgs) = result {
            panic!("{msgs:?}");
        }
    }
    let mut bad = full_report(bundled()[0].system_text, 3);
    bad.as_object_mut().unwrap().insert("Extra".into(), Value::Null);
    assert!(!compiled.is_valid(&bad));
}

#[test]
fn expression_strings_reparse() {
    for case in bundled() {
        let r = reduce(&load_str(&case.system_text).unwrap(), &ReduceOptions::default()).unwrap();
        let doc = emit_report(&r, None, None);
        let rows = doc["ExtendedMatrix"].as_array().unwrap();
        for (i, row) in rows.iter().enumerate() {
            for (j, s) in row.as_array().unwrap().iter().enumerate() {
                let e = parse(s.as_str().unwrap()).unwrap();
                assert_eq!(&e, r.extended_matrix.get(i, j));
            }
        }
        if let Some(inv) = &r.inverse_extended_matrix {
            for (i, row) in doc["InverseExtendedMatrix"].as_array().unwrap().iter().enumerate() {
                for (j, s) in row.as_array().unwrap().iter().enumerate() {
                    assert_eq!(&parse(s.as_str().unwrap()).unwrap(), inv.get(i, j));
                }
            }
        }
        for (s, c) in doc["Constraints"].as_array().unwrap().iter().zip(&r.constraints) {
            assert_eq!(parse(s.as_str().unwrap()).unwrap(), c.expr);
        }
    }
}

#[test]
fn deterministic_under_fixed_seed() {
    for src in sources() {
        let opts = ReduceOptions::with_seed(42);
        let a = reduce(&load_str(&src).unwrap(), &opts).unwrap();
        let b = reduce(&load_str(&src).unwrap(), &opts).unwrap();
        assert_eq!(emit_report_string(&a, None, None), emit_report_string(&b, None, None));
        assert_eq!(full_report(&src, 42), full_report(&src, 42));
    }
}
