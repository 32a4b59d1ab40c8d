use qadic_wasm::{certificate_report, expand_report, scan_report};
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn expansion_with_membership() {
    let doc = parse(expand_report("1/4", 3, "0,2").unwrap());
    assert_eq!(doc["expansion"]["period"], serde_json::json!([0, 2]));
    assert_eq!(doc["member"], Value::Bool(true));
    assert_eq!(doc["gap"]["left"], "1/3");

    let doc = parse(expand_report("1/8", 3, "0,1").unwrap());
    assert_eq!(doc["expansion"]["period"], serde_json::json!([0, 1]));
    assert_eq!(doc["member"], Value::Bool(true));
}

#[test]
fn expansion_refuses_bad_or_huge_input() {
    assert!(expand_report("3/2", 3, "0,1").is_err());
    assert!(expand_report("1/2", 3, "0,1,2").is_err());
    assert!(expand_report("x", 3, "0,1").is_err());
    // ord_{2^40}(3) = 2^38 digits.
    assert!(expand_report("1/1099511627776", 3, "0,1").is_err());
}

#[test]
fn geometric_scan() {
    let doc = parse(scan_report("1", "1/2", 3, "0,1", 60).unwrap());
    let members: Vec<u64> = doc["members"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_u64().unwrap())
        .collect();
    assert!(members.contains(&1) && members.contains(&3) && !members.contains(&2));
    assert!(scan_report("1", "1/2", 3, "0,1", 10_000).is_err());
}

#[test]
fn certificate_verifies() {
    let doc = parse(certificate_report("1", 3, "0,2", "2", 12).unwrap());
    assert_eq!(doc["valid"], Value::Bool(true));
    assert_eq!(doc["member"], Value::Bool(false));
    assert_eq!(doc["certificate"]["value"], "1/4096");
    assert!(certificate_report("1", 3, "0,2", "3", 12).is_err());
    assert!(certificate_report("1", 3, "0,2", "2", 2).is_err());
}
