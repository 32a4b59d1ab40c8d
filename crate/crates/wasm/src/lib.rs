//! Browser bindings for the demo page in `www/`. Every export takes exact
//! values as strings and returns a JSON document as a string.

use qadic_core::cantor::DigitCantorSet;
use qadic_core::certificates::{exclusion_bound, make_certificate, verify_certificate};
use qadic_core::enumeration::exceptional_geometric;
use qadic_core::expansion::{expand, preperiod_len};
use qadic_core::orders::mult_order;
use qadic_core::rational_core::{nat, parse_natural, split_coprime_part};
use qadic_core::{Error, Rational, Result};
use serde_json::json;
use wasm_bindgen::prelude::*;

// Keeps the page responsive; longer expansions are refused.
const MAX_DIGITS: u64 = 20_000;
const MAX_SCAN: u64 = 500;

fn digits(list: &str) -> Result<Vec<u32>> {
    list.split(',')
        .map(|d| {
            d.trim()
                .parse::<u32>()
                .map_err(|_| Error::Parse(format!("digit {d:?} is not a natural")))
        })
        .collect()
}

fn cantor(q: u32, list: &str) -> Result<DigitCantorSet> {
    DigitCantorSet::new(q, digits(list)?)
}

/// Expansion of `x` in base `q` together with membership in `K(q, A)`.
pub fn expand_report(x: &str, q: u32, list: &str) -> Result<String> {
    let x: Rational = x.trim().parse()?;
    let k = cantor(q, list)?;
    if !x.in_unit_interval() {
        return Err(Error::domain(format!("{x} is outside [0, 1)")));
    }
    let qn = nat(q as u64);
    let (t_hat, _, _) = split_coprime_part(x.den(), &qn)?;
    let length = mult_order(&qn, &t_hat)? + preperiod_len(&x, q)?;
    if length > nat(MAX_DIGITS) {
        return Err(Error::domain(format!("expansion has {length} digits; the demo stops at {MAX_DIGITS}")));
    }
    let expansion = expand(&x, q)?;
    let doc = json!({
        "x": x,
        "K": k,
        "expansion": expansion,
        "member": k.contains(&x)?,
        "gap": k.largest_gap(),
    });
    Ok(doc.to_string())
}

/// Which `k ≤ k_max` put `α·r^k` in `K(q, A)`.
pub fn scan_report(alpha: &str, ratio: &str, q: u32, list: &str, k_max: u64) -> Result<String> {
    if k_max > MAX_SCAN {
        return Err(Error::domain(format!("the demo scans at most {MAX_SCAN} terms")));
    }
    let report = exceptional_geometric(&alpha.trim().parse()?, &ratio.trim().parse()?, &cantor(q, list)?, k_max)?;
    serde_json::to_string(&report).map_err(|e| Error::Internal(e.to_string()))
}

/// Certificate that `α/p^k ∉ K(q, A)`, the bound it rests on, and the
/// verifier's verdict.
pub fn certificate_report(alpha: &str, q: u32, list: &str, p: &str, k: u64) -> Result<String> {
    let alpha: Rational = alpha.trim().parse()?;
    let k_set = cantor(q, list)?;
    let primes = [parse_natural(p.trim())?];
    let bound = exclusion_bound(&alpha, &k_set, &primes)?;
    let cert = make_certificate(&alpha, &k_set, &primes, &[k])?;
    let doc = json!({
        "k_alpha": bound.k_alpha,
        "certificate": cert,
        "valid": verify_certificate(&cert),
        "member": k_set.contains(&cert.value)?,
    });
    Ok(doc.to_string())
}

fn to_js(r: Result<String>) -> std::result::Result<String, JsError> {
    r.map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen]
pub fn expand_x(x: &str, q: u32, digits: &str) -> std::result::Result<String, JsError> {
    to_js(expand_report(x, q, digits))
}

#[wasm_bindgen]
pub fn scan_geometric(alpha: &str, ratio: &str, q: u32, digits: &str, k_max: u32) -> std::result::Result<String, JsError> {
    to_js(scan_report(alpha, ratio, q, digits, k_max as u64))
}

#[wasm_bindgen]
pub fn certify(alpha: &str, q: u32, digits: &str, p: &str, k: u32) -> std::result::Result<String, JsError> {
    to_js(certificate_report(alpha, q, digits, p, k as u64))
}
