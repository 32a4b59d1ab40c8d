use std::collections::BTreeSet;
use std::io::Write;

use qadic_core::cantor::DigitCantorSet;
use qadic_core::certificates::{
    empirical_threshold, exclusion_bound, congruence_witness, make_certificate, verify_certificate,
    ExclusionCertificate,
};
use qadic_core::enumeration::{
    dp_intersection, dp_order_key, euclid_witness, exceptional_geometric, exceptional_lattice,
    geometric_rows, lattice_rows, mult_dependence, Row,
};
use qadic_core::expansion::{expand, preperiod_len};
use qadic_core::orders::{coset_decomposition, mult_order, order_stabilization, product_stabilization};
use qadic_core::rational_core::{nat, parse_natural, split_coprime_part};
use qadic_core::{Error, Natural, Rational};
use serde::Serialize;
use serde_json::{json, Value};

use crate::{Command, Failure, Format};

// Longest expansion `expand` will print.
const MAX_EXPANSION_DIGITS: u64 = 10_000_000;

fn rational(s: &str) -> Result<Rational, Failure> {
    Ok(s.trim().parse::<Rational>()?)
}

fn natural(s: &str) -> Result<Natural, Failure> {
    Ok(parse_natural(s.trim())?)
}

fn list<T>(s: &str, parse: impl Fn(&str) -> Result<T, Failure>) -> Result<Vec<T>, Failure> {
    let items: Vec<&str> = s.split(',').map(str::trim).collect();
    if items.iter().any(|i| i.is_empty()) {
        return Err(Failure::Precondition(format!("malformed list {s:?}")));
    }
    items.into_iter().map(parse).collect()
}

fn small(s: &str) -> Result<u64, Failure> {
    s.parse()
        .map_err(|_| Failure::Precondition(format!("not a machine-sized natural: {s:?}")))
}

fn cantor(q: u32, digits: &str) -> Result<DigitCantorSet, Failure> {
    let digits = list(digits, |d| {
        d.parse::<u32>()
            .map_err(|_| Failure::Precondition(format!("digit {d:?} is not a natural")))
    })?;
    Ok(DigitCantorSet::new(q, digits)?)
}

/// Natural as a JSON number when it fits in 64 bits, else as a string.
fn number(n: &Natural) -> Value {
    match u64::try_from(n) {
        Ok(v) => json!(v),
        Err(_) => json!(n.to_string()),
    }
}

fn emit<T: Serialize + ?Sized>(out: &mut dyn Write, doc: &T) -> Result<(), Failure> {
    serde_json::to_writer(&mut *out, doc)?;
    writeln!(out)?;
    Ok(())
}

fn digits_cell(set: &Option<BTreeSet<u32>>) -> String {
    set.as_ref()
        .map(|s| s.iter().map(u32::to_string).collect::<Vec<_>>().join(" "))
        .unwrap_or_default()
}

fn stream_rows(
    out: &mut dyn Write,
    dims: usize,
    rows: impl Iterator<Item = qadic_core::Result<Row>>,
) -> Result<(), Failure> {
    let mut writer = csv::Writer::from_writer(out);
    let mut header: Vec<String> = if dims == 1 {
        vec!["k".into()]
    } else {
        (1..=dims).map(|i| format!("k{i}")).collect()
    };
    header.extend(["value", "member", "digit_set"].map(String::from));
    writer.write_record(&header)?;
    for row in rows {
        let row = row?;
        let mut record: Vec<String> = row.index.iter().map(u64::to_string).collect();
        record.push(row.value.to_string());
        record.push(row.member.to_string());
        record.push(digits_cell(&row.digit_set));
        writer.write_record(&record)?;
        writer.flush()?;
    }
    writer.flush()?;
    Ok(())
}

pub fn execute(cmd: &Command, format: Format, out: &mut dyn Write) -> Result<(), Failure> {
    let csv_ok = matches!(cmd, Command::Enumerate { .. } | Command::Dp { .. });
    if format == Format::Csv && !csv_ok {
        return Err(Failure::Precondition(
            "csv output is only available for enumerate and dp".into(),
        ));
    }
    match cmd {
        Command::Expand { x, q } => {
            let x = rational(x)?;
            if !x.in_unit_interval() {
                return Err(Error::domain(format!("{x} is outside [0, 1)")).into());
            }
            let qn = nat(*q as u64);
            let v = preperiod_len(&x, *q)?;
            let (t_hat, _, _) = split_coprime_part(x.den(), &qn)?;
            let period = mult_order(&qn, &t_hat)?;
            let total = period + v;
            if total > nat(MAX_EXPANSION_DIGITS) {
                return Err(Error::domain(format!(
                    "expansion has {total} digits, more than the {MAX_EXPANSION_DIGITS} this command prints"
                ))
                .into());
            }
            emit(out, &expand(&x, *q)?)
        }
        Command::Member { x, q, digits } => {
            let k = cantor(*q, digits)?;
            let x = rational(x)?;
            let member = k.contains(&x)?;
            emit(out, &json!({ "x": x, "K": k, "member": member }))
        }
        Command::Gap { q, digits } => {
            let k = cantor(*q, digits)?;
            let gap = k.largest_gap();
            emit(out, &json!({ "K": k, "length": gap.length(), "gap": gap }))
        }
        Command::Order { a, m } => {
            let order = mult_order(&natural(a)?, &natural(m)?)?;
            emit(out, &json!({ "order": number(&order) }))
        }
        Command::Stabilize { primes, q } => {
            let primes = list(primes, natural)?;
            let q = natural(q)?;
            if primes.len() == 1 {
                emit(out, &order_stabilization(&primes[0], &q)?)
            } else {
                emit(out, &product_stabilization(&primes, &q)?)
            }
        }
        Command::Cosets { m, q } => emit(out, &coset_decomposition(*m, *q)?),
        Command::Witness { t, primes, h, k, q } => {
            let w = congruence_witness(&natural(t)?, &list(primes, natural)?, *h, &list(k, small)?, &natural(q)?)?;
            let mut doc = serde_json::to_value(&w)?;
            doc["valid"] = json!(w.check());
            emit(out, &doc)
        }
        Command::Bound {
            alpha,
            q,
            digits,
            primes,
            diagnostics,
        } => {
            let bound = exclusion_bound(&rational(alpha)?, &cantor(*q, digits)?, &list(primes, natural)?)?;
            let mut doc = serde_json::to_value(&bound)?;
            if *diagnostics {
                doc["empirical_threshold"] = json!(empirical_threshold(&bound)?);
            }
            emit(out, &doc)
        }
        Command::Certify {
            alpha,
            q,
            digits,
            primes,
            k,
        } => {
            let cert = make_certificate(
                &rational(alpha)?,
                &cantor(*q, digits)?,
                &list(primes, natural)?,
                &list(k, small)?,
            )?;
            emit(out, &cert)
        }
        Command::Verify { cert } => {
            let text = std::fs::read_to_string(cert)
                .map_err(|e| Failure::Precondition(format!("cannot read {}: {e}", cert.display())))?;
            let valid = serde_json::from_str::<ExclusionCertificate>(&text)
                .map(|c| verify_certificate(&c))
                .unwrap_or(false);
            emit(out, &json!({ "valid": valid }))
        }
        Command::Enumerate {
            alpha,
            ratio,
            primes,
            q,
            digits,
            k_max,
            side,
        } => {
            let alpha = rational(alpha)?;
            let k = cantor(*q, digits)?;
            match (ratio, primes) {
                (Some(ratio), None) => {
                    let ratio = rational(ratio)?;
                    let k_max = k_max.ok_or_else(|| Failure::Precondition("--ratio needs --k-max".into()))?;
                    if format == Format::Csv {
                        stream_rows(out, 1, geometric_rows(&alpha, &ratio, &k, k_max)?)
                    } else {
                        emit(out, &exceptional_geometric(&alpha, &ratio, &k, k_max)?)
                    }
                }
                (None, Some(primes)) => {
                    let primes = list(primes, natural)?;
                    let side = side.ok_or_else(|| Failure::Precondition("--primes needs --box".into()))?;
                    if format == Format::Csv {
                        stream_rows(out, primes.len(), lattice_rows(&alpha, &primes, &k, side)?)
                    } else {
                        emit(out, &exceptional_lattice(&alpha, &primes, &k, side)?)
                    }
                }
                _ => Err(Failure::Precondition(
                    "enumerate needs exactly one of --ratio or --primes".into(),
                )),
            }
        }
        Command::Dp { p, q, digits, exp_max } => {
            let p = natural(p)?;
            let k = cantor(*q, digits)?;
            let members = dp_intersection(&p, &k, *exp_max)?;
            if format == Format::Csv {
                let mut writer = csv::Writer::from_writer(out);
                writer.write_record(["exponent", "value"])?;
                for x in &members {
                    let (e, _) = dp_order_key(x, &p);
                    writer.write_record([e.to_string(), x.to_string()])?;
                }
                writer.flush()?;
                Ok(())
            } else {
                emit(
                    out,
                    &json!({ "p": p.to_string(), "K": k, "exp_max": exp_max, "members": members }),
                )
            }
        }
        Command::Euclid { q, k } => emit(out, &euclid_witness(*q, *k)?),
        Command::Deps { p, q } => {
            let (p, q) = (natural(p)?, natural(q)?);
            let dep = mult_dependence(&p, &q)?.map(|(a, b)| json!({ "a": a, "b": b }));
            emit(
                out,
                &json!({ "p": p.to_string(), "q": q.to_string(), "dependence": dep }),
            )
        }
    }
}
