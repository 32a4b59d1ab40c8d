//! Bounded scans for the finite exceptional sets: geometric progressions
//! `α·r^k`, lattices `α/∏pⱼ^{kⱼ}`, and points with terminating `p`-adic
//! expansion lying in `K(q, A)`.

use std::collections::BTreeSet;

use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cantor::DigitCantorSet;
use crate::certificates::{exclusion_bound, ExclusionBound};
use crate::error::{Error, Result};
use crate::expansion::{digit_set, expand, ExpansionQ};
use crate::orders::coset_decomposition;
use crate::rational_core::{factorize, gcd, nat, perfect_power, split_coprime_part, Natural, Rational};

#[cfg(feature = "parallel")]
fn par_map<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    items.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn par_map<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    F: Fn(T) -> U,
{
    items.into_iter().map(f).collect()
}

/// Indices found in `K`: plain indices for progressions, tuples for
/// lattices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Members {
    Indices(Vec<u64>),
    Tuples(Vec<Vec<u64>>),
}

impl Members {
    pub fn len(&self) -> usize {
        match self {
            Members::Indices(v) => v.len(),
            Members::Tuples(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains_index(&self, index: &[u64]) -> bool {
        match self {
            Members::Indices(v) => index.len() == 1 && v.binary_search(&index[0]).is_ok(),
            Members::Tuples(v) => v.binary_search_by(|t| t.as_slice().cmp(index)).is_ok(),
        }
    }
}

/// Result of a bounded scan. Every index up to `exhausted_bound` was tested;
/// `certified_tail`, when present, proves exclusion beyond its `k_alpha`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionalReport {
    pub alpha: Rational,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ratio: Option<Rational>,
    #[serde(default, skip_serializing_if = "Vec::is_empty", with = "crate::natstr::vec")]
    pub primes: Vec<Natural>,
    #[serde(rename = "K")]
    pub cantor: DigitCantorSet,
    pub members: Members,
    pub exhausted_bound: u64,
    pub certified_tail: Option<ExclusionBound>,
    pub finiteness_guaranteed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// One evaluated index, as streamed to CSV.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Row {
    pub index: Vec<u64>,
    pub value: Rational,
    pub member: bool,
    /// Digits of the canonical expansion; `None` when the value is not in
    /// `[0, 1)`.
    pub digit_set: Option<BTreeSet<u32>>,
}

fn member(cantor: &DigitCantorSet, x: &Rational) -> Result<bool> {
    if *x > Rational::one() {
        return Ok(false);
    }
    cantor.contains(x)
}

fn row(cantor: &DigitCantorSet, index: Vec<u64>, value: Rational) -> Result<Row> {
    let member = member(cantor, &value)?;
    let digit_set = if value.in_unit_interval() {
        Some(digit_set(&value, cantor.q())?)
    } else {
        None
    };
    Ok(Row {
        index,
        value,
        member,
        digit_set,
    })
}

const NOT_GUARANTEED: &str = "finiteness not guaranteed";

fn check_geometric(alpha: &Rational, ratio: &Rational) -> Result<()> {
    if alpha.is_zero() {
        return Err(Error::domain("alpha must be positive"));
    }
    if ratio.is_zero() || !ratio.in_unit_interval() {
        return Err(Error::domain(format!("ratio must lie in (0, 1), got {ratio}")));
    }
    Ok(())
}

/// `α·r^k` for `k = 1..=k_max`, evaluated lazily in order.
pub fn geometric_rows<'a>(
    alpha: &'a Rational,
    ratio: &'a Rational,
    cantor: &'a DigitCantorSet,
    k_max: u64,
) -> Result<impl Iterator<Item = Result<Row>> + 'a> {
    check_geometric(alpha, ratio)?;
    let mut value = alpha.clone();
    Ok((1..=k_max).map(move |k| {
        value = &value * ratio;
        row(cantor, vec![k], value.clone())
    }))
}

/// `{k ≤ k_max : α·r^k ∈ K}`, with a certified tail when `r = 1/t` and `t`
/// is coprime to `q`. Runs whose denominator has no prime outside `q` are
/// flagged, since the set may then be infinite.
pub fn exceptional_geometric(
    alpha: &Rational,
    ratio: &Rational,
    cantor: &DigitCantorSet,
    k_max: u64,
) -> Result<ExceptionalReport> {
    check_geometric(alpha, ratio)?;
    let q = nat(cantor.q() as u64);
    let hits = par_map((1..=k_max).collect(), |k| -> Result<Option<u64>> {
        let x = alpha * &ratio.pow(k as u32);
        Ok(member(cantor, &x)?.then_some(k))
    });
    let mut members = Vec::new();
    for hit in hits {
        if let Some(k) = hit? {
            members.push(k);
        }
    }
    let (t_hat, _, _) = split_coprime_part(ratio.den(), &q)?;
    let finiteness_guaranteed = !t_hat.is_one();
    let certified_tail = if ratio.num().is_one() && gcd(ratio.den(), &q).is_one() {
        Some(exclusion_bound(alpha, cantor, &[ratio.den().clone()])?)
    } else {
        None
    };
    Ok(ExceptionalReport {
        alpha: alpha.clone(),
        ratio: Some(ratio.clone()),
        primes: Vec::new(),
        cantor: cantor.clone(),
        members: Members::Indices(members),
        exhausted_bound: k_max,
        certified_tail,
        finiteness_guaranteed,
        note: (!finiteness_guaranteed).then(|| NOT_GUARANTEED.to_string()),
    })
}

fn check_lattice(alpha: &Rational, primes: &[Natural]) -> Result<()> {
    if alpha.is_zero() {
        return Err(Error::domain("alpha must be positive"));
    }
    if primes.is_empty() {
        return Err(Error::domain("need at least one p"));
    }
    if let Some(p) = primes.iter().find(|p| **p < nat(2)) {
        return Err(Error::domain(format!("every p must be ≥ 2, got {p}")));
    }
    let distinct: BTreeSet<&Natural> = primes.iter().collect();
    if distinct.len() != primes.len() {
        return Err(Error::domain("the p's must be distinct"));
    }
    Ok(())
}

fn lattice_points(dim: usize, side: u64) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..=side).map(move |k| {
                    let mut next = prefix.clone();
                    next.push(k);
                    next
                })
            })
            .collect();
    }
    out
}

fn lattice_value(alpha: &Rational, primes: &[Natural], ks: &[u64]) -> Result<Rational> {
    let den = primes
        .iter()
        .zip(ks)
        .fold(Natural::one(), |acc, (p, &k)| acc * p.pow(k as u32));
    alpha.divide_by(&den)
}

/// `α/∏pⱼ^{kⱼ}` over `[0, side]^ℓ` in lexicographic order.
pub fn lattice_rows<'a>(
    alpha: &'a Rational,
    primes: &'a [Natural],
    cantor: &'a DigitCantorSet,
    side: u64,
) -> Result<impl Iterator<Item = Result<Row>> + 'a> {
    check_lattice(alpha, primes)?;
    Ok(lattice_points(primes.len(), side)
        .into_iter()
        .map(move |ks| row(cantor, ks.clone(), lattice_value(alpha, primes, &ks)?)))
}

/// All tuples in `[0, side]^ℓ` with `α/∏pⱼ^{kⱼ} ∈ K`, in lexicographic
/// order. When every `pⱼ` is coprime to `q` (and to the others) the report
/// carries the bound excluding `[k_alpha, ∞)^ℓ`.
pub fn exceptional_lattice(
    alpha: &Rational,
    primes: &[Natural],
    cantor: &DigitCantorSet,
    side: u64,
) -> Result<ExceptionalReport> {
    check_lattice(alpha, primes)?;
    let q = nat(cantor.q() as u64);
    let hits = par_map(lattice_points(primes.len(), side), |ks| -> Result<Option<Vec<u64>>> {
        let x = lattice_value(alpha, primes, &ks)?;
        Ok(member(cantor, &x)?.then_some(ks))
    });
    let mut members = Vec::new();
    for hit in hits {
        if let Some(ks) = hit? {
            members.push(ks);
        }
    }
    let mut finiteness_guaranteed = true;
    for p in primes {
        finiteness_guaranteed &= !split_coprime_part(p, &q)?.0.is_one();
    }
    let pairwise_coprime = primes
        .iter()
        .enumerate()
        .all(|(i, p)| primes[i + 1..].iter().all(|o| gcd(p, o).is_one()));
    let all_coprime_to_q = primes.iter().all(|p| gcd(p, &q).is_one());
    let certified_tail = if pairwise_coprime && all_coprime_to_q {
        Some(exclusion_bound(alpha, cantor, primes)?)
    } else {
        None
    };
    Ok(ExceptionalReport {
        alpha: alpha.clone(),
        ratio: None,
        primes: primes.to_vec(),
        cantor: cantor.clone(),
        members: Members::Tuples(members),
        exhausted_bound: side,
        certified_tail,
        finiteness_guaranteed,
        note: (!finiteness_guaranteed).then(|| NOT_GUARANTEED.to_string()),
    })
}

// Smallest e with den | p^e.
fn p_exponent(den: &Natural, p: &Natural) -> Option<u64> {
    let mut e = 0;
    let mut power = Natural::one();
    while !(&power % den).is_zero() {
        if e > den.bits() {
            return None;
        }
        power *= p;
        e += 1;
    }
    Some(e)
}

/// Sort key for points of `D_p`: the smallest `e` with `x·p^e` integral,
/// then the value.
pub fn dp_order_key(x: &Rational, p: &Natural) -> (u64, Rational) {
    (p_exponent(x.den(), p).unwrap_or(u64::MAX), x.clone())
}

/// Points of `D_p ∩ K` whose denominator divides `p^{exp_max}`.
///
/// Membership is constant along each orbit `a ↦ q·a mod d` of numerators
/// for a fixed reduced denominator `d`, so only one numerator per orbit is
/// tested; member orbits are then listed in full. `0` is included exactly
/// when `0 ∈ A`; `1` is never in `D_p`.
pub fn dp_intersection(p: &Natural, cantor: &DigitCantorSet, exp_max: u64) -> Result<Vec<Rational>> {
    let q = nat(cantor.q() as u64);
    if *p < nat(2) {
        return Err(Error::domain("p must be ≥ 2"));
    }
    let shared = gcd(p, &q);
    if !shared.is_one() {
        return Err(Error::NotCoprime {
            lhs: p.clone(),
            rhs: q,
            shared,
        });
    }
    let limit = p.pow(exp_max as u32);
    let limit_u64 = limit
        .to_u64()
        .filter(|&l| l <= 1 << 32)
        .ok_or_else(|| Error::domain(format!("p^exp_max = {limit} is too large to scan")))?;

    let mut denominators = vec![1u64];
    for (prime, e) in factorize(&limit)?.factors() {
        let prime = prime.to_u64().expect("divides a u64");
        denominators = denominators
            .into_iter()
            .flat_map(|d| (0..=*e).map(move |i| d * prime.pow(i)))
            .collect();
    }
    denominators.retain(|&d| d > 1);
    debug_assert!(denominators.iter().all(|d| limit_u64 % d == 0));

    let q_u64 = cantor.q() as u64;
    let per_den = par_map(denominators, |d| -> Result<Vec<Rational>> {
        let cosets = coset_decomposition(d, q_u64)?;
        let mut found = Vec::new();
        for &a in &cosets.representatives {
            if cantor.contains(&Rational::new(a, d)?)? {
                for b in cosets.orbit(a) {
                    found.push(Rational::new(b, d)?);
                }
            }
        }
        Ok(found)
    });
    let mut out = Vec::new();
    if cantor.allows(0) {
        out.push(Rational::zero());
    }
    for found in per_den {
        out.extend(found?);
    }
    out.sort_by_cached_key(|x| dp_order_key(x, p));
    Ok(out)
}

/// Least `k* ≤ k_max` such that the expansion of `α·r^k` uses every digit
/// for all `k ∈ [k*, k_max]`. Values `≥ 1` count as incomplete.
pub fn all_digits_onset(alpha: &Rational, ratio: &Rational, q: u32, k_max: u64) -> Result<Option<u64>> {
    check_geometric(alpha, ratio)?;
    if q < 3 {
        return Err(Error::domain(format!("digit onset needs q ≥ 3, got {q}")));
    }
    let full = par_map((1..=k_max).collect(), |k| -> Result<bool> {
        let x = alpha * &ratio.pow(k as u32);
        Ok(x.in_unit_interval() && digit_set(&x, q)?.len() == q as usize)
    });
    let mut onset = None;
    for (i, is_full) in full.into_iter().enumerate().rev() {
        if !is_full? {
            break;
        }
        onset = Some(i as u64 + 1);
    }
    Ok(onset)
}

/// `x_k = q^k/(q^{k+1} − 1)` and its expansion, which should be one `1`
/// followed by `k` zeros, repeating.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EuclidWitness {
    pub x: Rational,
    pub expansion: ExpansionQ,
    pub pattern_holds: bool,
    /// Whether `x ∈ K(q, {0, 1})`.
    pub member: bool,
}

pub fn euclid_witness(q: u32, k: u64) -> Result<EuclidWitness> {
    if q < 3 {
        return Err(Error::domain(format!("needs q ≥ 3, got {q}")));
    }
    if k == 0 {
        return Err(Error::domain("needs k ≥ 1"));
    }
    let qn = nat(q as u64);
    let x = Rational::new(qn.pow(k as u32), qn.pow(k as u32 + 1) - 1u32)?;
    let expansion = expand(&x, q)?;
    let mut pattern = vec![0; k as usize + 1];
    pattern[0] = 1;
    let pattern_holds = expansion.preperiod.is_empty() && expansion.period == pattern;
    let member = DigitCantorSet::new(q, [0, 1])?.contains(&x)?;
    Ok(EuclidWitness {
        x,
        expansion,
        pattern_holds,
        member,
    })
}

/// Minimal `(a, b)` with `p^a = q^b`, or `None` when `p` and `q` are
/// multiplicatively independent.
pub fn mult_dependence(p: &Natural, q: &Natural) -> Result<Option<(u64, u64)>> {
    if *p < nat(2) || *q < nat(2) {
        return Err(Error::domain("p and q must be ≥ 2"));
    }
    let (base_p, e_p) = perfect_power(p);
    let (base_q, e_q) = perfect_power(q);
    if base_p != base_q {
        return Ok(None);
    }
    let g = num_integer::gcd(e_p, e_q);
    Ok(Some(((e_q / g) as u64, (e_p / g) as u64)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(a: u64, b: u64) -> Rational {
        Rational::new(a, b).unwrap()
    }

    fn k(q: u32, digits: &[u32]) -> DigitCantorSet {
        DigitCantorSet::new(q, digits.iter().copied()).unwrap()
    }

    #[test]
    fn halving_in_base_three() {
        let rep = exceptional_geometric(&Rational::one(), &r(1, 2), &k(3, &[0, 1]), 200).unwrap();
        let Members::Indices(m) = &rep.members else { panic!() };
        assert!(m.contains(&1) && m.contains(&3) && !m.contains(&2));
        assert!(rep.finiteness_guaranteed);
        let tail = rep.certified_tail.unwrap();
        assert!(m.iter().all(|&i| i < tail.k_alpha));
    }

    #[test]
    fn thirds_violate_hypothesis() {
        let rep = exceptional_geometric(&Rational::one(), &r(1, 3), &k(3, &[0, 1]), 50).unwrap();
        assert_eq!(rep.members, Members::Indices((1..=50).collect()));
        assert!(!rep.finiteness_guaranteed);
        assert_eq!(rep.note.as_deref(), Some("finiteness not guaranteed"));
        assert!(rep.certified_tail.is_none());
    }

    #[test]
    fn geometric_rejects_bad_input() {
        assert!(DigitCantorSet::new(3, [0, 1, 2]).is_err());
        assert!(exceptional_geometric(&Rational::one(), &r(1, 1), &k(3, &[0, 1]), 5).is_err());
        assert!(exceptional_geometric(&Rational::zero(), &r(1, 2), &k(3, &[0, 1]), 5).is_err());
    }

    #[test]
    fn rows_match_report() {
        let cantor = k(3, &[0, 1]);
        let (alpha, ratio) = (Rational::one(), r(1, 2));
        let rows: Vec<Row> = geometric_rows(&alpha, &ratio, &cantor, 30)
            .unwrap()
            .collect::<Result<_>>()
            .unwrap();
        let rep = exceptional_geometric(&alpha, &ratio, &cantor, 30).unwrap();
        let from_rows: Vec<u64> = rows.iter().filter(|r| r.member).map(|r| r.index[0]).collect();
        assert_eq!(rep.members, Members::Indices(from_rows));
        assert_eq!(rows[0].digit_set, Some(BTreeSet::from([1])));
        assert_eq!(rows[1].digit_set, Some(BTreeSet::from([0, 2])));
    }

    #[test]
    fn lattice_consistent_with_geometric() {
        let cantor = k(3, &[0, 1]);
        let lat = exceptional_lattice(&Rational::one(), &[nat(2)], &cantor, 60).unwrap();
        let geo = exceptional_geometric(&Rational::one(), &r(1, 2), &cantor, 60).unwrap();
        let Members::Tuples(t) = &lat.members else { panic!() };
        let Members::Indices(i) = &geo.members else { panic!() };
        // k = 0 gives α = 1, which is not in K(3, {0, 1}).
        let flat: Vec<u64> = t.iter().map(|v| v[0]).collect();
        assert_eq!(&flat, i);
    }

    #[test]
    fn lattice_two_primes() {
        let cantor = k(3, &[0, 1]);
        let lat = exceptional_lattice(&Rational::one(), &[nat(2), nat(5)], &cantor, 8).unwrap();
        let Members::Tuples(t) = &lat.members else { panic!() };
        for a in 0..=8u64 {
            for b in 0..=8u64 {
                let x = r(1, 2u64.pow(a as u32) * 5u64.pow(b as u32));
                assert_eq!(t.contains(&vec![a, b]), cantor.contains(&x).unwrap());
            }
        }
        assert!(lat.certified_tail.is_some());
        assert!(exceptional_lattice(&Rational::zero(), &[nat(2)], &cantor, 3).is_err());
        assert!(exceptional_lattice(&Rational::one(), &[nat(2), nat(2)], &cantor, 3).is_err());
    }

    #[test]
    fn dp_examples() {
        let mid = dp_intersection(&nat(2), &k(3, &[0, 2]), 6).unwrap();
        assert!(mid.contains(&r(3, 4)));
        assert_eq!(mid[0], Rational::zero());
        let low = dp_intersection(&nat(2), &k(3, &[0, 1]), 6).unwrap();
        assert!(low.contains(&r(1, 2)) && low.contains(&r(1, 8)));
        assert!(dp_intersection(&nat(10), &k(3, &[0, 1]), 3).is_ok());
        assert!(matches!(
            dp_intersection(&nat(3), &k(3, &[0, 1]), 3),
            Err(Error::NotCoprime { .. })
        ));
    }

    #[test]
    fn dp_matches_plain_scan() {
        for (p, q, e) in [(2u64, 3u32, 6u64), (2, 5, 4), (5, 3, 3), (10, 7, 3)] {
            for digits in [vec![0, 1], vec![0, 2], vec![1, 2]] {
                let cantor = k(q, &digits);
                let mut plain = BTreeSet::new();
                let top = p.pow(e as u32);
                for a in 0..top {
                    let x = r(a, top);
                    if cantor.contains(&x).unwrap() {
                        plain.insert(x);
                    }
                }
                let pruned = dp_intersection(&nat(p), &cantor, e).unwrap();
                let as_set: BTreeSet<Rational> = pruned.iter().cloned().collect();
                assert_eq!(as_set.len(), pruned.len());
                assert_eq!(as_set, plain, "p={p} q={q} A={digits:?}");
            }
        }
    }

    #[test]
    fn dp_order() {
        let out = dp_intersection(&nat(2), &k(3, &[0, 2]), 6).unwrap();
        let keys: Vec<_> = out.iter().map(|x| dp_order_key(x, &nat(2))).collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn digit_onset() {
        let onset = all_digits_onset(&Rational::one(), &r(1, 2), 3, 100).unwrap().unwrap();
        for e in onset..=100 {
            let x = r(1, 1).divide_by(&nat(2).pow(e as u32)).unwrap();
            assert_eq!(digit_set(&x, 3).unwrap().len(), 3);
        }
        assert_eq!(all_digits_onset(&Rational::one(), &r(1, 3), 3, 30).unwrap(), None);
        assert!(all_digits_onset(&Rational::one(), &r(1, 3), 2, 30).is_err());
    }

    #[test]
    fn euclid_examples() {
        let w = euclid_witness(3, 1).unwrap();
        assert_eq!(w.x, r(3, 8));
        assert_eq!(w.expansion.period, vec![1, 0]);
        assert!(w.pattern_holds && w.member);
        let w = euclid_witness(3, 2).unwrap();
        assert_eq!((w.x.clone(), w.expansion.period.clone()), (r(9, 26), vec![1, 0, 0]));
        let w = euclid_witness(10, 1).unwrap();
        assert_eq!(w.x, r(10, 99));
        assert!(w.pattern_holds);
    }

    #[test]
    fn dependence_examples() {
        assert_eq!(mult_dependence(&nat(8), &nat(4)).unwrap(), Some((2, 3)));
        assert_eq!(mult_dependence(&nat(7), &nat(7)).unwrap(), Some((1, 1)));
        assert_eq!(mult_dependence(&nat(2), &nat(3)).unwrap(), None);
        assert_eq!(mult_dependence(&nat(9), &nat(3)).unwrap(), Some((1, 2)));
        assert_eq!(mult_dependence(&nat(6), &nat(36)).unwrap(), Some((2, 1)));
        assert_eq!(mult_dependence(&nat(12), &nat(18)).unwrap(), None);
        assert!(mult_dependence(&nat(1), &nat(3)).is_err());
    }

    #[test]
    fn report_json_shape() {
        let rep = exceptional_geometric(&Rational::one(), &r(1, 2), &k(3, &[0, 1]), 10).unwrap();
        let json = serde_json::to_string(&rep).unwrap();
        assert!(json.contains("\"members\":[1,3]"));
        assert!(json.contains("\"ratio\":\"1/2\""));
        let back: ExceptionalReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, rep);
    }
}
