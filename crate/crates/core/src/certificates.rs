//! Congruence witnesses and non-membership certificates for rationals of the
//! form `α/∏pⱼ^{kⱼ}`.
//!
//! The pipeline: find `n` with `q^n ≡ 1 + b·t·∏pⱼ^{kⱼ}` modulo
//! `t·∏pⱼ^{kⱼ+h}`, so that multiplying by a suitable power `q^{i·n}` shifts
//! the target by roughly `m/p̂` modulo 1, landing it inside the largest gap of
//! `K(q, A)`. Landing in a gap proves the target is not in the set.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::cantor::{shift_residue, DigitCantorSet, Gap};
use crate::error::{Error, Result};
use crate::rational_core::{euler_phi, gcd, mod_pow, nat, Natural, Rational};

/// `q^{exponent_n} ≡ 1 + b·t·∏pⱼ^{kⱼ} (mod t·∏pⱼ^{kⱼ+h})`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceWitness {
    #[serde(with = "crate::natstr")]
    pub q: Natural,
    #[serde(with = "crate::natstr")]
    pub t: Natural,
    #[serde(with = "crate::natstr::vec")]
    pub primes: Vec<Natural>,
    pub h: u64,
    #[serde(with = "crate::natstr")]
    pub b: Natural,
    pub k0: u64,
    #[serde(with = "crate::natstr")]
    pub exponent_n: Natural,
    pub k_tuple: Vec<u64>,
}

impl CongruenceWitness {
    /// Re-checks the defining congruence with one modular exponentiation.
    pub fn check(&self) -> bool {
        if self.primes.len() != self.k_tuple.len() || self.t.is_zero() {
            return false;
        }
        let p_h = product(&self.primes).pow(self.h as u32);
        if self.b.is_zero() || self.b >= p_h || self.primes.iter().any(|p| (&self.b % p).is_zero()) {
            return false;
        }
        let scaled = &self.t * prime_power_product(&self.primes, &self.k_tuple);
        let modulus = &scaled * &p_h;
        match mod_pow(&self.q, &self.exponent_n, &modulus) {
            Ok(lhs) => lhs == (Natural::one() + &self.b * scaled) % modulus,
            Err(_) => false,
        }
    }
}

fn product(values: &[Natural]) -> Natural {
    values.iter().fold(Natural::one(), |acc, p| acc * p)
}

fn prime_power_product(primes: &[Natural], ks: &[u64]) -> Natural {
    primes
        .iter()
        .zip(ks)
        .fold(Natural::one(), |acc, (p, &k)| acc * p.pow(k as u32))
}

fn check_moduli(primes: &[Natural], q: &Natural) -> Result<()> {
    if primes.is_empty() {
        return Err(Error::domain("need at least one p"));
    }
    if *q < nat(2) {
        return Err(Error::domain("q must be ≥ 2"));
    }
    for (i, p) in primes.iter().enumerate() {
        if *p < nat(2) {
            return Err(Error::domain(format!("every p must be ≥ 2, got {p}")));
        }
        for other in &primes[i + 1..] {
            let shared = gcd(p, other);
            if !shared.is_one() {
                return Err(Error::NotCoprime {
                    lhs: p.clone(),
                    rhs: other.clone(),
                    shared,
                });
            }
        }
    }
    Ok(())
}

// The part of the construction that does not depend on the k-tuple:
// q^{n0} = 1 + a·t·∏pⱼ^{rⱼ} with pⱼ ∤ a, and b = a mod (∏p)^h.
struct WitnessBase {
    n0: Natural,
    r: Vec<u64>,
    b: Natural,
}

impl WitnessBase {
    fn k0(&self) -> u64 {
        self.r.iter().map(|r| r + 1).max().unwrap_or(1)
    }
}

fn witness_base(t: &Natural, primes: &[Natural], h: u64, q: &Natural) -> Result<WitnessBase> {
    check_moduli(primes, q)?;
    if t.is_zero() {
        return Err(Error::domain("t must be ≥ 1"));
    }
    if h == 0 {
        return Err(Error::domain("h must be ≥ 1"));
    }
    let big_p = product(primes);
    let shared = gcd(q, &(t * &big_p));
    if !shared.is_one() {
        return Err(Error::NotCoprime {
            lhs: q.clone(),
            rhs: t * &big_p,
            shared,
        });
    }
    let n0 = euler_phi(&(t * big_p.pow(h as u32 + 1)))?;
    let p_h = big_p.pow(h as u32);

    // Work modulo t·P^R instead of expanding q^{n0}; widen R until every
    // valuation and the residue of a modulo P^h are pinned down.
    let mut precision = 2 * (h + 1);
    loop {
        let modulus = t * big_p.pow(precision as u32);
        let excess = (mod_pow(q, &n0, &modulus)? + &modulus - 1u32) % &modulus;
        if excess.is_zero() {
            precision *= 2;
            continue;
        }
        // t divides both q^{n0} − 1 and the modulus.
        let mut a = excess / t;
        let mut r = Vec::with_capacity(primes.len());
        for p in primes {
            let mut e = 0;
            while (&a % p).is_zero() {
                a /= p;
                e += 1;
            }
            r.push(e);
        }
        if r.iter().any(|&e| e + h >= precision) {
            precision *= 2;
            continue;
        }
        if r.iter().any(|&e| e < h + 1) {
            return Err(Error::Internal(format!(
                "q^{n0} − 1 is not divisible by t·(∏p)^{}",
                h + 1
            )));
        }
        let b = a % &p_h;
        return Ok(WitnessBase { n0, r, b });
    }
}

/// Builds the exponent `n` for the tuple `k_tuple`: starting from
/// `n₀·∏pⱼ` at `kⱼ = rⱼ + 1`, every unit step in `kᵢ` multiplies `n` by `pᵢ`.
/// The congruence is checked before returning.
pub fn congruence_witness(
    t: &Natural,
    primes: &[Natural],
    h: u64,
    k_tuple: &[u64],
    q: &Natural,
) -> Result<CongruenceWitness> {
    if k_tuple.len() != primes.len() {
        return Err(Error::domain(format!(
            "{} exponents given for {} moduli",
            k_tuple.len(),
            primes.len()
        )));
    }
    let base = witness_base(t, primes, h, q)?;
    witness_from_base(&base, t, primes, h, k_tuple, q)
}

fn witness_from_base(
    base: &WitnessBase,
    t: &Natural,
    primes: &[Natural],
    h: u64,
    k_tuple: &[u64],
    q: &Natural,
) -> Result<CongruenceWitness> {
    let k0 = base.k0();
    if k_tuple.iter().any(|&k| k < k0) {
        return Err(Error::BelowThreshold { required: k0 });
    }
    let steps: Vec<u64> = k_tuple.iter().zip(&base.r).map(|(k, r)| k - r - 1).collect();
    let exponent_n = &base.n0 * product(primes) * prime_power_product(primes, &steps);
    let witness = CongruenceWitness {
        q: q.clone(),
        t: t.clone(),
        primes: primes.to_vec(),
        h,
        b: base.b.clone(),
        k0,
        exponent_n,
        k_tuple: k_tuple.to_vec(),
    };
    if !witness.check() {
        return Err(Error::Internal(format!(
            "constructed exponent fails its congruence for k = {k_tuple:?}"
        )));
    }
    Ok(witness)
}

/// Every quantity of the exclusion argument for `α/∏pⱼ^{kⱼ}`, with
/// `k_alpha` the threshold beyond which every such point misses `K`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExclusionBound {
    pub alpha: Rational,
    #[serde(rename = "K")]
    pub cantor: DigitCantorSet,
    #[serde(with = "crate::natstr::vec")]
    pub primes: Vec<Natural>,
    /// `α·q^r/(∏p)^r` in lowest terms; its numerator is coprime to every
    /// `pⱼ` and its denominator to `q`.
    pub alpha_hat: Rational,
    pub reduction_r: u64,
    pub h: u64,
    pub gap: Gap,
    #[serde(with = "crate::natstr")]
    pub b: Natural,
    pub k0: u64,
    #[serde(with = "crate::natstr")]
    pub p_hat: Natural,
    #[serde(with = "crate::natstr")]
    pub b_hat: Natural,
    #[serde(with = "crate::natstr")]
    pub m: Natural,
    pub k_alpha: u64,
}

impl ExclusionBound {
    /// Re-evaluates every inequality the bound rests on from the stored
    /// fields alone.
    pub fn check_inequalities(&self) -> bool {
        let g = self.gap.length();
        let big_p = product(&self.primes);
        let p_h = big_p.pow(self.h as u32);
        let two_h = Rational::integer(Natural::one() << self.h);
        let Some(inv_g) = Rational::one().checked_div(&g) else {
            return false;
        };
        let Ok(mid) = Rational::new(self.m.clone(), self.p_hat.clone()) else {
            return false;
        };
        let Some(k_hat) = self.k_alpha.checked_sub(self.reduction_r) else {
            return false;
        };
        let Some(room) = self.gap.right.checked_sub(&mid) else {
            return false;
        };
        let tail = self
            .alpha_hat
            .divide_by(&big_p.pow(k_hat as u32))
            .expect("P ≥ 2");
        let g_bp = gcd(&self.b, &p_h);
        two_h > inv_g
            && self.gap.contains_open(&mid)
            && k_hat >= self.k0 + 2 * self.h
            && tail < room
            && self.b_hat == &self.b / &g_bp
            && self.p_hat == &p_h / &g_bp
            && gcd(&self.b_hat, &self.p_hat).is_one()
    }
}

// Smallest r with gcd(s/gcd(s, P^r), P) = 1 and gcd(t/gcd(t, q^r), q) = 1.
fn reduction_exponent(alpha: &Rational, big_p: &Natural, q: &Natural) -> u64 {
    let strip = |mut x: Natural, by: &Natural| {
        let mut r = 0;
        loop {
            let g = gcd(&x, by);
            if g.is_one() {
                return r;
            }
            // Each round removes at least one full copy of by's shared part.
            x /= g;
            r += 1;
        }
    };
    strip(alpha.num().clone(), big_p).max(strip(alpha.den().clone(), q))
}

/// Runs the exclusion argument: reduce `α` to the coprime case, take the
/// largest gap, choose the minimal `h` with `2^h > 1/g`, the smallest `m`
/// with `m/p̂` inside the gap, and the minimal `k_alpha` meeting both
/// threshold conditions.
pub fn exclusion_bound(alpha: &Rational, cantor: &DigitCantorSet, primes: &[Natural]) -> Result<ExclusionBound> {
    let q = nat(cantor.q() as u64);
    check_moduli(primes, &q)?;
    let big_p = product(primes);
    let shared = gcd(&q, &big_p);
    if !shared.is_one() {
        return Err(Error::NotCoprime {
            lhs: q,
            rhs: big_p,
            shared,
        });
    }
    if alpha.is_zero() {
        return Err(Error::domain("alpha must be positive"));
    }

    let reduction_r = reduction_exponent(alpha, &big_p, &q);
    let alpha_hat = alpha
        .scale(&q.pow(reduction_r as u32))
        .divide_by(&big_p.pow(reduction_r as u32))?;
    let (s_hat, t_hat) = (alpha_hat.num(), alpha_hat.den());
    debug_assert!(gcd(s_hat, &big_p).is_one() && gcd(t_hat, &q).is_one());

    let gap = cantor.largest_gap();
    let g = gap.length();
    let mut h = 1u64;
    while Rational::integer(Natural::one() << h) * g.clone() <= Rational::one() {
        h += 1;
    }

    let base = witness_base(t_hat, primes, h, &q)?;
    let k0 = base.k0();
    let p_h = big_p.pow(h as u32);
    let g_bp = gcd(&base.b, &p_h);
    let b_hat = &base.b / &g_bp;
    let p_hat = &p_h / &g_bp;
    if Rational::integer(p_hat.clone()) * g.clone() <= Rational::one() {
        return Err(Error::Internal(format!("p̂ = {p_hat} does not exceed 1/g")));
    }

    let m = (gap.left.scale(&p_hat)).floor() + 1u32;
    let mid = Rational::new(m.clone(), p_hat.clone())?;
    if !gap.contains_open(&mid) {
        return Err(Error::Internal(format!("{mid} is not inside the gap")));
    }
    let room = gap.right.checked_sub(&mid).expect("mid < right");

    let mut k_hat = k0 + 2 * h;
    let mut tail = alpha_hat.divide_by(&big_p.pow(k_hat as u32))?;
    while tail >= room {
        k_hat += 1;
        tail = tail.divide_by(&big_p)?;
    }

    let bound = ExclusionBound {
        alpha: alpha.clone(),
        cantor: cantor.clone(),
        primes: primes.to_vec(),
        alpha_hat: alpha_hat.clone(),
        reduction_r,
        h,
        gap,
        b: base.b,
        k0,
        p_hat,
        b_hat,
        m,
        k_alpha: k_hat + reduction_r,
    };
    debug_assert!(bound.check_inequalities());
    Ok(bound)
}

/// Smallest `k ≤ k_alpha` such that `α/(∏p)^j ∉ K` for every `j` in
/// `[k, k_alpha]`, found by direct membership tests along the diagonal.
pub fn empirical_threshold(bound: &ExclusionBound) -> Result<u64> {
    let big_p = product(&bound.primes);
    let mut threshold = bound.k_alpha + 1;
    for k in (0..=bound.k_alpha).rev() {
        let x = bound.alpha.divide_by(&big_p.pow(k as u32))?;
        if x <= Rational::one() && bound.cantor.contains(&x)? {
            break;
        }
        threshold = k;
    }
    Ok(threshold)
}

/// Self-contained proof that `value ∉ K`: `q^{exponent_N}·value mod 1`
/// lies strictly inside the largest gap.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExclusionCertificate {
    pub value: Rational,
    #[serde(rename = "K")]
    pub cantor: DigitCantorSet,
    #[serde(rename = "exponent_N", with = "crate::natstr")]
    pub exponent_n: Natural,
    pub shifted_residue: Rational,
    pub gap: Gap,
}

/// Certificate for `α/∏pⱼ^{kⱼ}` with every `kⱼ ≥ k_alpha`.
pub fn make_certificate(
    alpha: &Rational,
    cantor: &DigitCantorSet,
    primes: &[Natural],
    k_tuple: &[u64],
) -> Result<ExclusionCertificate> {
    let bound = exclusion_bound(alpha, cantor, primes)?;
    certificate_from_bound(&bound, k_tuple)
}

/// As [`make_certificate`], reusing an already computed bound.
pub fn certificate_from_bound(bound: &ExclusionBound, k_tuple: &[u64]) -> Result<ExclusionCertificate> {
    let primes = &bound.primes;
    if k_tuple.len() != primes.len() {
        return Err(Error::domain(format!(
            "{} exponents given for {} moduli",
            k_tuple.len(),
            primes.len()
        )));
    }
    if k_tuple.iter().any(|&k| k < bound.k_alpha) {
        return Err(Error::BelowThreshold {
            required: bound.k_alpha,
        });
    }
    let q = nat(bound.cantor.q() as u64);
    let (s_hat, t_hat) = (bound.alpha_hat.num(), bound.alpha_hat.den());
    let h = bound.h;

    // After multiplying by q^r the target is α̂/∏pⱼ^{kⱼ−r}; the witness is
    // taken h levels below that.
    let shifted: Vec<u64> = k_tuple.iter().map(|k| k - bound.reduction_r - h).collect();
    let base = witness_base(t_hat, primes, h, &q)?;
    let witness = witness_from_base(&base, t_hat, primes, h, &shifted, &q)?;

    let unit = (s_hat * &bound.b_hat) % &bound.p_hat;
    let inverse = unit
        .modinv(&bound.p_hat)
        .ok_or_else(|| Error::Internal("ŝ·b̂ is not invertible modulo p̂".into()))?;
    let i_m = (&bound.m * inverse) % &bound.p_hat;
    let exponent_n = i_m * witness.exponent_n + bound.reduction_r;

    let value = bound
        .alpha
        .divide_by(&prime_power_product(primes, k_tuple))?;
    let shifted_residue = shift_residue(&value, bound.cantor.q(), &exponent_n)?;
    if !bound.gap.contains_open(&shifted_residue) {
        return Err(Error::Internal(format!(
            "shifted residue {shifted_residue} of {value} misses the gap"
        )));
    }
    Ok(ExclusionCertificate {
        value,
        cantor: bound.cantor.clone(),
        exponent_n,
        shifted_residue,
        gap: bound.gap.clone(),
    })
}

/// Recomputes the residue and the largest gap from scratch. Returns `false`
/// for anything inconsistent, including stored fields that disagree with the
/// recomputation.
pub fn verify_certificate(cert: &ExclusionCertificate) -> bool {
    if cert.value > Rational::one() {
        return false;
    }
    let gap = cert.cantor.largest_gap();
    if gap != cert.gap {
        return false;
    }
    match shift_residue(&cert.value, cert.cantor.q(), &cert.exponent_n) {
        Ok(residue) => residue == cert.shifted_residue && gap.contains_open(&residue),
        Err(_) => false,
    }
}


#[cfg(test)]
mod tests {
    use super::*;

    fn n(v: u64) -> Natural {
        nat(v)
    }

    fn r(a: u64, b: u64) -> Rational {
        Rational::new(a, b).unwrap()
    }

    fn k3(digits: &[u32]) -> DigitCantorSet {
        DigitCantorSet::new(3, digits.iter().copied()).unwrap()
    }

    #[test]
    fn witness_base_two_mod_nine() {
        // 2^6 − 1 = 63 = 7·3², so r = 2, a = 7, b = 7 mod 3 = 1, k0 = 3.
        let w = congruence_witness(&n(1), &[n(3)], 1, &[3], &n(2)).unwrap();
        assert_eq!((w.b.clone(), w.k0, w.exponent_n.clone()), (n(1), 3, n(18)));
        assert!(w.check());
        // 2^18 mod 81 = 28 = 1 + 27.
        assert_eq!(mod_pow(&n(2), &n(18), &n(81)).unwrap(), n(28));
        let w = congruence_witness(&n(1), &[n(3)], 1, &[5], &n(2)).unwrap();
        assert_eq!(w.exponent_n, n(18 * 9));
    }

    #[test]
    fn witness_brute_force_existence() {
        // Some n with 2^n ≡ 1 + 3b (mod 9) and b ∈ {1, 2} exists.
        let found = (1..=6u64).any(|e| {
            let v = mod_pow(&n(2), &n(e), &n(9)).unwrap();
            v == n(4) || v == n(7)
        });
        assert!(found);
    }

    #[test]
    fn witness_two_moduli() {
        let base = witness_base(&n(1), &[n(3), n(7)], 1, &n(10)).unwrap();
        let k0 = base.k0();
        for a in k0..k0 + 3 {
            for c in k0..k0 + 3 {
                let w = congruence_witness(&n(1), &[n(3), n(7)], 1, &[a, c], &n(10)).unwrap();
                assert!(w.check());
            }
        }
    }

    #[test]
    fn witness_rejects_bad_input() {
        assert!(matches!(
            congruence_witness(&n(1), &[n(5)], 1, &[5], &n(10)),
            Err(Error::NotCoprime { .. })
        ));
        assert_eq!(
            congruence_witness(&n(1), &[n(3)], 1, &[2], &n(2)),
            Err(Error::BelowThreshold { required: 3 })
        );
        assert!(congruence_witness(&n(1), &[n(3)], 0, &[5], &n(2)).is_err());
        assert!(congruence_witness(&n(1), &[n(3), n(6)], 1, &[5, 5], &n(5)).is_err());
    }

    #[test]
    fn tampered_witness_fails_check() {
        let mut w = congruence_witness(&n(1), &[n(3)], 1, &[3], &n(2)).unwrap();
        w.exponent_n += 1u32;
        assert!(!w.check());
    }

    #[test]
    fn bound_for_halving_in_base_three() {
        // Gap (1/2, 1), h = 2, n0 = φ(8) = 4, 3^4 − 1 = 80 = 5·2^4: r = 4,
        // a = 5, b = 5 mod 4 = 1, k0 = 5, p̂ = 4, m = 3, k_alpha = 5 + 4.
        let b = exclusion_bound(&Rational::one(), &k3(&[0, 1]), &[n(2)]).unwrap();
        assert_eq!(b.gap, Gap::new(r(1, 2), r(1, 1)));
        assert_eq!(b.h, 2);
        assert_eq!((b.k0, b.b.clone(), b.p_hat.clone(), b.m.clone()), (5, n(1), n(4), n(3)));
        assert_eq!(b.k_alpha, 9);
        assert!(b.check_inequalities());
        assert_eq!(b.reduction_r, 0);
    }

    #[test]
    fn bound_middle_thirds() {
        let b = exclusion_bound(&Rational::one(), &k3(&[0, 2]), &[n(2)]).unwrap();
        assert_eq!(b.gap, Gap::new(r(1, 3), r(2, 3)));
        assert_eq!(b.h, 2);
        assert_eq!((b.m.clone(), b.k_alpha), (n(2), 9));
        assert!(b.check_inequalities());
    }

    #[test]
    fn bound_rejects_shared_prime() {
        assert!(matches!(
            exclusion_bound(&Rational::one(), &k3(&[0, 1]), &[n(3)]),
            Err(Error::NotCoprime { .. })
        ));
        assert!(exclusion_bound(&Rational::zero(), &k3(&[0, 1]), &[n(2)]).is_err());
    }

    #[test]
    fn certificates_verify_and_agree_with_membership() {
        for digits in [[0, 1], [0, 2]] {
            let k = k3(&digits);
            let bound = exclusion_bound(&Rational::one(), &k, &[n(2)]).unwrap();
            for e in bound.k_alpha..=bound.k_alpha + 8 {
                let cert = certificate_from_bound(&bound, &[e]).unwrap();
                assert!(verify_certificate(&cert));
                assert!(!k.contains(&cert.value).unwrap());
                assert_eq!(cert.value, r(1, 1 << e));
            }
        }
    }

    #[test]
    fn reduction_branch() {
        // α = 1/6 in base 3: the denominator shares 3 with q.
        let alpha = r(1, 6);
        let k = k3(&[0, 2]);
        let bound = exclusion_bound(&alpha, &k, &[n(2)]).unwrap();
        assert_eq!(bound.reduction_r, 1);
        assert_eq!(bound.alpha_hat, r(1, 4));
        assert!(bound.check_inequalities());
        for e in bound.k_alpha..bound.k_alpha + 4 {
            let cert = certificate_from_bound(&bound, &[e]).unwrap();
            assert!(verify_certificate(&cert));
            assert!(!k.contains(&cert.value).unwrap());
        }
        // Numerator sharing the prime: α = 4/5.
        let bound = exclusion_bound(&r(4, 5), &k, &[n(2)]).unwrap();
        assert_eq!(bound.reduction_r, 2);
        let cert = certificate_from_bound(&bound, &[bound.k_alpha]).unwrap();
        assert!(verify_certificate(&cert));
    }

    #[test]
    fn below_threshold_is_rejected() {
        let k = k3(&[0, 1]);
        let bound = exclusion_bound(&Rational::one(), &k, &[n(2)]).unwrap();
        assert_eq!(
            make_certificate(&Rational::one(), &k, &[n(2)], &[bound.k_alpha - 1]),
            Err(Error::BelowThreshold { required: bound.k_alpha })
        );
    }

    #[test]
    fn tampering_breaks_verification() {
        let k = k3(&[0, 2]);
        let bound = exclusion_bound(&Rational::one(), &k, &[n(2)]).unwrap();
        let cert = certificate_from_bound(&bound, &[bound.k_alpha + 5]).unwrap();
        let mut bumped = cert.clone();
        bumped.exponent_n += 1u32;
        assert!(!verify_certificate(&bumped));
        let mut wrong_gap = cert.clone();
        wrong_gap.gap = Gap::new(r(0, 1), r(1, 1));
        assert!(!verify_certificate(&wrong_gap));
        // A member of K can never verify, whatever the exponent.
        let mut member = cert;
        member.value = r(1, 4);
        for e in 0..40u64 {
            member.exponent_n = n(e);
            member.shifted_residue = shift_residue(&member.value, 3, &member.exponent_n).unwrap();
            assert!(!verify_certificate(&member));
        }
    }

    #[test]
    fn certificate_json_round_trip() {
        let k = k3(&[0, 1]);
        let cert = make_certificate(&Rational::one(), &k, &[n(2)], &[12]).unwrap();
        let json = serde_json::to_string(&cert).unwrap();
        assert!(json.contains("\"exponent_N\":\""));
        assert!(json.contains("\"K\":{\"q\":3,\"A\":[0,1]}"));
        assert!(serde_json::from_str::<ExclusionCertificate>("{\"value\":\"1/2\"}").is_err());
        let back: ExclusionCertificate = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cert);
        assert!(verify_certificate(&back));
    }

    #[test]
    fn empirical_threshold_never_exceeds_bound() {
        let k = k3(&[0, 1]);
        let bound = exclusion_bound(&Rational::one(), &k, &[n(2)]).unwrap();
        let emp = empirical_threshold(&bound).unwrap();
        assert!(emp <= bound.k_alpha);
    }
}
