//! Multiplicative orders, their growth along prime powers, and the orbit
//! structure of `(Z/mZ)^*` under multiplication by `q`.

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational_core::{
    factorize, gcd, is_prime, lcm, mod_pow, nat, valuation, Factorization, Natural,
};

fn require_coprime(a: &Natural, m: &Natural) -> Result<()> {
    let shared = gcd(a, m);
    if shared.is_one() {
        Ok(())
    } else {
        Err(Error::NotCoprime {
            lhs: a.clone(),
            rhs: m.clone(),
            shared,
        })
    }
}

/// Least `n ≥ 1` with `a^n ≡ 1 (mod m)`.
///
/// Starts from `φ(m)` and strips prime factors from the exponent while the
/// congruence still holds.
pub fn mult_order(a: &Natural, m: &Natural) -> Result<Natural> {
    if m.is_zero() {
        return Err(Error::ZeroModulus);
    }
    if m.is_one() {
        return Ok(Natural::one());
    }
    require_coprime(a, m)?;
    let fm = factorize(m)?;
    Ok(order_with_factorization(a, m, &fm))
}

fn order_with_factorization(a: &Natural, m: &Natural, fm: &Factorization) -> Natural {
    let phi = fm.totient_factorization();
    let mut order = phi.product();
    for (r, e) in phi.factors() {
        for _ in 0..*e {
            let candidate = &order / r;
            if mod_pow(a, &candidate, m).expect("m ≥ 1").is_one() {
                order = candidate;
            } else {
                break;
            }
        }
    }
    order
}

/// Growth data for `ord_{p^k}(q)`: `q^{d_k0} = 1 + b·p^{k0}` with `p ∤ b`, and
/// `ord_{p^k}(q) = p^{k−k0}·d_k0` for every `k ≥ k0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderStabilization {
    #[serde(with = "crate::natstr")]
    pub p: Natural,
    #[serde(with = "crate::natstr")]
    pub q: Natural,
    pub k0: u64,
    #[serde(with = "crate::natstr")]
    pub d_k0: Natural,
    #[serde(with = "crate::natstr")]
    pub b: Natural,
}

impl OrderStabilization {
    /// `ord_{p^k}(q)` for `k ≥ k0`.
    pub fn order_at(&self, k: u64) -> Option<Natural> {
        (k >= self.k0).then(|| self.p.pow((k - self.k0) as u32) * &self.d_k0)
    }
}

fn check_prime_coprime(p: &Natural, q: &Natural) -> Result<()> {
    if *q < nat(2) {
        return Err(Error::domain("q must be ≥ 2"));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p.clone()));
    }
    require_coprime(p, q)
}

/// Computes `d₂ = ord_{p²}(q)` and the exact `p`-adic valuation of `q^{d₂} − 1`.
pub fn order_stabilization(p: &Natural, q: &Natural) -> Result<OrderStabilization> {
    check_prime_coprime(p, q)?;
    let d2 = mult_order(q, &(p * p))?;
    let exponent = d2
        .to_u32()
        .ok_or_else(|| Error::domain("ord_{p²}(q) too large to expand q^{d₂} exactly"))?;
    let excess = q.pow(exponent) - 1u32;
    let k0 = valuation(&excess, p);
    if k0 < 2 {
        return Err(Error::Internal(format!(
            "valuation of q^{d2} − 1 at {p} is {k0} < 2"
        )));
    }
    let b = excess / p.pow(k0 as u32);
    Ok(OrderStabilization {
        p: p.clone(),
        q: q.clone(),
        k0,
        d_k0: d2,
        b,
    })
}

/// `ord_{p^k}(q)`: closed form above the threshold, direct below it.
pub fn order_of_prime_power(p: &Natural, q: &Natural, k: u64) -> Result<Natural> {
    if k == 0 {
        return Err(Error::domain("prime-power exponent must be ≥ 1"));
    }
    let stab = order_stabilization(p, q)?;
    match stab.order_at(k) {
        Some(order) => Ok(order),
        None => mult_order(q, &p.pow(k as u32)),
    }
}

/// `ord_{m1·m2}(a)` as the lcm of the orders modulo the coprime parts.
pub fn order_lcm(a: &Natural, m1: &Natural, m2: &Natural) -> Result<Natural> {
    if m1.is_zero() || m2.is_zero() {
        return Err(Error::ZeroModulus);
    }
    require_coprime(m1, m2)?;
    require_coprime(a, &(m1 * m2))?;
    lcm(&mult_order(a, m1)?, &mult_order(a, m2)?)
}

/// Threshold beyond which `ord_{∏pᵢ^{kᵢ}}(q)` scales by `∏pᵢ^{kᵢ−n₀}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductStabilization {
    /// `max r_{i,j} + max k0(j)`, where `r_{i,j}` is the exponent of `pᵢ` in
    /// `ord_{p_j^{k0(j)}}(q)`.
    pub n0: u64,
    /// Smallest threshold for which the identity provably holds; never
    /// larger than `n0`.
    pub minimal_n0: u64,
    #[serde(with = "crate::natstr::vec")]
    pub primes: Vec<Natural>,
    pub per_prime: Vec<OrderStabilization>,
    /// `r[i][j]` = exponent of `primes[i]` in `ord_{p_j^{k0(j)}}(q)`.
    pub r: Vec<Vec<u64>>,
    #[serde(with = "crate::natstr")]
    pub order_at_n0: Natural,
}

impl ProductStabilization {
    /// `∏pᵢ^{kᵢ−n}·ord_{(∏p)^n}(q)` for a threshold `n ≤ min kᵢ`.
    pub fn predicted_order(&self, q: &Natural, n: u64, ks: &[u64]) -> Result<Natural> {
        let base = self.primes.iter().fold(Natural::one(), |acc, p| acc * p);
        let mut order = mult_order(q, &base.pow(n as u32))?;
        for (p, &k) in self.primes.iter().zip(ks) {
            order *= p.pow((k - n) as u32);
        }
        Ok(order)
    }
}

fn product_modulus(primes: &[Natural], ks: &[u64]) -> Natural {
    primes
        .iter()
        .zip(ks)
        .fold(Natural::one(), |acc, (p, &k)| acc * p.pow(k as u32))
}

// Smallest s with ord_{p^k}(q) = p^{k−s}·ord_{p^s}(q) for all k ≥ s. Below k0
// the order is flat from k = 2 on, so s is k0 unless k0 = 2 and the order
// already grows from p to p².
fn growth_start(st: &OrderStabilization) -> Result<(u64, Natural)> {
    if st.k0 == 2 {
        let d1 = mult_order(&st.q, &st.p)?;
        if &d1 * &st.p == st.d_k0 {
            return Ok((1, d1));
        }
    }
    Ok((st.k0, st.d_k0.clone()))
}

fn grid(len: usize, lo: u64, hi: u64) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (lo..=hi).map(move |k| {
                    let mut next = prefix.clone();
                    next.push(k);
                    next
                })
            })
            .collect();
    }
    out
}

/// Threshold `n₀` for distinct primes coprime to `q`, together with the
/// smallest provably valid threshold. Both are checked against direct order
/// computations on the grid `{n, n+1}^ℓ` before returning.
pub fn product_stabilization(primes: &[Natural], q: &Natural) -> Result<ProductStabilization> {
    if primes.is_empty() {
        return Err(Error::domain("need at least one prime"));
    }
    let mut sorted = primes.to_vec();
    sorted.sort();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::domain("primes must be distinct"));
    }
    let per_prime = primes
        .iter()
        .map(|p| order_stabilization(p, q))
        .collect::<Result<Vec<_>>>()?;
    let r: Vec<Vec<u64>> = primes
        .iter()
        .map(|pi| per_prime.iter().map(|st| valuation(&st.d_k0, pi)).collect())
        .collect();
    let max_r = r.iter().flatten().copied().max().unwrap_or(0);
    let max_k0 = per_prime.iter().map(|st| st.k0).max().unwrap_or(2);
    let n0 = max_r + max_k0;

    // For k_j ≥ s_j the p_i-exponent of ord_{p_j^{k_j}}(q) is constant when
    // j ≠ i and grows by one per step when j = i, so the identity holds from
    // n on exactly when n ≥ max s_j and each diagonal exponent already
    // dominates the off-diagonal ones at k = n.
    let starts = per_prime
        .iter()
        .map(growth_start)
        .collect::<Result<Vec<_>>>()?;
    let mut minimal = starts.iter().map(|(s, _)| *s).max().unwrap_or(1);
    for (i, pi) in primes.iter().enumerate() {
        let (s_i, d_i) = &starts[i];
        let own = valuation(d_i, pi);
        let others = starts
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, (_, d_j))| valuation(d_j, pi))
            .max()
            .unwrap_or(0);
        // n − s_i + own ≥ others
        minimal = minimal.max((s_i + others).saturating_sub(own));
    }
    let minimal_n0 = minimal.min(n0);

    let base = primes.iter().fold(Natural::one(), |acc, p| acc * p);
    let order_at_n0 = mult_order(q, &base.pow(n0 as u32))?;
    let out = ProductStabilization {
        n0,
        minimal_n0,
        primes: primes.to_vec(),
        per_prime,
        r,
        order_at_n0,
    };
    for threshold in [n0, minimal_n0] {
        for ks in grid(primes.len(), threshold, threshold + 1) {
            let direct = mult_order(q, &product_modulus(primes, &ks))?;
            if direct != out.predicted_order(q, threshold, &ks)? {
                return Err(Error::Internal(format!(
                    "order identity fails at k = {ks:?} for threshold {threshold}"
                )));
            }
        }
    }
    Ok(out)
}

/// Orbits of `(Z/mZ)^*` under multiplication by `q`, each named by its
/// smallest element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetDecomposition {
    pub modulus: u64,
    pub generator: u64,
    pub orbit_size: u64,
    pub representatives: Vec<u64>,
}

impl CosetDecomposition {
    /// The full orbit `{q^n·a mod m}` of a unit `a`.
    pub fn orbit(&self, a: u64) -> Vec<u64> {
        orbit_of(a, self.generator, self.modulus)
    }
}

fn orbit_of(a: u64, q: u64, m: u64) -> Vec<u64> {
    if m == 1 {
        return vec![1];
    }
    let mut out = vec![a % m];
    let mut cur = (a as u128 * q as u128 % m as u128) as u64;
    while cur != out[0] {
        out.push(cur);
        cur = (cur as u128 * q as u128 % m as u128) as u64;
    }
    out
}

/// Partitions the units modulo `m` into `⟨q⟩`-orbits. Memory is one byte
/// per residue, so `m` is limited to what fits comfortably in RAM.
pub fn coset_decomposition(m: u64, q: u64) -> Result<CosetDecomposition> {
    if m == 0 {
        return Err(Error::ZeroModulus);
    }
    require_coprime(&nat(q), &nat(m))?;
    if m == 1 {
        return Ok(CosetDecomposition {
            modulus: 1,
            generator: q,
            orbit_size: 1,
            representatives: vec![1],
        });
    }
    let mut seen = vec![false; m as usize];
    let mut representatives = Vec::new();
    let mut orbit_size = 0;
    for a in 1..m {
        if seen[a as usize] || a.gcd(&m) != 1 {
            continue;
        }
        representatives.push(a);
        let orbit = orbit_of(a, q, m);
        orbit_size = orbit.len() as u64;
        for x in orbit {
            seen[x as usize] = true;
        }
    }
    Ok(CosetDecomposition {
        modulus: m,
        generator: q,
        orbit_size,
        representatives,
    })
}

/// Number of `⟨q⟩`-cosets in `(Z/mZ)^*`, i.e. `φ(m)/ord_m(q)`, without
/// enumerating residues.
pub fn coset_count(m: &Natural, q: &Natural) -> Result<Natural> {
    if m.is_zero() {
        return Err(Error::ZeroModulus);
    }
    if m.is_one() {
        return Ok(Natural::one());
    }
    require_coprime(q, m)?;
    let fm = factorize(m)?;
    Ok(fm.totient() / order_with_factorization(q, m, &fm))
}

/// Least `n ≥ 1` with `q^n·x ≡ y (mod m)`, or `None` when `x` and `y` lie in
/// different orbits.
pub fn orbit_witness(x: u64, y: u64, q: u64, m: u64) -> Result<Option<u64>> {
    if m == 0 {
        return Err(Error::ZeroModulus);
    }
    require_coprime(&nat(q), &nat(m))?;
    for v in [x, y] {
        require_coprime(&nat(v), &nat(m))?;
    }
    let (x, y) = (x % m, y % m);
    let mut cur = x;
    for n in 1.. {
        cur = (cur as u128 * q as u128 % m as u128) as u64;
        if cur == y {
            return Ok(Some(n));
        }
        if cur == x {
            break;
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(v: u64) -> Natural {
        nat(v)
    }

    fn brute_order(a: u64, m: u64) -> u64 {
        if m == 1 {
            return 1;
        }
        let mut cur = a % m;
        let mut k = 1;
        while cur != 1 {
            cur = cur * a % m;
            k += 1;
        }
        k
    }

    #[test]
    fn mult_order_examples() {
        assert_eq!(mult_order(&n(2), &n(7)).unwrap(), n(3));
        assert_eq!(mult_order(&n(1), &n(91)).unwrap(), n(1));
        assert_eq!(mult_order(&n(2), &n(9)).unwrap(), n(6));
        assert_eq!(mult_order(&n(5), &n(1)).unwrap(), n(1));
    }

    #[test]
    fn mult_order_names_shared_factor() {
        let err = mult_order(&n(6), &n(9)).unwrap_err();
        assert_eq!(
            err,
            Error::NotCoprime {
                lhs: n(6),
                rhs: n(9),
                shared: n(3)
            }
        );
        assert!(err.to_string().contains("gcd(6, 9) = 3"));
        assert_eq!(mult_order(&n(2), &n(0)), Err(Error::ZeroModulus));
    }

    #[test]
    fn mult_order_matches_brute_force() {
        for m in 1..300u64 {
            for a in 1..40u64 {
                if a.gcd(&m) == 1 {
                    assert_eq!(mult_order(&n(a), &n(m)).unwrap(), n(brute_order(a, m)), "{a} mod {m}");
                }
            }
        }
    }

    #[test]
    fn order_divides_exactly_the_annihilating_exponents() {
        for m in 2..300u64 {
            let phi = crate::rational_core::euler_phi(&n(m)).unwrap().to_u64().unwrap();
            for a in [2u64, 3, 7, 10] {
                if a.gcd(&m) != 1 {
                    continue;
                }
                let ord = mult_order(&n(a), &n(m)).unwrap().to_u64().unwrap();
                for e in 1..=3 * phi {
                    let one = mod_pow(&n(a), &n(e), &n(m)).unwrap().is_one();
                    assert_eq!(one, e % ord == 0);
                }
            }
        }
    }

    #[test]
    fn stabilization_examples() {
        let s = order_stabilization(&n(3), &n(2)).unwrap();
        assert_eq!((s.k0, s.d_k0.clone(), s.b.clone()), (2, n(6), n(7)));
        let s = order_stabilization(&n(5), &n(2)).unwrap();
        assert_eq!((s.k0, s.d_k0.clone(), s.b.clone()), (2, n(20), n(41943)));
        // ord_49(10) = 42; 10^42 − 1 has 7-adic valuation 2.
        let s = order_stabilization(&n(7), &n(10)).unwrap();
        assert_eq!(s.d_k0, n(brute_order(10, 49)));
        let excess = Natural::from(10u32).pow(42) - 1u32;
        assert_eq!(s.k0, valuation(&excess, &n(7)));
        assert_eq!(s.b * n(7).pow(s.k0 as u32), excess);
        // p = 2: 3² = 1 + 2³, so k0 = 3.
        let s = order_stabilization(&n(2), &n(3)).unwrap();
        assert_eq!((s.k0, s.d_k0.clone(), s.b.clone()), (3, n(2), n(1)));
    }

    #[test]
    fn stabilization_rejects_bad_input() {
        assert_eq!(order_stabilization(&n(9), &n(2)), Err(Error::NotPrime(n(9))));
        assert!(matches!(order_stabilization(&n(3), &n(6)), Err(Error::NotCoprime { .. })));
    }

    #[test]
    fn prime_power_examples() {
        assert_eq!(order_of_prime_power(&n(3), &n(2), 4).unwrap(), n(54));
        assert_eq!(order_of_prime_power(&n(3), &n(2), 1).unwrap(), n(2));
        assert_eq!(order_of_prime_power(&n(3), &n(2), 3).unwrap(), n(18));
        assert_eq!(brute_order(2, 81), 54);
        assert_eq!(brute_order(2, 27), 18);
    }

    #[test]
    fn order_lcm_examples() {
        assert_eq!(order_lcm(&n(2), &n(7), &n(9)).unwrap(), n(6));
        assert_eq!(brute_order(2, 63), 6);
        assert_eq!(order_lcm(&n(2), &n(3), &n(1)).unwrap(), n(2));
        assert_eq!(order_lcm(&n(10), &n(3), &n(7)).unwrap(), n(6));
        assert!(order_lcm(&n(2), &n(6), &n(9)).is_err());
        assert!(order_lcm(&n(3), &n(7), &n(9)).is_err());
    }

    #[test]
    fn product_stabilization_single_prime() {
        // ord_9(2) = 6 = 2·3, so r = 1 and the proof constant is 1 + 2 = 3.
        let ps = product_stabilization(&[n(3)], &n(2)).unwrap();
        assert_eq!(ps.n0, 3);
        assert_eq!(ps.r, vec![vec![1]]);
        // ord_{3^k}(2) = 2·3^{k−1} from k = 1 on.
        assert_eq!(ps.minimal_n0, 1);
        for k in 2..=5u64 {
            let direct = n(brute_order(2, 3u64.pow(k as u32)));
            assert_eq!(ps.predicted_order(&n(2), 2, &[k]).unwrap(), direct);
        }
    }

    #[test]
    fn product_stabilization_two_primes_against_brute_force() {
        let ps = product_stabilization(&[n(3), n(5)], &n(2)).unwrap();
        for k in ps.minimal_n0..=4 {
            for j in ps.minimal_n0..=4 {
                let m = 3u64.pow(k as u32) * 5u64.pow(j as u32);
                let direct = n(brute_order(2, m));
                assert_eq!(ps.predicted_order(&n(2), ps.minimal_n0, &[k, j]).unwrap(), direct);
                if k >= ps.n0 && j >= ps.n0 {
                    assert_eq!(ps.predicted_order(&n(2), ps.n0, &[k, j]).unwrap(), direct);
                }
            }
        }
    }

    #[test]
    fn product_stabilization_seven_base_ten() {
        let ps = product_stabilization(&[n(7)], &n(10)).unwrap();
        for k in ps.minimal_n0..=4u64 {
            let direct = n(brute_order(10, 7u64.pow(k as u32)));
            assert_eq!(ps.predicted_order(&n(10), ps.minimal_n0, &[k]).unwrap(), direct);
        }
        assert!(ps.minimal_n0 <= ps.n0);
    }

    #[test]
    fn product_stabilization_rejects_repeats() {
        assert!(product_stabilization(&[n(3), n(3)], &n(2)).is_err());
        assert!(product_stabilization(&[n(3)], &n(3)).is_err());
    }

    #[test]
    fn coset_examples() {
        let c = coset_decomposition(8, 3).unwrap();
        assert_eq!(c.representatives, vec![1, 5]);
        assert_eq!(c.orbit_size, 2);
        assert_eq!(c.orbit(5), vec![5, 7]);
        assert_eq!(coset_decomposition(2, 7).unwrap().representatives, vec![1]);
        assert_eq!(coset_decomposition(7, 3).unwrap().representatives, vec![1]);
        assert_eq!(coset_decomposition(1, 3).unwrap().representatives, vec![1]);
        assert!(coset_decomposition(9, 3).is_err());
    }

    #[test]
    fn coset_counting() {
        for q in [2u64, 3, 10] {
            for m in 1..2000u64 {
                if q.gcd(&m) != 1 {
                    continue;
                }
                let c = coset_decomposition(m, q).unwrap();
                let phi = crate::rational_core::euler_phi(&n(m)).unwrap();
                assert_eq!(n(c.representatives.len() as u64 * c.orbit_size), phi);
                assert_eq!(coset_count(&n(m), &n(q)).unwrap(), n(c.representatives.len() as u64));
            }
        }
    }

    #[test]
    fn orbit_witness_examples() {
        assert_eq!(orbit_witness(1, 3, 3, 8).unwrap(), Some(1));
        assert_eq!(orbit_witness(5, 5, 3, 8).unwrap(), Some(2));
        assert_eq!(orbit_witness(1, 5, 3, 8).unwrap(), None);
        assert!(orbit_witness(2, 5, 3, 8).is_err());
    }
}
