//! Exact arithmetic over Q: p-adic valuations, residues, Legendre symbols,
//! square tests and square-free reduction.
//!
//! Everything here is exact; the capped-precision local arithmetic lives in
//! [`crate::padic`]. Factorization is plain trial division, which is all the
//! desk-scale inputs of this crate need.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// p^k as a `BigInt` (k >= 0).
pub fn pk(p: u64, k: u32) -> BigInt {
    BigInt::from(p).pow(k)
}

/// Exact exponent of `p` in the nonzero integer `n`.
pub fn vp_int(n: &BigInt, p: u64) -> Option<i64> {
    if n.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0i64;
    loop {
        let (q, r) = n.div_rem(&p);
        if r.is_zero() {
            v += 1;
            n = q;
        } else {
            return Some(v);
        }
    }
}

/// The p-adic valuation of a rational; `None` stands for +infinity (q = 0).
pub fn vp(q: &BigRational, p: u64) -> Option<i64> {
    if q.is_zero() {
        return None;
    }
    let vn = vp_int(q.numer(), p).expect("nonzero numerator");
    let vd = vp_int(q.denom(), p).expect("nonzero denominator");
    Some(vn - vd)
}

/// q / p^vp(q): the unit part of a nonzero rational, coprime to p in both
/// numerator and denominator.
pub fn unit_part(q: &BigRational, p: u64) -> BigRational {
    let v = vp(q, p).expect("unit_part of zero");
    let pb = BigRational::from(BigInt::from(p));
    if v >= 0 {
        q / pb.pow(v as i32)
    } else {
        q * pb.pow((-v) as i32)
    }
}

/// Modular inverse of `a` mod `m` (m > 0), if gcd(a, m) = 1.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let a = a.mod_floor(m);
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// Residue of a rational with vp(q) >= 0 modulo p^k, computed as
/// num * den^-1 mod p^k (the denominator is a p-adic unit).
pub fn residue(q: &BigRational, p: u64, k: u32) -> BigInt {
    let m = pk(p, k);
    let den_inv = mod_inverse(q.denom(), &m).expect("denominator must be coprime to p");
    (q.numer() * den_inv).mod_floor(&m)
}

/// Legendre symbol of `a` modulo the odd prime `p`: +1, -1, or 0.
pub fn legendre(a: &BigInt, p: u64) -> i8 {
    assert!(p > 2, "legendre requires an odd prime");
    let pb = BigInt::from(p);
    let a = a.mod_floor(&pb);
    if a.is_zero() {
        return 0;
    }
    let e = BigInt::from((p - 1) / 2);
    let r = a.modpow(&e, &pb);
    if r.is_one() {
        1
    } else {
        -1
    }
}

/// Legendre symbol of the mod-p residue of a rational p-adic unit.
pub fn legendre_rational(q: &BigRational, p: u64) -> i8 {
    legendre(&residue(q, p, 1), p)
}

/// Whether the nonzero rational `q` is a square in Q_p (p odd): even
/// valuation and square unit part mod p.
pub fn is_square_qp(q: &BigRational, p: u64) -> bool {
    assert!(p > 2 && !q.is_zero());
    let v = vp(q, p).unwrap();
    if v % 2 != 0 {
        return false;
    }
    legendre_rational(&unit_part(q, p), p) == 1
}

/// Whether the nonzero rational `q` is a square in Q_2: even valuation and
/// unit part congruent to 1 mod 8.
pub fn is_square_q2(q: &BigRational) -> bool {
    assert!(!q.is_zero());
    let v = vp(q, 2).unwrap();
    if v % 2 != 0 {
        return false;
    }
    residue(&unit_part(q, 2), 2, 3) == BigInt::one()
}

/// Whether `q` is the square of a rational number.
pub fn is_square_rational(q: &BigRational) -> bool {
    if q.is_zero() {
        return true;
    }
    if q.is_negative() {
        return false;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    &(&n * &n) == q.numer() && &(&d * &d) == q.denom()
}

/// Trial-division factorization of a positive integer.
pub fn factor(n: &BigInt) -> Vec<(BigInt, u32)> {
    assert!(n.is_positive(), "factor requires a positive integer");
    let mut n = n.clone();
    let mut out: Vec<(BigInt, u32)> = Vec::new();
    let mut push = |p: BigInt, e: u32| {
        if e > 0 {
            out.push((p, e));
        }
    };
    let two = BigInt::from(2);
    let mut e = 0u32;
    while n.is_even() {
        n /= &two;
        e += 1;
    }
    push(two, e);
    let mut d = BigInt::from(3);
    while &d * &d <= n {
        let mut e = 0u32;
        loop {
            let (q, r) = n.div_rem(&d);
            if r.is_zero() {
                n = q;
                e += 1;
            } else {
                break;
            }
        }
        push(d.clone(), e);
        d += 2;
    }
    if !n.is_one() {
        push(n, 1);
    }
    out
}

/// The square-free integer representing the square class of a nonzero
/// rational: sign(q) * product of primes with odd exponent in q.
pub fn squarefree_part(q: &BigRational) -> BigInt {
    assert!(!q.is_zero());
    let n = q.numer().abs() * q.denom().abs();
    let mut s = BigInt::one();
    for (p, e) in factor(&n) {
        if e % 2 == 1 {
            s *= p;
        }
    }
    if q.is_negative() {
        -s
    } else {
        s
    }
}

/// The odd primes dividing the square-free part of `q` (used to assemble the
/// relevant-places set for local-global checks).
pub fn odd_primes_of_square_class(q: &BigRational) -> Vec<u64> {
    let s = squarefree_part(q).abs();
    factor(&s)
        .into_iter()
        .filter_map(|(p, _)| {
            let p: u64 = p.try_into().expect("desk-scale prime");
            (p != 2).then_some(p)
        })
        .collect()
}

/// Parse a rational from "a/b" or a plain integer string.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    s.trim()
        .parse::<BigRational>()
        .map_err(|e| Error::BadInput(format!("cannot parse rational {s:?}: {e}")))
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Deterministic primality test, adequate for u64 inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    // Deterministic Miller-Rabin bases for u64.
    let d = (n - 1).trailing_zeros();
    let m = (n - 1) >> d;
    'wit: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = mod_pow_u64(a % n, m, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..d {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'wit;
            }
        }
        return false;
    }
    true
}

fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn mod_pow_u64(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod_u64(acc, b, m);
        }
        b = mul_mod_u64(b, b, m);
        e >>= 1;
    }
    acc
}

/// Smallest primitive root modulo p^k for an odd prime p.
pub fn primitive_root_mod_pk(p: u64, k: u32) -> BigInt {
    assert!(p > 2 && is_prime_u64(p));
    let prime_divisors: Vec<u64> = factor(&BigInt::from(p - 1))
        .into_iter()
        .map(|(q, _)| u64::try_from(&q).expect("factor of p-1 fits u64"))
        .collect();
    let pb = BigInt::from(p);
    let mut g = BigInt::from(2);
    let root_mod_p = loop {
        let ok = prime_divisors
            .iter()
            .all(|q| !g.modpow(&BigInt::from((p - 1) / q), &pb).is_one());
        if ok {
            break g.clone();
        }
        g += 1;
    };
    if k == 1 {
        return root_mod_p;
    }
    // g is primitive mod p^k for all k iff g^(p-1) != 1 mod p^2.
    let p2 = &pb * &pb;
    if root_mod_p.modpow(&BigInt::from(p - 1), &p2).is_one() {
        root_mod_p + pb
    } else {
        root_mod_p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vp_reads_off_prime_powers() {
        assert_eq!(vp(&ratio(7, 3), 3), Some(-1));
        assert_eq!(vp(&rat(0), 5), None);
        assert_eq!(vp(&rat(-2), 5), Some(0));
        assert_eq!(vp(&rat(-5), 5), Some(1));
        assert_eq!(vp(&ratio(9, 50), 5), Some(-2));
    }

    #[test]
    fn vp_is_additive() {
        let samples = [ratio(7, 3), rat(-15), ratio(4, 9), ratio(-25, 8)];
        for a in &samples {
            for b in &samples {
                for p in [2u64, 3, 5, 7] {
                    assert_eq!(
                        vp(&(a * b), p).unwrap(),
                        vp(a, p).unwrap() + vp(b, p).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn legendre_matches_exhaustive_squares() {
        for p in [3u64, 5, 7, 11, 13] {
            let squares: std::collections::HashSet<u64> =
                (1..p).map(|x| (x * x) % p).collect();
            for a in 0..p {
                let expected = if a == 0 {
                    0
                } else if squares.contains(&a) {
                    1
                } else {
                    -1
                };
                assert_eq!(legendre(&BigInt::from(a), p), expected, "a={a} p={p}");
            }
        }
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre(&BigInt::from(1), 7), 1);
        // -2 mod 5 = 3, and the squares mod 5 are {1, 4}.
        assert_eq!(legendre(&BigInt::from(3), 5), -1);
        assert_eq!(legendre(&BigInt::from(13), 3), 1);
    }

    #[test]
    fn square_tests_in_qp() {
        assert!(is_square_qp(&rat(13), 3));
        assert!(!is_square_qp(&rat(-2), 5));
        assert!(is_square_qp(&rat(9), 7));
        assert!(!is_square_qp(&rat(3), 3)); // odd valuation
        assert!(is_square_qp(&ratio(1, 9), 3));
    }

    #[test]
    fn square_tests_in_q2() {
        assert!(is_square_q2(&rat(17)));
        assert!(!is_square_q2(&rat(3)));
        assert!(!is_square_q2(&rat(2)));
        assert!(is_square_q2(&rat(4)));
        assert!(!is_square_q2(&rat(-1)));
    }

    #[test]
    fn squarefree_reduction() {
        assert_eq!(squarefree_part(&rat(12)), BigInt::from(3));
        assert_eq!(squarefree_part(&ratio(-50, 27)), BigInt::from(-6));
        assert_eq!(squarefree_part(&rat(1)), BigInt::one());
        assert_eq!(odd_primes_of_square_class(&rat(-10)), vec![5]);
    }

    #[test]
    fn rational_square_detection() {
        assert!(is_square_rational(&ratio(4, 9)));
        assert!(!is_square_rational(&rat(13)));
        assert!(!is_square_rational(&ratio(13, 9)));
        assert!(!is_square_rational(&rat(-4)));
    }

    #[test]
    fn parses_fractions_and_integers() {
        assert_eq!(parse_rational("7/3").unwrap(), ratio(7, 3));
        assert_eq!(parse_rational("-2").unwrap(), rat(-2));
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn primitive_roots() {
        // 2 generates (Z/9)^* = {1,2,4,8,7,5}.
        assert_eq!(primitive_root_mod_pk(3, 2), BigInt::from(2));
        let g = primitive_root_mod_pk(7, 3);
        let m = pk(7, 3);
        let mut seen = std::collections::HashSet::new();
        let mut x = BigInt::one();
        for _ in 0..(343 - 49) {
            x = (&x * &g).mod_floor(&m);
            seen.insert(x.clone());
        }
        assert_eq!(seen.len(), 294); // phi(7^3)
    }

    #[test]
    fn modular_inverse() {
        // Extended-Euclid oracle: 2 * 63 = 126 = 125 + 1.
        assert_eq!(
            mod_inverse(&BigInt::from(2), &BigInt::from(125)),
            Some(BigInt::from(63))
        );
        assert_eq!(mod_inverse(&BigInt::from(5), &BigInt::from(125)), None);
    }
}
