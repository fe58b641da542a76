//! Diagonal quadratic forms in up to four variables: Hilbert symbols, local
//! isotropy over R and Q_p, and the local-global isotropy decision with a
//! certificate of failing places.
//!
//! Everything is computed with exact rational arithmetic; the only local
//! data ever needed are valuations and unit residues, so no capped-precision
//! numbers appear here (including at p = 2).

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{
    self, is_square_q2, is_square_qp, legendre, odd_primes_of_square_class, residue, unit_part, vp,
};

/// A completion of Q: the real numbers or some Q_p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Place {
    Real,
    Prime(u64),
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Real => write!(f, "real"),
            Place::Prime(p) => write!(f, "{p}"),
        }
    }
}

/// Diagonal form <a1, ..., an> with 1 <= n <= 4 nonzero rational
/// coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalForm {
    coeffs: Vec<BigRational>,
}

impl DiagonalForm {
    pub fn new(coeffs: Vec<BigRational>) -> Result<Self> {
        if coeffs.is_empty() || coeffs.len() > 4 {
            return Err(Error::UnsupportedDimension(coeffs.len()));
        }
        if coeffs.iter().any(BigRational::is_zero) {
            return Err(Error::BadInput("form coefficients must be nonzero".into()));
        }
        Ok(DiagonalForm { coeffs })
    }

    /// Parse a comma-separated list of rationals, e.g. "1,-2,5,-10".
    pub fn parse(s: &str) -> Result<Self> {
        let coeffs = s
            .split(',')
            .map(exact::parse_rational)
            .collect::<Result<Vec<_>>>()?;
        DiagonalForm::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    /// Square-free integer representatives of the coefficient square
    /// classes; an isometric form.
    pub fn squarefree_reduced(&self) -> Vec<BigInt> {
        self.coeffs.iter().map(exact::squarefree_part).collect()
    }

    /// Places that can possibly be anisotropic for this form: the real
    /// place, 2, and the odd primes dividing a square-free-reduced
    /// coefficient. (For dim >= 3 with unit coefficients every other place
    /// is isotropic; for dim <= 2 failure always shows up here too.)
    pub fn relevant_places(&self) -> Vec<Place> {
        let mut primes: Vec<u64> = self
            .coeffs
            .iter()
            .flat_map(odd_primes_of_square_class)
            .collect();
        primes.sort_unstable();
        primes.dedup();
        let mut out = vec![Place::Real, Place::Prime(2)];
        out.extend(primes.into_iter().map(Place::Prime));
        out
    }
}

impl fmt::Display for DiagonalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "<{}>", parts.join(","))
    }
}

/// Hilbert symbol (a, b)_v: +1 iff z^2 = a x^2 + b y^2 has a nontrivial
/// solution over the completion at v.
pub fn hilbert_symbol(a: &BigRational, b: &BigRational, v: Place) -> i8 {
    assert!(!a.is_zero() && !b.is_zero());
    match v {
        Place::Real => {
            if a.is_negative() && b.is_negative() {
                -1
            } else {
                1
            }
        }
        Place::Prime(2) => {
            let va = vp(a, 2).unwrap();
            let vb = vp(b, 2).unwrap();
            let u = unit_part(a, 2);
            let w = unit_part(b, 2);
            let eps = |x: &BigRational| -> i64 {
                // (x - 1)/2 mod 2 for odd x, read off x mod 4.
                i64::from(residue(x, 2, 2) == BigInt::from(3))
            };
            let omega = |x: &BigRational| -> i64 {
                // (x^2 - 1)/8 mod 2 for odd x, read off x mod 8.
                let r = residue(x, 2, 3);
                i64::from(r == BigInt::from(3) || r == BigInt::from(5))
            };
            let e = eps(&u) * eps(&w) + va * omega(&w) + vb * omega(&u);
            if e % 2 == 0 {
                1
            } else {
                -1
            }
        }
        Place::Prime(p) => {
            assert!(p > 2 && exact::is_prime_u64(p), "place must be prime");
            let va = vp(a, p).unwrap();
            let vb = vp(b, p).unwrap();
            let lu = i64::from(legendre(&residue(&unit_part(a, p), p, 1), p));
            let lw = i64::from(legendre(&residue(&unit_part(b, p), p, 1), p));
            let eps_p = ((p - 1) / 2) as i64;
            let mut sign = 1i64;
            if (va * vb * eps_p) % 2 != 0 {
                sign = -sign;
            }
            if vb % 2 != 0 && lu == -1 {
                sign = -sign;
            }
            if va % 2 != 0 && lw == -1 {
                sign = -sign;
            }
            sign as i8
        }
    }
}

fn is_square_at(q: &BigRational, v: Place) -> bool {
    match v {
        Place::Real => q.is_positive(),
        Place::Prime(2) => is_square_q2(q),
        Place::Prime(p) => is_square_qp(q, p),
    }
}

/// Hasse invariant: product of hilbert_symbol(a_i, a_j, v) over i < j.
fn hasse_invariant(f: &DiagonalForm, v: Place) -> i8 {
    let c = f.coeffs();
    let mut s = 1i8;
    for i in 0..c.len() {
        for j in (i + 1)..c.len() {
            s *= hilbert_symbol(&c[i], &c[j], v);
        }
    }
    s
}

/// Does the form represent zero nontrivially over the completion at `v`?
/// Standard dimension-by-dimension criteria; dimension 4 uses the
/// discriminant/Hasse-invariant test.
pub fn is_isotropic_local(f: &DiagonalForm, v: Place) -> Result<bool> {
    let c = f.coeffs();
    match c.len() {
        1 => Ok(false),
        2 => Ok(is_square_at(&(-(&c[0] * &c[1])), v)),
        3 => {
            let a = -(&c[0] * &c[2]);
            let b = -(&c[1] * &c[2]);
            Ok(hilbert_symbol(&a, &b, v) == 1)
        }
        4 => match v {
            Place::Real => {
                let pos = c.iter().filter(|x| x.is_positive()).count();
                Ok(pos != 0 && pos != 4)
            }
            _ => {
                let disc = c.iter().fold(BigRational::one(), |acc, x| acc * x);
                if !is_square_at(&disc, v) {
                    return Ok(true);
                }
                let minus_one = -BigRational::one();
                Ok(hasse_invariant(f, v) == hilbert_symbol(&minus_one, &minus_one, v))
            }
        },
        n => Err(Error::UnsupportedDimension(n)),
    }
}

/// Hasse-Minkowski isotropy decision over Q, together with the list of
/// anisotropic places among the relevant ones (every possibly-failing place
/// for dim >= 3; see [`DiagonalForm::relevant_places`]).
pub fn is_isotropic_global(f: &DiagonalForm) -> Result<(bool, Vec<Place>)> {
    let mut failing = Vec::new();
    for v in f.relevant_places() {
        if !is_isotropic_local(f, v)? {
            failing.push(v);
        }
    }
    Ok((failing.is_empty(), failing))
}

/// Eq.-(4) criterion: does -1 have a square root in the division algebra
/// (alpha, beta)_Q? Equivalently, is <1, alpha, beta, -alpha beta>
/// isotropic over Q?
pub fn minus_one_in_d2(alpha: &BigRational, beta: &BigRational) -> Result<bool> {
    let norm_form = DiagonalForm::new(vec![
        BigRational::one(),
        -alpha.clone(),
        -beta.clone(),
        alpha * beta,
    ])?;
    if is_isotropic_global(&norm_form)?.0 {
        return Err(Error::NotDivisionAlgebra {
            alpha: alpha.to_string(),
            beta: beta.to_string(),
        });
    }
    let f = DiagonalForm::new(vec![
        BigRational::one(),
        alpha.clone(),
        beta.clone(),
        -(alpha * beta),
    ])?;
    Ok(is_isotropic_global(&f)?.0)
}

/// Replace e2 by e2' = lambda e2 + mu e4 so that alpha' = (e2')^2 =
/// lambda^2 alpha - mu^2 alpha beta is a unit square in Q_p. Returns
/// (alpha', lambda, mu); the identity (alpha, 1, 0) when alpha is already a
/// square in Q_p.
///
/// The search runs over integer pairs of increasing height; since the binary
/// form with unit coefficients represents every residue class mod p, a pair
/// of height at most p always works.
pub fn lemma1_normalize(
    alpha: &BigRational,
    beta: &BigRational,
    p: u64,
) -> Result<(BigRational, BigRational, BigRational)> {
    assert!(p > 2);
    if vp(alpha, p) != Some(0) || vp(beta, p) != Some(0) {
        return Err(Error::InadmissiblePrime {
            p,
            reason: "alpha and beta must be p-adic units".into(),
        });
    }
    if is_square_qp(alpha, p) {
        return Ok((alpha.clone(), BigRational::one(), BigRational::zero()));
    }
    let ab = alpha * beta;
    for h in 1..=(p as i64 + 2) {
        for lam in 0..=h {
            for mu in 0..=h {
                if lam.max(mu) != h && h > 1 {
                    continue; // already tried at smaller height
                }
                if lam == 0 && mu == 0 {
                    continue;
                }
                let l = exact::rat(lam);
                let m = exact::rat(mu);
                let alpha_prime = &(&l * &l) * alpha - &(&(&m * &m) * &ab);
                if alpha_prime.is_zero() || vp(&alpha_prime, p) != Some(0) {
                    continue;
                }
                if is_square_qp(&alpha_prime, p) {
                    return Ok((alpha_prime, l, m));
                }
            }
        }
    }
    unreachable!("the binary form <alpha, -alpha beta> represents a unit square mod {p}");
}
