//! The explicit splitting D_p -> M_2(Q_p) and the constructive density
//! approximations.
//!
//! A [`SplitContext`] fixes everything the splitting needs at one prime:
//! the (possibly renormalized) basis in which alpha is a p-adic square, the
//! chosen square root, and the working precision. The splitting sends
//!
//! ```text
//! x1 + x2 e2 + x3 e3 + x4 e4  |->  [[x1 + x2 s,  beta (x3 + x4 s)],
//!                                   [x3 - x4 s,  x1 - x2 s]]
//! ```
//!
//! with s^2 = alpha. Density of the norm-1 group G(Q) in G(Q_p) is made
//! effective here: a target matrix is split into unipotent factors, each
//! factor is halved, pulled back to the algebra, rounded to rational
//! coordinates, and renormalized to exact norm 1 via x^2/N(x). The result is
//! certified by re-splitting and checking the congruence, with a retry at
//! higher precision on failure.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{self, vp};
use crate::forms;
use crate::mat2::Mat2;
use crate::padic::{Padic, RootChoice};
use crate::quat::{Quaternion, QuaternionAlgebra};

/// Quaternion over Q_p in the *normalized* basis (the one where alpha' is a
/// square), as produced by [`SplitContext::unsplit`].
#[derive(Clone, Debug)]
pub struct PadicQuaternion {
    pub coords: [Padic; 4],
}

/// Everything needed to evaluate the splitting at one odd prime.
#[derive(Clone, Debug)]
pub struct SplitContext {
    algebra: QuaternionAlgebra,
    p: u64,
    prec: u32,
    /// Basis change e2' = lambda e2 + mu e4 with (e2')^2 = alpha'.
    alpha_prime: BigRational,
    lambda: BigRational,
    mu: BigRational,
    /// lambda^2 - beta mu^2 = alpha'/alpha, the determinant of the change.
    basis_det: BigRational,
    /// Square root of alpha' with the smallest positive leading digit.
    sqrt_alpha: Padic,
    beta_p: Padic,
}

impl SplitContext {
    pub fn new(algebra: &QuaternionAlgebra, p: u64, prec: u32) -> Result<Self> {
        if p == 2 || !exact::is_prime_u64(p) {
            return Err(Error::InadmissiblePrime {
                p,
                reason: "splitting requires an odd prime".into(),
            });
        }
        if vp(algebra.alpha(), p) != Some(0) || vp(algebra.beta(), p) != Some(0) {
            return Err(Error::InadmissiblePrime {
                p,
                reason: "alpha and beta must be p-adic units".into(),
            });
        }
        let (alpha_prime, lambda, mu) =
            forms::lemma1_normalize(algebra.alpha(), algebra.beta(), p)?;
        let basis_det = &(&lambda * &lambda) - &(algebra.beta() * &(&mu * &mu));
        let sqrt_alpha =
            Padic::from_rational(&alpha_prime, p, prec).sqrt(RootChoice::SmallestLeadingDigit)?;
        Ok(SplitContext {
            algebra: algebra.clone(),
            p,
            prec,
            alpha_prime,
            lambda,
            mu,
            basis_det,
            sqrt_alpha,
            beta_p: Padic::from_rational(algebra.beta(), p, prec),
        })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn algebra(&self) -> &QuaternionAlgebra {
        &self.algebra
    }

    pub fn alpha_prime(&self) -> &BigRational {
        &self.alpha_prime
    }

    pub fn basis_change(&self) -> (&BigRational, &BigRational) {
        (&self.lambda, &self.mu)
    }

    pub fn sqrt_alpha(&self) -> &Padic {
        &self.sqrt_alpha
    }

    /// Original-basis coordinates -> normalized-basis coordinates.
    pub fn to_normalized(&self, x: &Quaternion) -> [BigRational; 4] {
        let [x1, x2, x3, x4] = &x.coords;
        let (l, m, b) = (&self.lambda, &self.mu, self.algebra.beta());
        let d = &self.basis_det;
        [
            x1.clone(),
            (l * x2 - &(m * b) * x4) / d,
            x3.clone(),
            (l * x4 - m * x2) / d,
        ]
    }

    /// Normalized-basis coordinates -> original-basis coordinates.
    pub fn to_original(&self, y: &[BigRational; 4]) -> Quaternion {
        let [y1, y2, y3, y4] = y;
        let (l, m, b) = (&self.lambda, &self.mu, self.algebra.beta());
        self.algebra.element([
            y1.clone(),
            l * y2 + &(m * b) * y4,
            y3.clone(),
            m * y2 + l * y4,
        ])
    }

    fn embed(&self, q: &BigRational) -> Padic {
        Padic::from_rational(q, self.p, self.prec)
    }

    /// The splitting map on exact quaternions (any basis normalization is
    /// applied internally).
    pub fn split(&self, x: &Quaternion) -> Mat2<Padic> {
        let y = self.to_normalized(x);
        self.split_normalized(&PadicQuaternion {
            coords: [
                self.embed(&y[0]),
                self.embed(&y[1]),
                self.embed(&y[2]),
                self.embed(&y[3]),
            ],
        })
    }

    /// The splitting map on normalized-basis p-adic quaternions.
    pub fn split_normalized(&self, y: &PadicQuaternion) -> Mat2<Padic> {
        let [y1, y2, y3, y4] = &y.coords;
        let s = &self.sqrt_alpha;
        let y2s = y2 * s;
        let y4s = y4 * s;
        Mat2 {
            a: y1 + &y2s,
            b: &self.beta_p * &(y3 + &y4s),
            c: y3 - &y4s,
            d: y1 - &y2s,
        }
    }

    /// Linear inverse of the splitting: matrix -> normalized-basis
    /// coordinates.
    pub fn unsplit(&self, m: &Mat2<Padic>) -> Result<PadicQuaternion> {
        let two_inv = Padic::from_integer(2, self.p, self.prec).inv()?;
        let s_inv = self.sqrt_alpha.inv()?;
        let b_over = m.b.div(&self.beta_p)?;
        let y1 = &(&m.a + &m.d) * &two_inv;
        let y2 = &(&(&m.a - &m.d) * &two_inv) * &s_inv;
        let y3 = &(&b_over + &m.c) * &two_inv;
        let y4 = &(&(&b_over - &m.c) * &two_inv) * &s_inv;
        Ok(PadicQuaternion {
            coords: [y1, y2, y3, y4],
        })
    }

    /// Round a normalized-basis p-adic quaternion to the exact rational
    /// quaternion (original basis) carrying all its known digits.
    pub fn round_to_rational(&self, y: &PadicQuaternion) -> Quaternion {
        let coords = [
            y.coords[0].to_rational_truncated(),
            y.coords[1].to_rational_truncated(),
            y.coords[2].to_rational_truncated(),
            y.coords[3].to_rational_truncated(),
        ];
        self.to_original(&coords)
    }

    /// Quaternion multiplication in the normalized basis over Q_p.
    pub fn mul_normalized(&self, x: &PadicQuaternion, y: &PadicQuaternion) -> PadicQuaternion {
        let a = self.embed(&self.alpha_prime);
        let b = &self.beta_p;
        let ab = &a * b;
        let [x1, x2, x3, x4] = &x.coords;
        let [y1, y2, y3, y4] = &y.coords;
        let z1 = &(&(x1 * y1) + &(&a * &(x2 * y2)))
            + &(&(b * &(x3 * y3)) - &(&ab * &(x4 * y4)));
        let z2 = &(&(x1 * y2) + &(x2 * y1)) + &(&(b * &(x4 * y3)) - &(b * &(x3 * y4)));
        let z3 = &(&(x1 * y3) + &(x3 * y1)) + &(&(&a * &(x2 * y4)) - &(&a * &(x4 * y2)));
        let z4 = &(&(x1 * y4) + &(x4 * y1)) + &(&(x2 * y3) - &(x3 * y2));
        PadicQuaternion {
            coords: [z1, z2, z3, z4],
        }
    }

    pub fn conj_normalized(&self, x: &PadicQuaternion) -> PadicQuaternion {
        PadicQuaternion {
            coords: [
                x.coords[0].clone(),
                x.coords[1].neg(),
                x.coords[2].neg(),
                x.coords[3].neg(),
            ],
        }
    }

    /// Reduced norm in the normalized basis.
    pub fn norm_normalized(&self, x: &PadicQuaternion) -> Padic {
        let a = self.embed(&self.alpha_prime);
        let b = &self.beta_p;
        let ab = &a * b;
        let [x1, x2, x3, x4] = &x.coords;
        &(&(x1 * x1) - &(&a * &(x2 * x2))) + &(&(&ab * &(x4 * x4)) - &(b * &(x3 * x3)))
    }
}

/// An elementary (strictly triangular) factor of an SL2 decomposition.
#[derive(Clone, Debug)]
pub struct Elementary {
    pub lower: bool,
    pub t: Padic,
}

impl Elementary {
    pub fn matrix(&self, prec_hint: u32) -> Mat2<Padic> {
        let p = self.t.prime();
        let one = Padic::one(p, prec_hint);
        let zero = Padic::zero_to(p, prec_hint as i64);
        if self.lower {
            Mat2::new(one.clone(), zero, self.t.clone(), one)
        } else {
            Mat2::new(one.clone(), self.t.clone(), zero, one)
        }
    }
}

/// Decompose an SL2(Q_p) matrix (det = 1 to precision) into at most four
/// elementary factors. When the (2,1) entry is zero to precision, a lower
/// unipotent is split off first to make it a unit.
pub fn elementary_decompose(h: &Mat2<Padic>) -> Result<Vec<Elementary>> {
    let p = h.prime();
    if !h.c.is_zero_marker() {
        let prec_hint = h.a.known_to().max(1) as u32 + 4;
        let one = Padic::one(p, prec_hint);
        let c_inv = h.c.inv()?;
        let u1 = &(&h.a - &one) * &c_inv;
        let u2 = &(&h.d - &one) * &c_inv;
        Ok(vec![
            Elementary { lower: false, t: u1 },
            Elementary {
                lower: true,
                t: h.c.clone(),
            },
            Elementary { lower: false, t: u2 },
        ])
    } else if !h.a.is_zero_marker() {
        // h = L(-1) * (L(1) h); the premultiplied matrix has c' = a + c, a
        // unit because c vanishes to precision while a does not.
        let shifted = Mat2::new(h.a.clone(), h.b.clone(), &h.a + &h.c, &h.b + &h.d);
        let hint = shifted.c.known_to().max(1) as u32;
        let mut factors = vec![Elementary {
            lower: true,
            t: Padic::from_integer(-1, p, hint),
        }];
        factors.extend(elementary_decompose(&shifted)?);
        Ok(factors)
    } else {
        Err(Error::InsufficientPrecision(
            "both a and c are zero to precision; cannot pivot the decomposition".into(),
        ))
    }
}

/// One unipotent density step (the x^2/N(x) trick): approximate E(t) by an
/// exact-norm-1 rational quaternion, writing E(t) = E(t/2)^2 and normalizing
/// the rounded pullback of E(t/2).
fn approximate_elementary(ctx: &SplitContext, e: &Elementary) -> Result<Quaternion> {
    let half = e.t.mul_rational(&exact::ratio(1, 2));
    let half_mat = Elementary {
        lower: e.lower,
        t: half,
    }
    .matrix(ctx.precision());
    let y = ctx.unsplit(&half_mat)?;
    let rounded = ctx.round_to_rational(&y);
    ctx.algebra().normalize_to_norm1(&rounded)
}

/// A rational quaternion of exact norm 1 whose split agrees with `h`
/// entrywise mod p^digits. Errors with `InsufficientPrecision` when the
/// context cannot certify the congruence; callers with exactly-known targets
/// should retry at higher precision (see [`approximate_rational_matrix`]).
pub fn approximate_in_g(ctx: &SplitContext, h: &Mat2<Padic>, digits: u32) -> Result<Quaternion> {
    let one = Padic::one(ctx.prime(), ctx.precision());
    let det = h.det();
    let det_level = (digits as i64).min(det.known_to());
    if !det.eq_mod(&one, det_level)? {
        return Err(Error::InvalidMatrix(format!(
            "target determinant is not 1 mod p^{det_level}"
        )));
    }
    let factors = elementary_decompose(h)?;
    let alg = ctx.algebra();
    let mut result = alg.one();
    for e in &factors {
        let g = approximate_elementary(ctx, e)?;
        result = alg.mul(&result, &g);
    }
    debug_assert_eq!(alg.norm(&result), BigRational::one());
    // Certify: the split of the product must match the target.
    let resplit = ctx.split(&result);
    if !resplit.eq_mod(h, digits as i64)? {
        return Err(Error::InsufficientPrecision(format!(
            "certification failed at mod p^{digits}; retry with a larger margin"
        )));
    }
    Ok(result)
}

/// Working-precision schedule: target digits plus twice the largest
/// |valuation| among decomposition parameters, plus a flat margin.
fn margin_for(h: &Mat2<Padic>, digits: u32) -> u32 {
    let vmax = match elementary_decompose(h) {
        Ok(factors) => factors
            .iter()
            .filter_map(|e| e.t.val())
            .map(|v| v.unsigned_abs() as u32)
            .max()
            .unwrap_or(0),
        Err(_) => h.max_abs_valuation() as u32,
    };
    digits + 2 * vmax + 4
}

/// Approximate an exactly-known SL2(Q) target: builds contexts on a doubling
/// margin schedule until certification succeeds.
pub fn approximate_rational_matrix(
    algebra: &QuaternionAlgebra,
    p: u64,
    m: &Mat2<BigRational>,
    digits: u32,
) -> Result<(Quaternion, SplitContext)> {
    if m.det() != BigRational::one() {
        return Err(Error::InvalidMatrix(
            "target must have determinant 1".into(),
        ));
    }
    let mut prec = margin_for(&m.embed(p, digits + 4), digits);
    let mut last_err = None;
    for _ in 0..6 {
        let ctx = SplitContext::new(algebra, p, prec)?;
        match approximate_in_g(&ctx, &m.embed(p, prec), digits) {
            Ok(q) => return Ok((q, ctx)),
            Err(e @ Error::InsufficientPrecision(_)) => {
                last_err = Some(e);
                prec *= 2;
            }
            Err(e) => return Err(e),
        }
    }
    Err(last_err
        .unwrap_or_else(|| Error::InsufficientPrecision("margin schedule exhausted".into())))
}

/// A rational quaternion of exact norm 1 in the torus (x3 = x4 = 0 in the
/// normalized basis) with split = diag(lambda, lambda^-1) mod p^digits.
pub fn approximate_torus(ctx: &SplitContext, lambda: &Padic, digits: u32) -> Result<Quaternion> {
    let alg = ctx.algebra();
    let one = Padic::one(ctx.prime(), ctx.precision());
    let lm1 = lambda - &one;
    // lambda = 1 to the target precision: the identity already works.
    if lm1.is_zero_mod(digits as i64).unwrap_or(false) {
        return Ok(alg.one());
    }
    if lm1.is_zero_marker() {
        return Err(Error::InsufficientPrecision(
            "lambda - 1 vanishes to working precision but not to target precision".into(),
        ));
    }
    // x solves lambda = (x + sqrt(alpha)) / (x - sqrt(alpha)).
    let lp1 = lambda + &one;
    let x = &(ctx.sqrt_alpha() * &lp1) * &lm1.inv()?;
    let x1 = x.to_rational_truncated();
    let e2_prime = ctx.to_original(&[
        BigRational::zero(),
        BigRational::one(),
        BigRational::zero(),
        BigRational::zero(),
    ]);
    let scalar = alg.element([
        x1,
        BigRational::zero(),
        BigRational::zero(),
        BigRational::zero(),
    ]);
    let g = alg.normalize_to_norm1(&alg.add(&scalar, &e2_prime))?;
    debug_assert_eq!(alg.norm(&g), BigRational::one());
    let resplit = ctx.split(&g);
    let ok = resplit.a.eq_mod(lambda, digits as i64)?
        && resplit.d.eq_mod(&lambda.inv()?, digits as i64)?
        && resplit.b.is_zero_mod(digits as i64)?
        && resplit.c.is_zero_mod(digits as i64)?;
    if !ok {
        return Err(Error::InsufficientPrecision(format!(
            "torus certification failed at mod p^{digits}"
        )));
    }
    Ok(g)
}

/// Torus approximation for an exactly-known rational lambda, with the retry
/// schedule.
pub fn approximate_torus_rational(
    algebra: &QuaternionAlgebra,
    p: u64,
    lambda: &BigRational,
    digits: u32,
) -> Result<(Quaternion, SplitContext)> {
    if lambda.is_zero() {
        return Err(Error::BadInput("lambda must be nonzero".into()));
    }
    let v = vp(lambda, p).unwrap().unsigned_abs() as u32;
    let mut prec = digits + 2 * v + 4;
    let mut last_err = None;
    for _ in 0..6 {
        let ctx = SplitContext::new(algebra, p, prec)?;
        match approximate_torus(&ctx, &Padic::from_rational(lambda, p, prec), digits) {
            Ok(q) => return Ok((q, ctx)),
            Err(e @ Error::InsufficientPrecision(_)) => {
                last_err = Some(e);
                prec *= 2;
            }
            Err(e) => return Err(e),
        }
    }
    Err(last_err.unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ratio};

    fn alg(a: i64, b: i64) -> QuaternionAlgebra {
        QuaternionAlgebra::new(rat(a), rat(b)).unwrap()
    }

    #[test]
    fn context_uses_identity_normalization_when_alpha_is_square() {
        // -2 = 1 mod 3 is a square in Q_3.
        let ctx = SplitContext::new(&alg(-2, -5), 3, 8).unwrap();
        assert_eq!(ctx.alpha_prime(), &rat(-2));
        assert_eq!(ctx.basis_change(), (&rat(1), &rat(0)));
        // sqrt(-2) = 1 mod 3 with the smallest-digit convention.
        assert_eq!(ctx.sqrt_alpha().leading_digit(), Some(1));
    }

    #[test]
    fn context_normalizes_when_needed() {
        // -1 is not a square in Q_3; the basis change (1, 1) gives -2.
        let ctx = SplitContext::new(&alg(-1, -1), 3, 8).unwrap();
        assert_eq!(ctx.alpha_prime(), &rat(-2));
        assert_eq!(ctx.basis_change(), (&rat(1), &rat(1)));
    }

    #[test]
    fn split_of_one_is_identity() {
        let ctx = SplitContext::new(&alg(-2, -5), 3, 8).unwrap();
        let m = ctx.split(&ctx.algebra().one());
        assert!(m.eq_mod(&Mat2::<Padic>::identity(3, 8), 8).unwrap());
    }

    #[test]
    fn split_of_e3_with_beta_minus_one() {
        for p in [3u64, 7] {
            let ctx = SplitContext::new(&alg(-1, -1), p, 8).unwrap();
            let m = ctx.split(&ctx.algebra().e3());
            let expected = Mat2::parse("0,-1;1,0").unwrap().embed(p, 8);
            assert!(m.eq_mod(&expected, 8).unwrap());
        }
    }

    #[test]
    fn split_of_e2_is_diag_sqrt_alpha() {
        let ctx = SplitContext::new(&alg(-2, -5), 3, 8).unwrap();
        let m = ctx.split(&ctx.algebra().e2());
        let s = ctx.sqrt_alpha();
        assert!(m.a.eq_mod(s, 8).unwrap());
        assert!(m.d.eq_mod(&s.neg(), 8).unwrap());
        assert!(m.b.is_zero_mod(8).unwrap());
        assert!(m.c.is_zero_mod(8).unwrap());
    }

    #[test]
    fn split_det_is_norm_and_multiplicative() {
        let a = alg(-2, -5);
        let ctx = SplitContext::new(&a, 3, 10).unwrap();
        let x = a.element([rat(1), ratio(2, 5), rat(-1), rat(2)]);
        let y = a.element([ratio(-1, 2), rat(1), rat(4), ratio(1, 7)]);
        let nx = Padic::from_rational(&a.norm(&x), 3, 10);
        assert!(ctx.split(&x).det().eq_mod(&nx, 9).unwrap());
        let lhs = ctx.split(&a.mul(&x, &y));
        let rhs = ctx.split(&x).mul(&ctx.split(&y));
        assert!(lhs.eq_mod(&rhs, 9).unwrap());
    }

    #[test]
    fn unsplit_inverts_split() {
        let a = alg(-1, -1);
        let ctx = SplitContext::new(&a, 3, 10).unwrap();
        let x = a.element([rat(2), ratio(1, 2), rat(-3), rat(1)]);
        let m = ctx.split(&x);
        let y = ctx.unsplit(&m).unwrap();
        let roundtrip = ctx.split_normalized(&y);
        assert!(roundtrip.eq_mod(&m, 8).unwrap());
        // The rounded pullback agrees with x to working precision.
        let back = ctx.round_to_rational(&y);
        let diff = a.add(&back, &a.scale(&x, &rat(-1)));
        for c in &diff.coords {
            if !c.is_zero() {
                assert!(vp(c, 3).unwrap() >= 8, "coordinate mismatch: {c}");
            }
        }
    }

    #[test]
    fn unsplit_of_reflection_matrix_is_e3() {
        let ctx = SplitContext::new(&alg(-1, -1), 3, 8).unwrap();
        let w = Mat2::parse("0,-1;1,0").unwrap().embed(3, 8);
        let y = ctx.unsplit(&w).unwrap();
        let q = ctx.round_to_rational(&y);
        assert_eq!(q, ctx.algebra().e3());
    }

    #[test]
    fn padic_quaternion_norm_matches_det() {
        let a = alg(-2, -5);
        let ctx = SplitContext::new(&a, 3, 10).unwrap();
        let x = a.element([rat(1), rat(2), ratio(1, 5), rat(-1)]);
        let y = ctx.unsplit(&ctx.split(&x)).unwrap();
        let n = ctx.norm_normalized(&y);
        let det = ctx.split(&x).det();
        assert!(n.eq_mod(&det, 8).unwrap());
        // conj * self has scalar part N and vanishing imaginary parts.
        let prod = ctx.mul_normalized(&ctx.conj_normalized(&y), &y);
        assert!(prod.coords[0].eq_mod(&n, 8).unwrap());
        for c in &prod.coords[1..] {
            assert!(c.is_zero_mod(8).unwrap());
        }
    }

    #[test]
    fn elementary_decomposition_reassembles() {
        let m = Mat2::parse("2,3;1,2").unwrap();
        let h = m.embed(5, 10);
        let factors = elementary_decompose(&h).unwrap();
        assert_eq!(factors.len(), 3);
        let mut prod = Mat2::<Padic>::identity(5, 10);
        for e in &factors {
            prod = prod.mul(&e.matrix(10));
        }
        assert!(prod.eq_mod(&h, 9).unwrap());
    }

    #[test]
    fn elementary_decomposition_handles_zero_corner() {
        let m = Mat2::parse("2,1;0,1/2").unwrap();
        let h = m.embed(5, 10);
        let factors = elementary_decompose(&h).unwrap();
        assert_eq!(factors.len(), 4);
        let mut prod = Mat2::<Padic>::identity(5, 10);
        for e in &factors {
            prod = prod.mul(&e.matrix(10));
        }
        assert!(prod.eq_mod(&h, 8).unwrap());
    }

    #[test]
    fn approximate_identity_target() {
        let a = alg(-2, -5);
        let (q, _ctx) =
            approximate_rational_matrix(&a, 3, &Mat2::<BigRational>::identity(), 4).unwrap();
        assert_eq!(a.norm(&q), rat(1));
    }

    #[test]
    fn approximate_unipotent_target() {
        let a = alg(-2, -5);
        let m = Mat2::parse("1,1;0,1").unwrap();
        let (q, ctx) = approximate_rational_matrix(&a, 3, &m, 4).unwrap();
        assert_eq!(a.norm(&q), rat(1));
        let resplit = ctx.split(&q);
        assert!(resplit.eq_mod(&m.embed(3, ctx.precision()), 4).unwrap());
    }

    #[test]
    fn approximate_general_target() {
        let a = alg(-2, -5);
        let m = Mat2::parse("2,3;1,2").unwrap();
        let (q, ctx) = approximate_rational_matrix(&a, 3, &m, 6).unwrap();
        assert_eq!(a.norm(&q), rat(1));
        assert!(ctx
            .split(&q)
            .eq_mod(&m.embed(3, ctx.precision()), 6)
            .unwrap());
    }

    #[test]
    fn approximate_rejects_non_sl2() {
        let a = alg(-2, -5);
        let m = Mat2::parse("2,0;0,1").unwrap();
        assert!(matches!(
            approximate_rational_matrix(&a, 3, &m, 4),
            Err(Error::InvalidMatrix(_))
        ));
    }

    #[test]
    fn torus_lambda_one_and_minus_one() {
        let a = alg(-2, -5);
        let ctx = SplitContext::new(&a, 3, 10).unwrap();
        let one = Padic::one(3, 10);
        assert_eq!(approximate_torus(&ctx, &one, 6).unwrap(), a.one());

        let minus_one = Padic::from_integer(-1, 3, 10);
        let g = approximate_torus(&ctx, &minus_one, 6).unwrap();
        // e2^2 / N(e2) = -1 |-> diag(-1, -1).
        assert_eq!(g, a.scale(&a.one(), &rat(-1)));
    }

    #[test]
    fn torus_lambda_nine_in_q3() {
        let a = alg(-2, -5);
        let (g, ctx) = approximate_torus_rational(&a, 3, &rat(9), 4).unwrap();
        assert_eq!(a.norm(&g), rat(1));
        let m = ctx.split(&g);
        assert_eq!(m.a.val(), Some(2));
        assert_eq!(m.d.val(), Some(-2));
        // x3 = x4 = 0 in the normalized basis: the torus condition.
        let y = ctx.to_normalized(&g);
        assert!(y[2].is_zero() && y[3].is_zero());
    }
}
