//! Capped-precision p-adic arithmetic for odd primes.
//!
//! A nonzero element is stored as `p^val * unit + O(p^(val+prec))` with
//! `unit` a p-adic unit reduced modulo `p^prec`. A value all of whose known
//! digits vanish is stored as the marker `O(p^bound)`: zero *to that
//! precision*, nothing more. Precision is min-propagated through every
//! operation and shrinks on cancellation, so an element never claims more
//! digits than its inputs justify.
//!
//! There is deliberately no `==`: equality of capped-precision values is
//! meaningless, use [`Padic::eq_mod`] with an explicit modulus.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{self, pk};

#[derive(Clone, Debug)]
enum Repr {
    /// The value is congruent to 0 mod p^bound; nothing is known beyond.
    Zero { bound: i64 },
    /// p^val * unit + O(p^(val+prec)), with 1 <= unit < p^prec and p not
    /// dividing unit.
    Unit { val: i64, unit: BigInt, prec: u32 },
}

/// A p-adic number known to finitely many significant digits.
#[derive(Clone, Debug)]
pub struct Padic {
    p: u64,
    repr: Repr,
}

/// Which of the two Hensel lifts of a square root to return.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootChoice {
    /// The root whose leading digit is the given residue mod p.
    LeadingDigit(u64),
    /// The root whose leading digit is the smaller of the two candidates.
    SmallestLeadingDigit,
}

impl Padic {
    fn check_same_prime(&self, other: &Padic) {
        assert_eq!(self.p, other.p, "mixed primes in p-adic arithmetic");
    }

    /// Normalize digits known modulo p^known into canonical representation.
    /// Digits at exponents >= known are discarded.
    fn make(p: u64, low_exp: i64, digits: BigInt, known: i64) -> Padic {
        if known <= low_exp {
            return Padic {
                p,
                repr: Repr::Zero { bound: known },
            };
        }
        let width = u32::try_from(known - low_exp).expect("precision fits u32");
        let m = pk(p, width);
        let digits = digits.mod_floor(&m);
        if digits.is_zero() {
            return Padic {
                p,
                repr: Repr::Zero { bound: known },
            };
        }
        let shift = exact::vp_int(&digits, p).expect("nonzero digits");
        let val = low_exp + shift;
        let unit = digits / pk(p, u32::try_from(shift).unwrap());
        let prec = u32::try_from(known - val).expect("positive precision");
        Padic {
            p,
            repr: Repr::Unit { val, unit, prec },
        }
    }

    pub fn zero_to(p: u64, bound: i64) -> Padic {
        Padic {
            p,
            repr: Repr::Zero { bound },
        }
    }

    pub fn one(p: u64, prec: u32) -> Padic {
        Padic::from_integer(1, p, prec)
    }

    pub fn from_integer(n: i64, p: u64, prec: u32) -> Padic {
        Padic::from_rational(&BigRational::from(BigInt::from(n)), p, prec)
    }

    /// Embed a rational into Q_p with `prec` significant digits.
    pub fn from_rational(q: &BigRational, p: u64, prec: u32) -> Padic {
        assert!(p > 2, "Padic requires an odd prime");
        assert!(prec >= 1);
        if q.is_zero() {
            return Padic::zero_to(p, prec as i64);
        }
        let val = exact::vp(q, p).unwrap();
        let unit = exact::residue(&exact::unit_part(q, p), p, prec);
        Padic {
            p,
            repr: Repr::Unit { val, unit, prec },
        }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    /// Valuation, when a leading digit is known. `None` for a zero marker,
    /// whose true valuation is only bounded below by [`Padic::known_to`].
    pub fn val(&self) -> Option<i64> {
        match &self.repr {
            Repr::Zero { .. } => None,
            Repr::Unit { val, .. } => Some(*val),
        }
    }

    pub fn is_zero_marker(&self) -> bool {
        matches!(self.repr, Repr::Zero { .. })
    }

    /// The exponent k such that the value is known modulo p^k.
    pub fn known_to(&self) -> i64 {
        match &self.repr {
            Repr::Zero { bound } => *bound,
            Repr::Unit { val, prec, .. } => val + *prec as i64,
        }
    }

    /// Significant digits of the unit part, if any.
    pub fn precision(&self) -> Option<u32> {
        match &self.repr {
            Repr::Zero { .. } => None,
            Repr::Unit { prec, .. } => Some(*prec),
        }
    }

    pub fn unit_digits(&self) -> Option<&BigInt> {
        match &self.repr {
            Repr::Zero { .. } => None,
            Repr::Unit { unit, .. } => Some(unit),
        }
    }

    /// Leading digit (unit mod p); `None` for zero markers.
    pub fn leading_digit(&self) -> Option<u64> {
        self.unit_digits()
            .map(|u| u64::try_from(&u.mod_floor(&BigInt::from(self.p))).unwrap())
    }

    /// Forget digits beyond exponent `known`.
    pub fn truncate_known(&self, known: i64) -> Padic {
        if known >= self.known_to() {
            return self.clone();
        }
        match &self.repr {
            Repr::Zero { .. } => Padic::zero_to(self.p, known),
            Repr::Unit { val, unit, .. } => Padic::make(self.p, *val, unit.clone(), known),
        }
    }

    pub fn add(&self, other: &Padic) -> Padic {
        self.check_same_prime(other);
        let known = self.known_to().min(other.known_to());
        match (&self.repr, &other.repr) {
            (Repr::Zero { .. }, Repr::Zero { .. }) => Padic::zero_to(self.p, known),
            (Repr::Zero { .. }, Repr::Unit { val, unit, .. })
            | (Repr::Unit { val, unit, .. }, Repr::Zero { .. }) => {
                Padic::make(self.p, *val, unit.clone(), known)
            }
            (
                Repr::Unit {
                    val: v1, unit: u1, ..
                },
                Repr::Unit {
                    val: v2, unit: u2, ..
                },
            ) => {
                let low = (*v1).min(*v2);
                let d1 = u1 * pk(self.p, u32::try_from(v1 - low).unwrap());
                let d2 = u2 * pk(self.p, u32::try_from(v2 - low).unwrap());
                Padic::make(self.p, low, d1 + d2, known)
            }
        }
    }

    pub fn neg(&self) -> Padic {
        match &self.repr {
            Repr::Zero { .. } => self.clone(),
            Repr::Unit { val, unit, prec } => Padic {
                p: self.p,
                repr: Repr::Unit {
                    val: *val,
                    unit: pk(self.p, *prec) - unit,
                    prec: *prec,
                },
            },
        }
    }

    pub fn sub(&self, other: &Padic) -> Padic {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Padic) -> Padic {
        self.check_same_prime(other);
        match (&self.repr, &other.repr) {
            (Repr::Zero { bound: b1 }, Repr::Zero { bound: b2 }) => {
                Padic::zero_to(self.p, b1 + b2)
            }
            (Repr::Zero { bound }, Repr::Unit { val, .. })
            | (Repr::Unit { val, .. }, Repr::Zero { bound }) => {
                Padic::zero_to(self.p, bound + val)
            }
            (
                Repr::Unit {
                    val: v1,
                    unit: u1,
                    prec: p1,
                },
                Repr::Unit {
                    val: v2,
                    unit: u2,
                    prec: p2,
                },
            ) => {
                let prec = (*p1).min(*p2);
                let unit = (u1 * u2).mod_floor(&pk(self.p, prec));
                Padic {
                    p: self.p,
                    repr: Repr::Unit {
                        val: v1 + v2,
                        unit,
                        prec,
                    },
                }
            }
        }
    }

    /// Multiplicative inverse; relative precision is preserved.
    pub fn inv(&self) -> Result<Padic> {
        match &self.repr {
            Repr::Zero { .. } => Err(Error::DivisionByZeroToPrecision),
            Repr::Unit { val, unit, prec } => {
                let m = pk(self.p, *prec);
                let unit = exact::mod_inverse(unit, &m).expect("unit is invertible");
                Ok(Padic {
                    p: self.p,
                    repr: Repr::Unit {
                        val: -val,
                        unit,
                        prec: *prec,
                    },
                })
            }
        }
    }

    pub fn div(&self, other: &Padic) -> Result<Padic> {
        Ok(self.mul(&other.inv()?))
    }

    /// Multiply by an exact rational (embedded at matching precision).
    pub fn mul_rational(&self, q: &BigRational) -> Padic {
        let prec = match &self.repr {
            Repr::Zero { .. } => 1,
            Repr::Unit { prec, .. } => *prec,
        };
        if q.is_zero() {
            // The product is exactly zero; the marker keeps what was known.
            return Padic::zero_to(self.p, self.known_to());
        }
        self.mul(&Padic::from_rational(q, self.p, prec))
    }

    /// Decide x = y mod p^k, or report that the inputs do not carry enough
    /// digits to decide.
    pub fn eq_mod(&self, other: &Padic, k: i64) -> Result<bool> {
        let d = self.sub(other);
        match &d.repr {
            Repr::Zero { bound } => {
                if *bound >= k {
                    Ok(true)
                } else {
                    Err(Error::InsufficientPrecision(format!(
                        "difference known to O(p^{bound}), need mod p^{k}"
                    )))
                }
            }
            Repr::Unit { val, .. } => Ok(*val >= k),
        }
    }

    /// Certified lower bound for the valuation of `self - other`.
    pub fn diff_valuation_at_least(&self, other: &Padic, k: i64) -> bool {
        matches!(self.eq_mod(other, k), Ok(true))
    }

    /// The exact rational p^val * unit carrying every known digit.
    /// Zero markers lift to 0.
    pub fn to_rational_truncated(&self) -> BigRational {
        match &self.repr {
            Repr::Zero { .. } => BigRational::zero(),
            Repr::Unit { val, unit, .. } => {
                let u = BigRational::from(unit.clone());
                let pb = BigRational::from(BigInt::from(self.p));
                if *val >= 0 {
                    u * pb.pow(*val as i32)
                } else {
                    u / pb.pow((-*val) as i32)
                }
            }
        }
    }

    /// Square root by Hensel lifting from the selected mod-p root, doubling
    /// digits each step. Requires even valuation and a square unit part.
    pub fn sqrt(&self, choice: RootChoice) -> Result<Padic> {
        let p = self.p;
        let (val, unit, prec) = match &self.repr {
            Repr::Zero { .. } => {
                return Err(Error::NotASquare {
                    p,
                    reason: "zero to precision has no well-defined square root".into(),
                })
            }
            Repr::Unit { val, unit, prec } => (*val, unit.clone(), *prec),
        };
        if val % 2 != 0 {
            return Err(Error::NotASquare {
                p,
                reason: format!("odd valuation {val}"),
            });
        }
        let a0 = unit.mod_floor(&BigInt::from(p));
        if exact::legendre(&a0, p) != 1 {
            return Err(Error::NotASquare {
                p,
                reason: format!("unit part {a0} is not a quadratic residue mod {p}"),
            });
        }
        // Root mod p by brute force over the p residues; p is small here and
        // this doubles as the base case of the lift.
        let mut r0 = BigInt::one();
        for d in 1..p {
            let db = BigInt::from(d);
            if (&db * &db).mod_floor(&BigInt::from(p)) == a0 {
                r0 = db;
                break;
            }
        }
        let digit = |r: &BigInt| u64::try_from(&r.mod_floor(&BigInt::from(p))).unwrap();
        let wanted = match choice {
            RootChoice::LeadingDigit(d) => {
                let d = d % p;
                if digit(&r0) != d && (p - digit(&r0)) != d {
                    return Err(Error::NotASquare {
                        p,
                        reason: format!("no square root with leading digit {d}"),
                    });
                }
                d
            }
            RootChoice::SmallestLeadingDigit => digit(&r0).min(p - digit(&r0)),
        };
        if digit(&r0) != wanted {
            r0 = BigInt::from(p) - r0;
        }
        // Newton iteration x <- x - (x^2 - a) / (2x), doubling precision.
        let mut x = r0;
        let mut k = 1u32;
        while k < prec {
            k = (2 * k).min(prec);
            let m = pk(p, k);
            let two_x_inv = exact::mod_inverse(&(BigInt::from(2) * &x), &m)
                .expect("2x is a unit for odd p");
            let fx = (&x * &x - &unit).mod_floor(&m);
            x = (&x - fx * two_x_inv).mod_floor(&m);
        }
        debug_assert_eq!((&x * &x).mod_floor(&pk(p, prec)), unit.mod_floor(&pk(p, prec)));
        Ok(Padic {
            p,
            repr: Repr::Unit {
                val: val / 2,
                unit: x,
                prec,
            },
        })
    }
}

impl Padic {
    /// Certified "value = 0 mod p^k", erring when too few digits are known.
    pub fn is_zero_mod(&self, k: i64) -> Result<bool> {
        match &self.repr {
            Repr::Zero { bound } => {
                if *bound >= k {
                    Ok(true)
                } else {
                    Err(Error::InsufficientPrecision(format!(
                        "value known to O(p^{bound}), need mod p^{k}"
                    )))
                }
            }
            Repr::Unit { val, .. } => Ok(*val >= k),
        }
    }
}

impl std::ops::Add for &Padic {
    type Output = Padic;
    fn add(self, rhs: &Padic) -> Padic {
        Padic::add(self, rhs)
    }
}

impl std::ops::Sub for &Padic {
    type Output = Padic;
    fn sub(self, rhs: &Padic) -> Padic {
        Padic::sub(self, rhs)
    }
}

impl std::ops::Mul for &Padic {
    type Output = Padic;
    fn mul(self, rhs: &Padic) -> Padic {
        Padic::mul(self, rhs)
    }
}

impl std::ops::Neg for &Padic {
    type Output = Padic;
    fn neg(self) -> Padic {
        Padic::neg(self)
    }
}

impl fmt::Display for Padic {
    /// Digit-list form: "...d2 d1 d0 x p^val (mod p^(val+N))".
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Zero { bound } => write!(f, "O({}^{})", self.p, bound),
            Repr::Unit { val, unit, prec } => {
                let p = BigInt::from(self.p);
                let mut digits = Vec::with_capacity(*prec as usize);
                let mut u = unit.clone();
                for _ in 0..*prec {
                    let (q, r) = u.div_rem(&p);
                    digits.push(r.to_string());
                    u = q;
                }
                digits.reverse();
                write!(
                    f,
                    "{} x {}^{} (mod {}^{})",
                    digits.join(" "),
                    self.p,
                    val,
                    self.p,
                    val + *prec as i64
                )
            }
        }
    }
}
