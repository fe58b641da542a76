//! The rational quaternion algebra (alpha, beta)_Q and its norm-1 elements.
//!
//! Basis 1, e2, e3, e4 with e2^2 = alpha, e3^2 = beta, e2 e3 = -e3 e2 = e4.
//! Construction checks the division-algebra condition (anisotropic norm
//! form), so every `QuaternionAlgebra` in circulation is a division algebra.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact;
use crate::forms;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuaternionAlgebra {
    alpha: BigRational,
    beta: BigRational,
}

/// Element x1 + x2 e2 + x3 e3 + x4 e4 with exact rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quaternion {
    pub coords: [BigRational; 4],
}

impl QuaternionAlgebra {
    /// Build (alpha, beta)_Q, verifying it is a division algebra.
    pub fn new(alpha: BigRational, beta: BigRational) -> Result<Self> {
        if alpha.is_zero() || beta.is_zero() {
            return Err(Error::BadInput("alpha and beta must be nonzero".into()));
        }
        let norm_form = forms::DiagonalForm::new(vec![
            BigRational::one(),
            -alpha.clone(),
            -beta.clone(),
            &alpha * &beta,
        ])?;
        let (isotropic, _) = forms::is_isotropic_global(&norm_form)?;
        if isotropic {
            return Err(Error::NotDivisionAlgebra {
                alpha: alpha.to_string(),
                beta: beta.to_string(),
            });
        }
        Ok(QuaternionAlgebra { alpha, beta })
    }

    pub fn alpha(&self) -> &BigRational {
        &self.alpha
    }

    pub fn beta(&self) -> &BigRational {
        &self.beta
    }

    pub fn element(&self, coords: [BigRational; 4]) -> Quaternion {
        Quaternion { coords }
    }

    pub fn one(&self) -> Quaternion {
        self.basis(0)
    }

    pub fn e2(&self) -> Quaternion {
        self.basis(1)
    }

    pub fn e3(&self) -> Quaternion {
        self.basis(2)
    }

    pub fn e4(&self) -> Quaternion {
        self.basis(3)
    }

    fn basis(&self, i: usize) -> Quaternion {
        let mut coords = [
            BigRational::zero(),
            BigRational::zero(),
            BigRational::zero(),
            BigRational::zero(),
        ];
        coords[i] = BigRational::one();
        Quaternion { coords }
    }

    pub fn add(&self, x: &Quaternion, y: &Quaternion) -> Quaternion {
        let mut coords = x.coords.clone();
        for (c, yc) in coords.iter_mut().zip(&y.coords) {
            *c += yc;
        }
        Quaternion { coords }
    }

    pub fn mul(&self, x: &Quaternion, y: &Quaternion) -> Quaternion {
        let (a, b) = (&self.alpha, &self.beta);
        let ab = a * b;
        let [x1, x2, x3, x4] = &x.coords;
        let [y1, y2, y3, y4] = &y.coords;
        Quaternion {
            coords: [
                x1 * y1 + &(a * &(x2 * y2)) + &(b * &(x3 * y3)) - &(&ab * &(x4 * y4)),
                x1 * y2 + &(x2 * y1) - &(b * &(x3 * y4)) + &(b * &(x4 * y3)),
                x1 * y3 + &(x3 * y1) + &(a * &(x2 * y4)) - &(a * &(x4 * y2)),
                x1 * y4 + &(x4 * y1) + &(x2 * y3) - &(x3 * y2),
            ],
        }
    }

    pub fn scale(&self, x: &Quaternion, s: &BigRational) -> Quaternion {
        Quaternion {
            coords: [
                &x.coords[0] * s,
                &x.coords[1] * s,
                &x.coords[2] * s,
                &x.coords[3] * s,
            ],
        }
    }

    pub fn conj(&self, x: &Quaternion) -> Quaternion {
        Quaternion {
            coords: [
                x.coords[0].clone(),
                -&x.coords[1],
                -&x.coords[2],
                -&x.coords[3],
            ],
        }
    }

    /// Reduced norm N(x) = x1^2 - a x2^2 - b x3^2 + ab x4^2.
    pub fn norm(&self, x: &Quaternion) -> BigRational {
        let (a, b) = (&self.alpha, &self.beta);
        let [x1, x2, x3, x4] = &x.coords;
        x1 * x1 - &(a * &(x2 * x2)) - &(b * &(x3 * x3)) + &(&(a * b) * &(x4 * x4))
    }

    pub fn inverse(&self, x: &Quaternion) -> Result<Quaternion> {
        if x.is_zero() {
            return Err(Error::ZeroQuaternion);
        }
        let n = self.norm(x);
        debug_assert!(!n.is_zero(), "division algebra has anisotropic norm");
        Ok(self.scale(&self.conj(x), &n.recip()))
    }

    /// x^2 / N(x): an element of exact norm 1 near x (up to squaring) in the
    /// p-adic topology; the engine behind all density constructions.
    pub fn normalize_to_norm1(&self, x: &Quaternion) -> Result<Quaternion> {
        if x.is_zero() {
            return Err(Error::ZeroQuaternion);
        }
        let n = self.norm(x);
        Ok(self.scale(&self.mul(x, x), &n.recip()))
    }
}

impl Quaternion {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(BigRational::is_zero)
    }

    /// Parse "x1 + x2 e2 + x3 e3 + x4 e4" with rational coefficients; terms
    /// may be omitted and reordered, bare "e2" means coefficient 1.
    pub fn parse(s: &str) -> Result<Quaternion> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::BadInput("empty quaternion".into()));
        }
        let mut coords = [
            BigRational::zero(),
            BigRational::zero(),
            BigRational::zero(),
            BigRational::zero(),
        ];
        // Split into signed terms.
        let mut terms: Vec<String> = Vec::new();
        let mut cur = String::new();
        for (i, ch) in compact.chars().enumerate() {
            if (ch == '+' || ch == '-') && i > 0 {
                terms.push(std::mem::take(&mut cur));
                if ch == '-' {
                    cur.push('-');
                }
            } else {
                cur.push(ch);
            }
        }
        terms.push(cur);
        for term in terms {
            if term.is_empty() || term == "-" {
                return Err(Error::BadInput(format!("malformed quaternion {s:?}")));
            }
            let (idx, coeff_str) = if let Some(pos) = term.find('e') {
                let basis = &term[pos..];
                let idx = match basis {
                    "e2" => 1,
                    "e3" => 2,
                    "e4" => 3,
                    _ => {
                        return Err(Error::BadInput(format!(
                            "unknown basis element {basis:?} in {s:?}"
                        )))
                    }
                };
                let head = term[..pos].trim_end_matches('*');
                let coeff = match head {
                    "" => "1".to_string(),
                    "-" => "-1".to_string(),
                    other => other.to_string(),
                };
                (idx, coeff)
            } else {
                (0, term.clone())
            };
            coords[idx] += exact::parse_rational(&coeff_str)?;
        }
        Ok(Quaternion { coords })
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["", "e2", "e3", "e4"];
        let mut first = true;
        for (c, name) in self.coords.iter().zip(names) {
            if c.is_zero() {
                continue;
            }
            if first {
                if name.is_empty() {
                    write!(f, "{c}")?;
                } else if c.abs() == BigRational::one() {
                    write!(f, "{}{name}", if c.is_negative() { "-" } else { "" })?;
                } else {
                    write!(f, "{c} {name}")?;
                }
                first = false;
            } else {
                let sign = if c.is_negative() { "-" } else { "+" };
                let a = c.abs();
                if name.is_empty() {
                    write!(f, " {sign} {a}")?;
                } else if a.is_one() {
                    write!(f, " {sign} {name}")?;
                } else {
                    write!(f, " {sign} {a} {name}")?;
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
