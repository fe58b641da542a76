//! 2x2 matrices over Q (exact) and over Q_p (capped precision).

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact;
use crate::padic::Padic;

/// Row-major 2x2 matrix [[a, b], [c, d]].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat2<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

impl<T> Mat2<T> {
    pub fn new(a: T, b: T, c: T, d: T) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn map<U>(&self, mut f: impl FnMut(&T) -> U) -> Mat2<U> {
        Mat2 {
            a: f(&self.a),
            b: f(&self.b),
            c: f(&self.c),
            d: f(&self.d),
        }
    }

    pub fn entries(&self) -> [&T; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }
}

impl<T> Mat2<T>
where
    for<'x> &'x T: std::ops::Add<&'x T, Output = T>
        + std::ops::Sub<&'x T, Output = T>
        + std::ops::Mul<&'x T, Output = T>,
{
    pub fn mul(&self, o: &Mat2<T>) -> Mat2<T> {
        Mat2 {
            a: &(&self.a * &o.a) + &(&self.b * &o.c),
            b: &(&self.a * &o.b) + &(&self.b * &o.d),
            c: &(&self.c * &o.a) + &(&self.d * &o.c),
            d: &(&self.c * &o.b) + &(&self.d * &o.d),
        }
    }

    pub fn det(&self) -> T {
        &(&self.a * &self.d) - &(&self.b * &self.c)
    }

    pub fn trace(&self) -> T {
        &self.a + &self.d
    }
}

impl Mat2<BigRational> {
    pub fn identity() -> Self {
        Mat2::new(
            BigRational::one(),
            BigRational::zero(),
            BigRational::zero(),
            BigRational::one(),
        )
    }

    /// Exact inverse; requires det != 0.
    pub fn inverse(&self) -> Result<Self> {
        let det = self.det();
        if det.is_zero() {
            return Err(Error::InvalidMatrix("singular matrix".into()));
        }
        Ok(Mat2::new(
            &self.d / &det,
            -&self.b / &det,
            -&self.c / &det,
            &self.a / &det,
        ))
    }

    pub fn neg(&self) -> Self {
        self.map(|x| -x)
    }

    pub fn embed(&self, p: u64, prec: u32) -> Mat2<Padic> {
        self.map(|x| Padic::from_rational(x, p, prec))
    }

    /// Parse "a,b;c,d" with rational entries.
    pub fn parse(s: &str) -> Result<Self> {
        let rows: Vec<&str> = s.split(';').collect();
        if rows.len() != 2 {
            return Err(Error::BadInput(format!(
                "matrix {s:?} must have two ';'-separated rows"
            )));
        }
        let mut entries = Vec::with_capacity(4);
        for row in rows {
            let cols: Vec<&str> = row.split(',').collect();
            if cols.len() != 2 {
                return Err(Error::BadInput(format!(
                    "matrix row {row:?} must have two ','-separated entries"
                )));
            }
            for c in cols {
                entries.push(exact::parse_rational(c)?);
            }
        }
        let mut it = entries.into_iter();
        Ok(Mat2::new(
            it.next().unwrap(),
            it.next().unwrap(),
            it.next().unwrap(),
            it.next().unwrap(),
        ))
    }
}

impl fmt::Display for Mat2<BigRational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{};{},{}", self.a, self.b, self.c, self.d)
    }
}

impl Mat2<Padic> {
    pub fn identity(p: u64, prec: u32) -> Self {
        Mat2::new(
            Padic::one(p, prec),
            Padic::zero_to(p, prec as i64),
            Padic::zero_to(p, prec as i64),
            Padic::one(p, prec),
        )
    }

    pub fn prime(&self) -> u64 {
        self.a.prime()
    }

    /// Inverse of a matrix with det = 1 (to precision): the adjugate.
    pub fn adjugate(&self) -> Self {
        Mat2::new(self.d.clone(), self.b.neg(), self.c.neg(), self.a.clone())
    }

    /// Entrywise congruence mod p^k, certified.
    pub fn eq_mod(&self, o: &Mat2<Padic>, k: i64) -> Result<bool> {
        Ok(self.a.eq_mod(&o.a, k)?
            && self.b.eq_mod(&o.b, k)?
            && self.c.eq_mod(&o.c, k)?
            && self.d.eq_mod(&o.d, k)?)
    }

    /// Largest |valuation| among entries that carry one.
    pub fn max_abs_valuation(&self) -> i64 {
        self.entries()
            .iter()
            .filter_map(|e| e.val())
            .map(|v| v.abs())
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for Mat2<Padic> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ratio};

    #[test]
    fn parse_and_roundtrip() {
        let m = Mat2::parse("0,-1;1,7/3").unwrap();
        assert_eq!(m.a, rat(0));
        assert_eq!(m.d, ratio(7, 3));
        assert_eq!(m.to_string(), "0,-1;1,7/3");
        assert!(Mat2::parse("1,2,3;4,5").is_err());
        assert!(Mat2::parse("1,2").is_err());
    }

    #[test]
    fn rational_matrix_algebra() {
        let m = Mat2::parse("0,-1;1,7/3").unwrap();
        assert_eq!(m.det(), rat(1));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Mat2::<BigRational>::identity());
        assert_eq!(m.trace(), ratio(7, 3));
    }

    #[test]
    fn padic_matrix_multiplication() {
        let m = Mat2::parse("1,1;0,1").unwrap().embed(3, 6);
        let sq = m.mul(&m);
        let expected = Mat2::parse("1,2;0,1").unwrap().embed(3, 6);
        assert!(sq.eq_mod(&expected, 6).unwrap());
        assert!(sq.det().eq_mod(&Padic::one(3, 6), 6).unwrap());
    }

    #[test]
    fn adjugate_inverts_det_one() {
        let m = Mat2::parse("2,3;1,2").unwrap().embed(5, 5);
        let prod = m.mul(&m.adjugate());
        assert!(prod.eq_mod(&Mat2::<Padic>::identity(5, 5), 5).unwrap());
    }
}
