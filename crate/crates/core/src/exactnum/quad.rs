//! Elements `a + b√d` of a real quadratic field.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::rational::{int, parse_rational, rational_to_f64, Rational};
use crate::error::{Error, Result};

/// `a + b√d` with `d ≥ 2` square-free.
///
/// Equality is componentwise, which is sound because `√d` is irrational.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadElem {
    a: Rational,
    b: Rational,
    d: u64,
}

pub fn is_squarefree(d: u64) -> bool {
    if d < 2 {
        return false;
    }
    let mut k = 2u64;
    while k * k <= d {
        if d.is_multiple_of(k * k) {
            return false;
        }
        k += 1;
    }
    true
}

/// Sign of `u + b√d`, decided by comparing `u²` with `d·b²` when the two
/// summands have opposite signs.
fn sign_of(u: &Rational, b: &Rational, d: u64) -> Ordering {
    let su = u.signum();
    let sb = b.signum();
    let zero = Rational::zero();
    match (su.cmp(&zero), sb.cmp(&zero)) {
        (Ordering::Equal, Ordering::Equal) => Ordering::Equal,
        (Ordering::Greater | Ordering::Equal, Ordering::Greater | Ordering::Equal) => {
            Ordering::Greater
        }
        (Ordering::Less | Ordering::Equal, Ordering::Less | Ordering::Equal) => Ordering::Less,
        (Ordering::Greater, Ordering::Less) => {
            let dbb = b * b * Rational::from_integer(BigInt::from(d));
            (u * u).cmp(&dbb)
        }
        (Ordering::Less, Ordering::Greater) => {
            let dbb = b * b * Rational::from_integer(BigInt::from(d));
            dbb.cmp(&(u * u))
        }
    }
}

impl QuadElem {
    pub fn new(a: Rational, b: Rational, d: u64) -> Result<Self> {
        if !is_squarefree(d) {
            return Err(Error::InvalidScalar(format!(
                "quadratic field parameter {d} is not a square-free integer >= 2"
            )));
        }
        Ok(QuadElem { a, b, d })
    }

    /// `m + n√d` for integers `m, n`.
    pub fn integer(m: i64, n: i64, d: u64) -> Result<Self> {
        Self::new(int(m), int(n), d)
    }

    pub fn from_rational(r: Rational, d: u64) -> Result<Self> {
        Self::new(r, Rational::zero(), d)
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.d == other.d {
            Ok(())
        } else {
            Err(Error::DomainMismatch(format!(
                "Q(sqrt({})) vs Q(sqrt({}))",
                self.d, other.d
            )))
        }
    }

    fn raw(a: Rational, b: Rational, d: u64) -> Self {
        QuadElem { a, b, d }
    }

    pub fn conjugate(&self) -> Self {
        Self::raw(self.a.clone(), -&self.b, self.d)
    }

    /// Field norm `a² − d·b²`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - &self.b * &self.b * Rational::from_integer(BigInt::from(self.d))
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        self.same_field(rhs)?;
        Ok(Self::raw(&self.a + &rhs.a, &self.b + &rhs.b, self.d))
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        self.same_field(rhs)?;
        Ok(Self::raw(&self.a - &rhs.a, &self.b - &rhs.b, self.d))
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        self.same_field(rhs)?;
        let d = Rational::from_integer(BigInt::from(self.d));
        let a = &self.a * &rhs.a + &self.b * &rhs.b * d;
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        Ok(Self::raw(a, b, self.d))
    }

    pub fn try_inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm();
        Ok(Self::raw(&self.a / &n, -&self.b / &n, self.d))
    }

    pub fn try_div(&self, rhs: &Self) -> Result<Self> {
        self.same_field(rhs)?;
        self.try_mul(&rhs.try_inv()?)
    }

    pub fn neg(&self) -> Self {
        Self::raw(-&self.a, -&self.b, self.d)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self::raw(&self.a * r, &self.b * r, self.d)
    }

    pub fn add_rational(&self, r: &Rational) -> Self {
        Self::raw(&self.a + r, self.b.clone(), self.d)
    }

    /// Exact sign of `self − r`.
    pub fn compare_rational(&self, r: &Rational) -> Ordering {
        sign_of(&(&self.a - r), &self.b, self.d)
    }

    pub fn signum(&self) -> Ordering {
        sign_of(&self.a, &self.b, self.d)
    }

    pub fn abs(&self) -> Self {
        if self.signum() == Ordering::Less {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Exact comparison of two elements of the same field.
    pub fn try_cmp(&self, other: &Self) -> Result<Ordering> {
        self.same_field(other)?;
        Ok(sign_of(&(&self.a - &other.a), &(&self.b - &other.b), self.d))
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.a) + rational_to_f64(&self.b) * (self.d as f64).sqrt()
    }

    /// Largest integer `k` with `k ≤ self`, found from a float estimate and
    /// corrected with exact comparisons.
    pub fn floor(&self) -> BigInt {
        let est = self.to_f64().floor();
        let mut k = if est.is_finite() {
            BigInt::from(est as i128)
        } else {
            self.a.floor().to_integer()
        };
        while self.compare_rational(&Rational::from_integer(k.clone())) == Ordering::Less {
            k -= BigInt::one();
        }
        while self.compare_rational(&Rational::from_integer(&k + BigInt::one())) != Ordering::Less
        {
            k += BigInt::one();
        }
        k
    }

    pub fn ceil(&self) -> BigInt {
        -(self.neg().floor())
    }

    /// Parses `a+b*sqrt(d)` (also `a-b*sqrt(d)`, `a+-b*sqrt(d)`).
    pub fn parse(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (left, right) = s
            .split_once("*sqrt(")
            .ok_or_else(|| Error::Parse(format!("expected a+b*sqrt(d), got {s:?}")))?;
        let d_str = right
            .strip_suffix(')')
            .ok_or_else(|| Error::Parse(format!("unclosed sqrt in {s:?}")))?;
        let d: u64 = d_str
            .parse()
            .map_err(|_| Error::Parse(format!("bad sqrt argument in {s:?}")))?;
        let bytes = left.as_bytes();
        let mut split = None;
        for i in (1..bytes.len()).rev() {
            if bytes[i] == b'+' || bytes[i] == b'-' {
                if bytes[i - 1] == b'+' || bytes[i - 1] == b'-' {
                    split = Some(i - 1);
                } else {
                    split = Some(i);
                }
                break;
            }
        }
        let split = split.ok_or_else(|| Error::Parse(format!("missing b term in {s:?}")))?;
        let a = parse_rational(&left[..split])?;
        let sign_b = &left[split..];
        let b = if let Some(rest) = sign_b.strip_prefix('+') {
            parse_rational(rest)?
        } else {
            parse_rational(sign_b)?
        };
        Self::new(a, b, d)
    }
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_negative() {
            write!(f, "{}-{}*sqrt({})", self.a, -&self.b, self.d)
        } else {
            write!(f, "{}+{}*sqrt({})", self.a, self.b, self.d)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::rat;

    fn q(a: i64, b: i64) -> QuadElem {
        QuadElem::integer(a, b, 2).unwrap()
    }

    #[test]
    fn norm_form_product() {
        let x = q(1, 1).try_mul(&q(1, -1)).unwrap();
        assert_eq!(x, q(-1, 0));
    }

    #[test]
    fn signs_by_squaring() {
        assert_eq!(q(3, -2).signum(), Ordering::Greater);
        assert_eq!(q(7, -5).signum(), Ordering::Less);
        assert_eq!(q(0, 0).signum(), Ordering::Equal);
        assert_eq!(q(-1, 1).signum(), Ordering::Greater);
    }

    #[test]
    fn two_minus_root_two_exceeds_one() {
        // (2 - 1)^2 = 1 < 2 * 1^2, so 2 - √2 - 1 = 1 - √2 < 0 and 2 - √2 > 0.
        let x = q(2, -1);
        assert_eq!(x.compare_rational(&int(0)), Ordering::Greater);
        assert_eq!(x.compare_rational(&int(1)), Ordering::Less);
        assert_eq!(x.compare_rational(&int(-1)), Ordering::Greater);
    }

    #[test]
    fn rejects_non_squarefree() {
        assert!(QuadElem::integer(1, 1, 8).is_err());
        assert!(QuadElem::integer(1, 1, 1).is_err());
        assert!(QuadElem::integer(1, 1, 6).is_ok());
    }

    #[test]
    fn mismatched_fields() {
        let x = QuadElem::integer(1, 1, 3).unwrap();
        assert!(matches!(q(1, 1).try_add(&x), Err(Error::DomainMismatch(_))));
    }

    #[test]
    fn division_and_inverse() {
        let x = q(3, 2);
        let y = x.try_inv().unwrap();
        assert_eq!(x.try_mul(&y).unwrap(), q(1, 0));
        assert!(q(0, 0).try_inv().is_err());
    }

    #[test]
    fn floor_is_exact() {
        assert_eq!(q(0, 1).floor(), BigInt::from(1));
        assert_eq!(q(0, -1).floor(), BigInt::from(-2));
        assert_eq!(q(1, -1).floor(), BigInt::from(-1));
        assert_eq!(q(5, 0).floor(), BigInt::from(5));
        assert_eq!(q(5, 0).ceil(), BigInt::from(5));
        assert_eq!(q(0, 1).ceil(), BigInt::from(2));
    }

    #[test]
    fn text_roundtrip() {
        for s in ["1+1*sqrt(2)", "-3/2-1/4*sqrt(5)", "0+0*sqrt(2)"] {
            let x = QuadElem::parse(s).unwrap();
            assert_eq!(x.to_string(), s);
        }
        let x = QuadElem::parse("1+-2*sqrt(3)").unwrap();
        assert_eq!(x, QuadElem::new(int(1), int(-2), 3).unwrap());
        let x = QuadElem::parse("-1/2+1/3*sqrt(7)").unwrap();
        assert_eq!(x, QuadElem::new(rat(-1, 2), rat(1, 3), 7).unwrap());
    }
}
