use std::fmt::Debug;

use num_traits::{One, Zero};

use super::fp::{inv_mod, mul_mod, Fp};
use super::quad::QuadElem;
use super::rational::Rational;

/// Exact field arithmetic used by the generic elimination routines.
///
/// Operands are assumed to live in the same field; implementations panic on
/// a field mismatch or a zero divisor, so callers validate inputs first.
pub trait Field: Clone + PartialEq + Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn over(&self, rhs: &Self) -> Self;
    fn negated(&self) -> Self;
}

impl Field for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn over(&self, rhs: &Self) -> Self {
        assert!(!Zero::is_zero(rhs), "division by zero");
        self / rhs
    }
    fn negated(&self) -> Self {
        -self
    }
}

impl Field for QuadElem {
    fn zero_like(&self) -> Self {
        QuadElem::from_rational(Rational::zero(), self.d()).expect("valid field")
    }
    fn one_like(&self) -> Self {
        QuadElem::from_rational(Rational::one(), self.d()).expect("valid field")
    }
    fn is_zero(&self) -> bool {
        QuadElem::is_zero(self)
    }
    fn plus(&self, rhs: &Self) -> Self {
        self.try_add(rhs).expect("same quadratic field")
    }
    fn minus(&self, rhs: &Self) -> Self {
        self.try_sub(rhs).expect("same quadratic field")
    }
    fn times(&self, rhs: &Self) -> Self {
        self.try_mul(rhs).expect("same quadratic field")
    }
    fn over(&self, rhs: &Self) -> Self {
        self.try_div(rhs).expect("nonzero divisor in the same field")
    }
    fn negated(&self) -> Self {
        self.neg()
    }
}

impl Field for Fp {
    fn zero_like(&self) -> Self {
        Fp::reduce(0, self.modulus())
    }
    fn one_like(&self) -> Self {
        Fp::reduce(1, self.modulus())
    }
    fn is_zero(&self) -> bool {
        self.value() == 0
    }
    fn plus(&self, rhs: &Self) -> Self {
        assert_eq!(self.modulus(), rhs.modulus());
        Fp::reduce(self.value() as i64 + rhs.value() as i64, self.modulus())
    }
    fn minus(&self, rhs: &Self) -> Self {
        assert_eq!(self.modulus(), rhs.modulus());
        Fp::reduce(self.value() as i64 - rhs.value() as i64, self.modulus())
    }
    fn times(&self, rhs: &Self) -> Self {
        assert_eq!(self.modulus(), rhs.modulus());
        let p = self.modulus();
        Fp::reduce(mul_mod(self.value(), rhs.value(), p) as i64, p)
    }
    fn over(&self, rhs: &Self) -> Self {
        assert_eq!(self.modulus(), rhs.modulus());
        assert!(rhs.value() != 0, "division by zero");
        let p = self.modulus();
        Fp::reduce(mul_mod(self.value(), inv_mod(rhs.value(), p), p) as i64, p)
    }
    fn negated(&self) -> Self {
        Fp::reduce(-(self.value() as i64), self.modulus())
    }
}
