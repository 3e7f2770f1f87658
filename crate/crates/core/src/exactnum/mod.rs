//! Exact scalars: rationals, real quadratic field elements and truncated
//! Laurent series over `F_p`.
//!
//! Rationals are promoted into `Q(√d)` whenever they meet a quadratic
//! element, so mixed rational/quadratic arithmetic is not a domain error.
//! Quadratic values whose irrational part vanishes are stored as rationals,
//! which keeps structural equality and the real order consistent.

mod field;
mod fp;
mod quad;
mod rational;
mod series;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

pub use field::Field;
pub use fp::{is_prime, Fp};
pub use quad::{is_squarefree, QuadElem};
pub use rational::{int, parse_rational, rat, rational_to_f64, serialize_rational, Rational};
pub use series::{FpSeries, DEFAULT_VALUATION_FLOOR};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Coordinate domain of a scalar.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ScalarDomain {
    Rational,
    Quadratic(u64),
    Series { p: u32, precision: i64 },
}

impl fmt::Display for ScalarDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarDomain::Rational => write!(f, "rat"),
            ScalarDomain::Quadratic(d) => write!(f, "quad({d})"),
            ScalarDomain::Series { p, precision } => write!(f, "series(p={p},N={precision})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExactScalar {
    Rat(Rational),
    Quad(QuadElem),
    Series(FpSeries),
}

impl From<Rational> for ExactScalar {
    fn from(r: Rational) -> Self {
        ExactScalar::Rat(r)
    }
}

impl From<QuadElem> for ExactScalar {
    fn from(q: QuadElem) -> Self {
        if q.is_rational() {
            ExactScalar::Rat(q.a().clone())
        } else {
            ExactScalar::Quad(q)
        }
    }
}

impl From<FpSeries> for ExactScalar {
    fn from(s: FpSeries) -> Self {
        ExactScalar::Series(s)
    }
}

impl From<i64> for ExactScalar {
    fn from(n: i64) -> Self {
        ExactScalar::Rat(int(n))
    }
}

/// Both operands as quadratic elements of one field, or both rational.
enum RealPair {
    Rat(Rational, Rational),
    Quad(QuadElem, QuadElem),
}

impl ExactScalar {
    pub fn zero() -> Self {
        ExactScalar::Rat(Rational::zero())
    }

    pub fn one() -> Self {
        ExactScalar::Rat(Rational::one())
    }

    pub fn domain(&self) -> ScalarDomain {
        match self {
            ExactScalar::Rat(_) => ScalarDomain::Rational,
            ExactScalar::Quad(q) => ScalarDomain::Quadratic(q.d()),
            ExactScalar::Series(s) => ScalarDomain::Series {
                p: s.p(),
                precision: s.precision(),
            },
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            ExactScalar::Rat(r) => Zero::is_zero(r),
            ExactScalar::Quad(q) => q.is_zero(),
            ExactScalar::Series(s) => s.is_zero(),
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            ExactScalar::Rat(r) => Some(r),
            _ => None,
        }
    }

    pub fn as_series(&self) -> Option<&FpSeries> {
        match self {
            ExactScalar::Series(s) => Some(s),
            _ => None,
        }
    }

    /// The value as an element of `Q(√d)`, promoting rationals.
    pub fn to_quad(&self, d: u64) -> Result<QuadElem> {
        match self {
            ExactScalar::Rat(r) => QuadElem::from_rational(r.clone(), d),
            ExactScalar::Quad(q) if q.d() == d => Ok(q.clone()),
            other => Err(Error::DomainMismatch(format!(
                "{} is not in Q(sqrt({d}))",
                other.domain()
            ))),
        }
    }

    fn real_pair(&self, other: &Self) -> Result<RealPair> {
        match (self, other) {
            (ExactScalar::Rat(x), ExactScalar::Rat(y)) => Ok(RealPair::Rat(x.clone(), y.clone())),
            (ExactScalar::Quad(x), ExactScalar::Rat(_)) => {
                Ok(RealPair::Quad(x.clone(), other.to_quad(x.d())?))
            }
            (ExactScalar::Rat(_), ExactScalar::Quad(y)) => {
                Ok(RealPair::Quad(self.to_quad(y.d())?, y.clone()))
            }
            (ExactScalar::Quad(x), ExactScalar::Quad(y)) if x.d() == y.d() => {
                Ok(RealPair::Quad(x.clone(), y.clone()))
            }
            _ => Err(Error::DomainMismatch(format!(
                "{} vs {}",
                self.domain(),
                other.domain()
            ))),
        }
    }

    /// Exact field operation with normalized result.
    pub fn arith(&self, other: &Self, op: ArithOp) -> Result<Self> {
        if let (ExactScalar::Series(x), ExactScalar::Series(y)) = (self, other) {
            let r = match op {
                ArithOp::Add => x.try_add(y),
                ArithOp::Sub => x.try_sub(y),
                ArithOp::Mul => x.try_mul(y),
                ArithOp::Div => x.try_div(y),
            }?;
            return Ok(ExactScalar::Series(r));
        }
        match self.real_pair(other)? {
            RealPair::Rat(x, y) => Ok(ExactScalar::Rat(match op {
                ArithOp::Add => x + y,
                ArithOp::Sub => x - y,
                ArithOp::Mul => x * y,
                ArithOp::Div => {
                    if Zero::is_zero(&y) {
                        return Err(Error::DivisionByZero);
                    }
                    x / y
                }
            })),
            RealPair::Quad(x, y) => Ok(match op {
                ArithOp::Add => x.try_add(&y),
                ArithOp::Sub => x.try_sub(&y),
                ArithOp::Mul => x.try_mul(&y),
                ArithOp::Div => x.try_div(&y),
            }?
            .into()),
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.arith(other, ArithOp::Add)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.arith(other, ArithOp::Sub)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.arith(other, ArithOp::Mul)
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.arith(other, ArithOp::Div)
    }

    pub fn neg(&self) -> Self {
        match self {
            ExactScalar::Rat(r) => ExactScalar::Rat(-r),
            ExactScalar::Quad(q) => ExactScalar::Quad(q.neg()),
            ExactScalar::Series(s) => ExactScalar::Series(s.neg()),
        }
    }

    /// Exact real comparison; errors for series or incompatible fields.
    pub fn real_cmp(&self, other: &Self) -> Result<Ordering> {
        match self.real_pair(other)? {
            RealPair::Rat(x, y) => Ok(x.cmp(&y)),
            RealPair::Quad(x, y) => x.try_cmp(&y),
        }
    }

    pub fn signum(&self) -> Result<Ordering> {
        self.real_cmp(&ExactScalar::zero())
    }

    pub fn abs(&self) -> Result<Self> {
        match self {
            ExactScalar::Rat(r) => Ok(ExactScalar::Rat(r.abs())),
            ExactScalar::Quad(q) => Ok(ExactScalar::Quad(q.abs())),
            ExactScalar::Series(_) => Err(Error::DomainMismatch(
                "absolute value of a series is not defined".into(),
            )),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExactScalar::Rat(r) => rational_to_f64(r),
            ExactScalar::Quad(q) => q.to_f64(),
            ExactScalar::Series(_) => f64::NAN,
        }
    }

    /// Largest integer below or equal to a real value.
    pub fn floor(&self) -> Result<num_bigint::BigInt> {
        match self {
            ExactScalar::Rat(r) => Ok(r.floor().to_integer()),
            ExactScalar::Quad(q) => Ok(q.floor()),
            ExactScalar::Series(_) => Err(Error::DomainMismatch("floor of a series".into())),
        }
    }

    pub fn ceil(&self) -> Result<num_bigint::BigInt> {
        Ok(-(self.neg().floor()?))
    }
}

/// `x op y` on exact scalars.
pub fn scalar_arith(x: &ExactScalar, y: &ExactScalar, op: ArithOp) -> Result<ExactScalar> {
    x.arith(y, op)
}

/// Exact sign of `x − r` for `x ∈ Q(√d)`.
pub fn quad_compare(x: &QuadElem, r: &Rational) -> Ordering {
    x.compare_rational(r)
}

/// The `p`-power map on a series.
pub fn series_frobenius(x: &FpSeries) -> Result<FpSeries> {
    x.frobenius()
}

fn domain_rank(s: &ExactScalar) -> u8 {
    match s {
        ExactScalar::Rat(_) | ExactScalar::Quad(_) => 0,
        ExactScalar::Series(_) => 1,
    }
}

impl PartialOrd for ExactScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Real values are ordered by value (quadratic elements of different fields
/// fall back to ordering by `d`); series come after all reals.
impl Ord for ExactScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExactScalar::Series(x), ExactScalar::Series(y)) => x.cmp(y),
            (ExactScalar::Quad(x), ExactScalar::Quad(y)) if x.d() != y.d() => x.d().cmp(&y.d()),
            _ if domain_rank(self) != domain_rank(other) => {
                domain_rank(self).cmp(&domain_rank(other))
            }
            _ => self.real_cmp(other).expect("comparable reals"),
        }
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactScalar::Rat(r) => write!(f, "{r}"),
            ExactScalar::Quad(q) => write!(f, "{q}"),
            ExactScalar::Series(s) => write!(f, "{s}"),
        }
    }
}

impl FromStr for ExactScalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with("p=") {
            Ok(ExactScalar::Series(FpSeries::parse(s)?))
        } else if s.contains("sqrt(") {
            Ok(QuadElem::parse(s)?.into())
        } else {
            Ok(ExactScalar::Rat(parse_rational(s)?))
        }
    }
}

impl Serialize for ExactScalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl Field for ExactScalar {
    fn zero_like(&self) -> Self {
        match self {
            ExactScalar::Series(s) => {
                ExactScalar::Series(FpSeries::zero(s.p(), s.precision()).expect("valid ring"))
            }
            _ => ExactScalar::zero(),
        }
    }
    fn one_like(&self) -> Self {
        match self {
            ExactScalar::Series(s) => {
                ExactScalar::Series(FpSeries::one(s.p(), s.precision()).expect("valid ring"))
            }
            _ => ExactScalar::one(),
        }
    }
    fn is_zero(&self) -> bool {
        ExactScalar::is_zero(self)
    }
    fn plus(&self, rhs: &Self) -> Self {
        self.try_add(rhs).expect("compatible scalars")
    }
    fn minus(&self, rhs: &Self) -> Self {
        self.try_sub(rhs).expect("compatible scalars")
    }
    fn times(&self, rhs: &Self) -> Self {
        self.try_mul(rhs).expect("compatible scalars")
    }
    fn over(&self, rhs: &Self) -> Self {
        self.try_div(rhs).expect("compatible scalars, nonzero divisor")
    }
    fn negated(&self) -> Self {
        self.neg()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> ExactScalar {
        s.parse().unwrap()
    }

    #[test]
    fn worked_examples() {
        assert_eq!(
            scalar_arith(&parse("1/2"), &parse("1/3"), ArithOp::Add).unwrap(),
            parse("5/6")
        );
        assert_eq!(
            scalar_arith(&parse("1+1*sqrt(2)"), &parse("1-1*sqrt(2)"), ArithOp::Mul).unwrap(),
            parse("-1")
        );
        let x = parse("p=2;N=4;v=0;c=1,1");
        assert_eq!(
            scalar_arith(&x, &x, ArithOp::Mul).unwrap(),
            parse("p=2;N=4;v=0;c=1,0,1,0")
        );
    }

    #[test]
    fn quadratic_collapses_to_rational() {
        let y = parse("3+2*sqrt(2)")
            .try_sub(&parse("0+2*sqrt(2)"))
            .unwrap();
        assert_eq!(y, ExactScalar::from(3));
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(
            parse("1").try_add(&parse("p=2;N=4;v=0;c=1")),
            Err(Error::DomainMismatch(_))
        ));
        assert!(matches!(
            parse("1+1*sqrt(2)").try_add(&parse("1+1*sqrt(3)")),
            Err(Error::DomainMismatch(_))
        ));
        assert!(matches!(
            parse("1").try_div(&parse("0")),
            Err(Error::DivisionByZero)
        ));
        assert!(matches!(
            parse("1+1*sqrt(2)").try_div(&parse("0")),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn mixed_order_is_real_order() {
        let mut v = [parse("3/2"), parse("0+1*sqrt(2)"), parse("-1"), parse("1-1*sqrt(2)")];
        v.sort();
        let f: Vec<f64> = v.iter().map(|x| x.to_f64()).collect();
        assert!(f.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn quad_compare_window_membership() {
        let x = QuadElem::integer(2, -1, 2).unwrap();
        assert_eq!(quad_compare(&x, &int(0)), Ordering::Greater);
        assert_eq!(quad_compare(&x, &int(1)), Ordering::Less);
    }
}
