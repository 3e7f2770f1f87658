//! Truncated Laurent series over `F_p`, i.e. elements of `F_p((t))` known
//! modulo `t^N`.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use super::fp::{inv_mod, is_prime, mul_mod};
use crate::error::{Error, Result};

pub const DEFAULT_VALUATION_FLOOR: i64 = 8;

/// `Σ_{i=v}^{N-1} c_i t^i + O(t^N)`.
///
/// The zero series is stored with `valuation == precision` and no
/// coefficients. Otherwise `coeffs[0]` (the coefficient of `t^v`) is
/// nonzero. The valuation floor is carried along but does not take part in
/// equality or ordering.
#[derive(Clone, Debug)]
pub struct FpSeries {
    p: u32,
    precision: i64,
    valuation: i64,
    coeffs: Vec<u32>,
    floor: i64,
}

impl PartialEq for FpSeries {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
            && self.precision == other.precision
            && self.valuation == other.valuation
            && self.coeffs == other.coeffs
    }
}

impl Eq for FpSeries {}

impl Hash for FpSeries {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.p.hash(state);
        self.precision.hash(state);
        self.valuation.hash(state);
        self.coeffs.hash(state);
    }
}

impl PartialOrd for FpSeries {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FpSeries {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.p, self.precision, self.valuation, &self.coeffs).cmp(&(
            other.p,
            other.precision,
            other.valuation,
            &other.coeffs,
        ))
    }
}

impl FpSeries {
    /// Builds `Σ coeffs[i] t^(start+i) + O(t^precision)`; coefficients are
    /// reduced mod `p` and anything at or beyond `precision` is dropped.
    pub fn new(p: u32, precision: i64, start: i64, coeffs: &[i64]) -> Result<Self> {
        Self::with_floor(p, precision, start, coeffs, DEFAULT_VALUATION_FLOOR)
    }

    pub fn with_floor(
        p: u32,
        precision: i64,
        start: i64,
        coeffs: &[i64],
        floor: i64,
    ) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if floor < 0 {
            return Err(Error::InvalidScalar("valuation floor must be >= 0".into()));
        }
        if precision < -floor {
            return Err(Error::BelowValuationFloor {
                valuation: precision,
                floor,
            });
        }
        let lo = start.min(precision);
        let len = (precision - lo) as usize;
        let mut dense = vec![0u32; len];
        for (i, &c) in coeffs.iter().enumerate() {
            let idx = start + i as i64;
            if idx < precision {
                dense[(idx - lo) as usize] = c.rem_euclid(p as i64) as u32;
            }
        }
        Self::normalized(p, precision, lo, dense, floor)
    }

    pub fn zero(p: u32, precision: i64) -> Result<Self> {
        Self::new(p, precision, precision, &[])
    }

    pub fn one(p: u32, precision: i64) -> Result<Self> {
        Self::new(p, precision, 0, &[1])
    }

    /// The uniformizer `t`.
    pub fn t(p: u32, precision: i64) -> Result<Self> {
        Self::new(p, precision, 1, &[1])
    }

    fn normalized(p: u32, precision: i64, start: i64, dense: Vec<u32>, floor: i64) -> Result<Self> {
        let first = dense.iter().position(|&c| c != 0);
        let s = match first {
            None => FpSeries {
                p,
                precision,
                valuation: precision,
                coeffs: Vec::new(),
                floor,
            },
            Some(k) => FpSeries {
                p,
                precision,
                valuation: start + k as i64,
                coeffs: dense[k..].to_vec(),
                floor,
            },
        };
        if s.valuation < -floor {
            return Err(Error::BelowValuationFloor {
                valuation: s.valuation,
                floor,
            });
        }
        Ok(s)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn precision(&self) -> i64 {
        self.precision
    }

    /// Index of the first nonzero coefficient; equals the precision for zero.
    pub fn valuation(&self) -> i64 {
        self.valuation
    }

    pub fn floor(&self) -> i64 {
        self.floor
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `t^i`, or `None` when `i` is at or beyond the precision.
    pub fn coeff(&self, i: i64) -> Option<u32> {
        if i >= self.precision {
            None
        } else if i < self.valuation {
            Some(0)
        } else {
            Some(self.coeffs[(i - self.valuation) as usize])
        }
    }

    /// Coefficients `c_v, …, c_{N-1}`.
    pub fn coefficients(&self) -> &[u32] {
        &self.coeffs
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        if self.p == other.p {
            Ok(())
        } else {
            Err(Error::DomainMismatch(format!(
                "F_{}((t)) vs F_{}((t))",
                self.p, other.p
            )))
        }
    }

    fn joint_floor(&self, other: &Self) -> i64 {
        self.floor.min(other.floor)
    }

    fn combine(&self, other: &Self, sign: i64) -> Result<Self> {
        self.compatible(other)?;
        let prec = self.precision.min(other.precision);
        let lo = self.valuation.min(other.valuation).min(prec);
        let len = (prec - lo) as usize;
        let p = self.p;
        let mut dense = vec![0u32; len];
        for (k, slot) in dense.iter_mut().enumerate() {
            let i = lo + k as i64;
            let x = self.coeff(i).unwrap_or(0) as i64;
            let y = other.coeff(i).unwrap_or(0) as i64;
            *slot = (x + sign * y).rem_euclid(p as i64) as u32;
        }
        Self::normalized(p, prec, lo, dense, self.joint_floor(other))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.combine(other, 1)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, -1)
    }

    pub fn neg(&self) -> Self {
        let p = self.p;
        FpSeries {
            coeffs: self.coeffs.iter().map(|&c| (p - c) % p).collect(),
            ..self.clone()
        }
    }

    /// Product, known modulo `t^min(N1, N2, N1+v2, N2+v1)`.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let prec = self
            .precision
            .min(other.precision)
            .min(self.precision + other.valuation)
            .min(other.precision + self.valuation);
        let floor = self.joint_floor(other);
        if self.is_zero() || other.is_zero() {
            return Self::normalized(self.p, prec, prec, Vec::new(), floor);
        }
        let v = self.valuation + other.valuation;
        if v >= prec {
            return Err(Error::PrecisionUnderflow(format!(
                "product valuation {v} is not below its precision {prec}"
            )));
        }
        let len = (prec - v) as usize;
        let p = self.p;
        let mut dense = vec![0u32; len];
        for (i, &x) in self.coeffs.iter().enumerate().take(len) {
            if x == 0 {
                continue;
            }
            for (j, &y) in other.coeffs.iter().enumerate().take(len - i) {
                let slot = &mut dense[i + j];
                *slot = (*slot + mul_mod(x, y, p)) % p;
            }
        }
        Self::normalized(p, prec, v, dense, floor)
    }

    /// Multiplicative inverse; the result is known modulo `t^(N − 2v)`.
    pub fn try_inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let p = self.p;
        let rel = self.coeffs.len();
        let lead_inv = inv_mod(self.coeffs[0], p);
        // Unit part u = Σ u_k t^k with u_0 != 0; solve u·w = 1 term by term.
        let mut w = vec![0u32; rel];
        for k in 0..rel {
            let mut acc: u64 = if k == 0 { 1 } else { 0 };
            for j in 1..=k {
                acc += (p as u64 - mul_mod(self.coeffs[j], w[k - j], p) as u64) % p as u64;
            }
            w[k] = mul_mod((acc % p as u64) as u32, lead_inv, p);
        }
        let v = -self.valuation;
        let prec = self.precision - 2 * self.valuation;
        Self::normalized(p, prec, v, w, self.floor)
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let inv = other.try_inv()?;
        self.try_mul(&inv)
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: i64) -> Result<Self> {
        let s = FpSeries {
            precision: self.precision + k,
            valuation: self.valuation + k,
            ..self.clone()
        };
        if !s.is_zero() && s.valuation < -s.floor {
            return Err(Error::BelowValuationFloor {
                valuation: s.valuation,
                floor: s.floor,
            });
        }
        if s.precision < -s.floor {
            return Err(Error::BelowValuationFloor {
                valuation: s.precision,
                floor: s.floor,
            });
        }
        Ok(s)
    }

    /// The `p`-power map. Coefficients are fixed by Frobenius on `F_p`, so the
    /// coefficient at `t^(p·i)` is the input coefficient at `t^i`. The result
    /// keeps precision `min(N, p·N)`.
    pub fn frobenius(&self) -> Result<Self> {
        let p = self.p as i64;
        let prec = self.precision.min(p * self.precision);
        if self.is_zero() {
            return Self::normalized(self.p, prec, prec, Vec::new(), self.floor);
        }
        let v = p * self.valuation;
        if v >= prec {
            return Err(Error::PrecisionUnderflow(format!(
                "p-th power has valuation {v}, beyond precision {prec}"
            )));
        }
        let len = (prec - v) as usize;
        let mut dense = vec![0u32; len];
        for (i, &c) in self.coeffs.iter().enumerate() {
            let idx = i as i64 * p;
            if idx < len as i64 {
                dense[idx as usize] = c;
            }
        }
        Self::normalized(self.p, prec, v, dense, self.floor)
    }

    /// Parses `p=<prime>;N=<prec>;v=<val>;c=<c_v,...>`.
    pub fn parse(s: &str) -> Result<Self> {
        let mut p = None;
        let mut n = None;
        let mut v = None;
        let mut c = None;
        for part in s.trim().split(';') {
            let (key, val) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("bad series field {part:?}")))?;
            let bad = || Error::Parse(format!("bad series field {part:?}"));
            match key.trim() {
                "p" => p = Some(val.trim().parse::<u32>().map_err(|_| bad())?),
                "N" => n = Some(val.trim().parse::<i64>().map_err(|_| bad())?),
                "v" => v = Some(val.trim().parse::<i64>().map_err(|_| bad())?),
                "c" => {
                    let val = val.trim();
                    let coeffs = if val.is_empty() {
                        Vec::new()
                    } else {
                        val.split(',')
                            .map(|x| x.trim().parse::<i64>().map_err(|_| bad()))
                            .collect::<Result<Vec<_>>>()?
                    };
                    c = Some(coeffs)
                }
                _ => return Err(bad()),
            }
        }
        let missing = |f: &str| Error::Parse(format!("series missing field {f} in {s:?}"));
        let p = p.ok_or_else(|| missing("p"))?;
        let n = n.ok_or_else(|| missing("N"))?;
        let v = v.ok_or_else(|| missing("v"))?;
        let c = c.ok_or_else(|| missing("c"))?;
        if c.len() as i64 > (n - v).max(0) {
            return Err(Error::Parse(format!(
                "series has coefficients beyond its precision in {s:?}"
            )));
        }
        Self::new(p, n, v, &c)
    }
}

impl FpSeries {
    /// Human-readable form, e.g. `t^-1 + 2t^3 + O(t^8)`.
    pub fn terms(&self) -> String {
        let mut out = Vec::new();
        for (i, &c) in (self.valuation..).zip(&self.coeffs) {
            if c == 0 {
                continue;
            }
            let c = if c == 1 { String::new() } else { c.to_string() };
            out.push(match i {
                0 if c.is_empty() => "1".to_string(),
                0 => c,
                1 => format!("{c}t"),
                _ => format!("{c}t^{i}"),
            });
        }
        out.push(format!("O(t^{})", self.precision));
        out.join(" + ")
    }
}

impl fmt::Display for FpSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(
            f,
            "p={};N={};v={};c={}",
            self.p,
            self.precision,
            self.valuation,
            c.join(",")
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(p: u32, n: i64, start: i64, c: &[i64]) -> FpSeries {
        FpSeries::new(p, n, start, c).unwrap()
    }

    #[test]
    fn readable_terms() {
        assert_eq!(s(2, 8, -1, &[1]).terms(), "t^-1 + O(t^8)");
        assert_eq!(s(3, 4, 0, &[2, 1, 0, 2]).terms(), "2 + t + 2t^3 + O(t^4)");
        assert_eq!(FpSeries::zero(5, 3).unwrap().terms(), "O(t^3)");
    }

    #[test]
    fn char_two_square() {
        let x = s(2, 4, 0, &[1, 1]);
        assert_eq!(x.try_mul(&x).unwrap(), s(2, 4, 0, &[1, 0, 1]));
        assert_eq!(x.frobenius().unwrap(), s(2, 4, 0, &[1, 0, 1]));
    }

    #[test]
    fn frobenius_of_t_over_f3() {
        let t = FpSeries::t(3, 8).unwrap();
        assert_eq!(t.frobenius().unwrap(), s(3, 8, 3, &[1]));
    }

    #[test]
    fn frobenius_spreads_coefficients() {
        let x = s(5, 12, 0, &[2, 3, 4]);
        let y = x.frobenius().unwrap();
        for i in 0..12 {
            let expect = match i {
                0 => 2,
                5 => 3,
                10 => 4,
                _ => 0,
            };
            assert_eq!(y.coeff(i), Some(expect));
        }
    }

    #[test]
    fn frobenius_precision_exhaustion() {
        let x = s(2, 4, 2, &[1]);
        assert!(matches!(x.frobenius(), Err(Error::PrecisionUnderflow(_))));
    }

    #[test]
    fn minimum_precision_on_binary_ops() {
        let x = s(3, 5, 0, &[1, 2]);
        let y = s(3, 7, 0, &[2]);
        assert_eq!(x.try_add(&y).unwrap().precision(), 5);
        assert_eq!(x.try_mul(&y).unwrap().precision(), 5);
    }

    #[test]
    fn laurent_product_precision_is_honest() {
        // t^-2 · (1 + O(t^4)) is only known modulo t^2.
        let x = s(2, 4, -2, &[1]);
        let y = s(2, 4, 0, &[1]);
        assert_eq!(x.try_mul(&y).unwrap().precision(), 2);
    }

    #[test]
    fn unit_inverse() {
        let x = s(7, 6, 0, &[3, 1, 4, 1, 5, 2]);
        let y = x.try_inv().unwrap();
        assert_eq!(x.try_mul(&y).unwrap(), FpSeries::one(7, 6).unwrap());
        assert!(FpSeries::zero(7, 6).unwrap().try_inv().is_err());
    }

    #[test]
    fn division_shifts_valuation() {
        let t = FpSeries::t(2, 6).unwrap();
        let one = FpSeries::one(2, 6).unwrap();
        let q = one.try_div(&t).unwrap();
        assert_eq!(q.valuation(), -1);
        assert_eq!(q.try_mul(&t).unwrap().coeff(0), Some(1));
    }

    #[test]
    fn floor_enforced() {
        assert!(matches!(
            FpSeries::new(2, 4, -9, &[1]),
            Err(Error::BelowValuationFloor { .. })
        ));
        assert!(FpSeries::with_floor(2, 4, -9, &[1], 10).is_ok());
        let x = FpSeries::with_floor(2, 4, -3, &[1], 3).unwrap();
        assert!(x.frobenius().is_err());
    }

    #[test]
    fn mismatched_primes() {
        let x = FpSeries::one(2, 4).unwrap();
        let y = FpSeries::one(3, 4).unwrap();
        assert!(matches!(x.try_add(&y), Err(Error::DomainMismatch(_))));
    }

    #[test]
    fn text_encoding() {
        let x = s(2, 6, 1, &[1, 0, 1]);
        assert_eq!(x.to_string(), "p=2;N=6;v=1;c=1,0,1,0,0");
        assert_eq!(FpSeries::parse(&x.to_string()).unwrap(), x);
        let z = FpSeries::zero(3, 4).unwrap();
        assert_eq!(z.to_string(), "p=3;N=4;v=4;c=");
        assert_eq!(FpSeries::parse("p=3;N=4;v=4;c=").unwrap(), z);
        assert_eq!(
            FpSeries::parse("p=2;N=4;v=0;c=0,1").unwrap(),
            s(2, 4, 1, &[1])
        );
        assert!(FpSeries::parse("p=4;N=4;v=0;c=1").is_err());
        assert!(FpSeries::parse("p=2;N=2;v=0;c=1,1,1").is_err());
    }
}
