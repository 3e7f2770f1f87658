//! Concrete ambient groups: `R^n` with exact coordinates, the `ax+b` group
//! `{(a, b) : a > 0}` and additive groups of truncated series over `F_p`.
//!
//! Points are plain coordinate vectors ([`Coords`]); the model supplies the
//! group law. [`GroupPoint`] pairs coordinates with their model for callers
//! that want mismatches caught at the call site.

mod quadrature;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

pub use quadrature::{haar_quadrature, HaarQuadrature};

use crate::error::{Error, Result};
use crate::exactnum::{ExactScalar, FpSeries, ScalarDomain};

pub type Coords = Vec<ExactScalar>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupModel {
    /// `(R^n, +)`; coordinates in `domain` (rationals, or `Q(√d)` which
    /// also admits rational coordinates).
    AdditiveRn { n: usize, domain: ScalarDomain },
    /// `{(a, b) : a > 0}` with `(a,b)(a',b') = (aa', ab'+b)`.
    AxPlusB,
    /// `(F_p[[t]]/t^N)^m` under addition.
    AdditiveSeries { p: u32, precision: i64, m: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupOp {
    Mul,
    Inv,
}

impl GroupModel {
    pub fn rn(n: usize, domain: ScalarDomain) -> Self {
        GroupModel::AdditiveRn { n, domain }
    }

    pub fn dim(&self) -> usize {
        match self {
            GroupModel::AdditiveRn { n, .. } => *n,
            GroupModel::AxPlusB => 2,
            GroupModel::AdditiveSeries { m, .. } => *m,
        }
    }

    pub fn is_abelian(&self) -> bool {
        !matches!(self, GroupModel::AxPlusB)
    }

    /// Whether coordinates are real numbers (so boxes, norms and
    /// quadrature make sense).
    pub fn is_real(&self) -> bool {
        !matches!(self, GroupModel::AdditiveSeries { .. })
    }

    pub fn identity(&self) -> Coords {
        match self {
            GroupModel::AdditiveRn { n, .. } => vec![ExactScalar::zero(); *n],
            GroupModel::AxPlusB => vec![ExactScalar::one(), ExactScalar::zero()],
            GroupModel::AdditiveSeries { p, precision, m } => {
                let z = FpSeries::zero(*p, *precision).expect("validated model");
                vec![ExactScalar::Series(z); *m]
            }
        }
    }

    fn scalar_fits(&self, s: &ExactScalar) -> bool {
        match (self, s.domain()) {
            (GroupModel::AdditiveRn { domain, .. }, dom) => match (domain, dom) {
                (ScalarDomain::Rational, ScalarDomain::Rational) => true,
                (ScalarDomain::Quadratic(d), ScalarDomain::Quadratic(e)) => *d == e,
                (ScalarDomain::Quadratic(_), ScalarDomain::Rational) => true,
                _ => false,
            },
            (GroupModel::AxPlusB, ScalarDomain::Series { .. }) => false,
            (GroupModel::AxPlusB, _) => true,
            (GroupModel::AdditiveSeries { p, precision, .. }, ScalarDomain::Series { p: q, precision: n }) => {
                *p == q && *precision == n
            }
            _ => false,
        }
    }

    /// Checks arity, coordinate domains and (for `ax+b`) that `a > 0`.
    pub fn validate(&self, c: &[ExactScalar]) -> Result<()> {
        if c.len() != self.dim() {
            return Err(Error::InvalidPoint(format!(
                "expected {} coordinates for {self}, got {}",
                self.dim(),
                c.len()
            )));
        }
        if let Some(bad) = c.iter().find(|s| !self.scalar_fits(s)) {
            return Err(Error::InvalidPoint(format!(
                "coordinate {bad} does not belong to {self}"
            )));
        }
        if *self == GroupModel::AxPlusB && c[0].signum()? != Ordering::Greater {
            return Err(Error::InvalidPoint(format!(
                "ax+b point needs a > 0, got a = {}",
                c[0]
            )));
        }
        Ok(())
    }

    /// Group product `g·h`. Inputs are assumed valid for the model.
    pub fn mul(&self, g: &[ExactScalar], h: &[ExactScalar]) -> Result<Coords> {
        match self {
            GroupModel::AxPlusB => {
                let a = g[0].try_mul(&h[0])?;
                let b = g[0].try_mul(&h[1])?.try_add(&g[1])?;
                Ok(vec![a, b])
            }
            _ => g.iter().zip(h).map(|(x, y)| x.try_add(y)).collect(),
        }
    }

    pub fn inv(&self, g: &[ExactScalar]) -> Result<Coords> {
        match self {
            GroupModel::AxPlusB => {
                let a = ExactScalar::one().try_div(&g[0])?;
                let b = g[1].try_mul(&a)?.neg();
                Ok(vec![a, b])
            }
            _ => Ok(g.iter().map(|x| x.neg()).collect()),
        }
    }

    /// `g⁻¹h`, the element carrying `g` to `h` by left multiplication.
    pub fn left_quotient(&self, g: &[ExactScalar], h: &[ExactScalar]) -> Result<Coords> {
        self.mul(&self.inv(g)?, h)
    }

    /// `Δ(g)` under `∫ f(tg) dm(t) = Δ(g)⁻¹ ∫ f dm`; `1/a` on `ax+b`.
    pub fn modular_function(&self, g: &[ExactScalar]) -> Result<ExactScalar> {
        match self {
            GroupModel::AxPlusB => ExactScalar::one().try_div(&g[0]),
            _ => Ok(ExactScalar::one()),
        }
    }

    pub fn modular_function_f64(&self, g: &[f64]) -> f64 {
        match self {
            GroupModel::AxPlusB => 1.0 / g[0],
            _ => 1.0,
        }
    }

    pub fn is_unimodular(&self) -> bool {
        !matches!(self, GroupModel::AxPlusB)
    }

    /// Density of left Haar measure against Lebesgue measure on the
    /// coordinates (`a⁻²` on `ax+b`).
    pub fn haar_density(&self, g: &[f64]) -> f64 {
        match self {
            GroupModel::AxPlusB => 1.0 / (g[0] * g[0]),
            _ => 1.0,
        }
    }

    pub fn mul_f64(&self, g: &[f64], h: &[f64]) -> Vec<f64> {
        match self {
            GroupModel::AxPlusB => vec![g[0] * h[0], g[0] * h[1] + g[1]],
            _ => g.iter().zip(h).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn inv_f64(&self, g: &[f64]) -> Vec<f64> {
        match self {
            GroupModel::AxPlusB => vec![1.0 / g[0], -g[1] / g[0]],
            _ => g.iter().map(|x| -x).collect(),
        }
    }

    /// Max-norm distance between coordinate vectors (real models only).
    pub fn distance(&self, g: &[ExactScalar], h: &[ExactScalar]) -> Result<ExactScalar> {
        if !self.is_real() {
            return Err(Error::DomainMismatch(format!("no real distance on {self}")));
        }
        let mut best = ExactScalar::zero();
        for (x, y) in g.iter().zip(h) {
            let d = x.try_sub(y)?.abs()?;
            if d > best {
                best = d;
            }
        }
        Ok(best)
    }
}

impl fmt::Display for GroupModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupModel::AdditiveRn { n, domain } => write!(f, "Rn:{n}:{domain}"),
            GroupModel::AxPlusB => write!(f, "axb"),
            GroupModel::AdditiveSeries { p, precision, m } => {
                write!(f, "series:p={p}:N={precision}:m={m}")
            }
        }
    }
}

impl Serialize for GroupModel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

fn parse_kv<T: FromStr>(part: &str, key: &str) -> Result<T> {
    part.strip_prefix(key)
        .and_then(|v| v.strip_prefix('='))
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| Error::Parse(format!("expected {key}=<value>, got {part:?}")))
}

impl FromStr for GroupModel {
    type Err = Error;

    /// Descriptors: `Rn:2:quad(2)`, `Rn:1:rat`, `axb`,
    /// `series:p=2:N=16:m=2`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        match parts.as_slice() {
            ["axb"] => Ok(GroupModel::AxPlusB),
            ["Rn", n, dom] => {
                let n: usize = n
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad dimension {n:?}")))?;
                let domain = if *dom == "rat" {
                    ScalarDomain::Rational
                } else if let Some(d) = dom.strip_prefix("quad(").and_then(|r| r.strip_suffix(')')) {
                    let d: u64 = d
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad field parameter {d:?}")))?;
                    if !crate::exactnum::is_squarefree(d) {
                        return Err(Error::InvalidScalar(format!("{d} is not square-free")));
                    }
                    ScalarDomain::Quadratic(d)
                } else {
                    return Err(Error::Parse(format!("unknown scalar domain {dom:?}")));
                };
                if n == 0 {
                    return Err(Error::Parse("dimension must be positive".into()));
                }
                Ok(GroupModel::AdditiveRn { n, domain })
            }
            ["series", p, n, m] => {
                let p: u32 = parse_kv(p, "p")?;
                let precision: i64 = parse_kv(n, "N")?;
                let m: usize = parse_kv(m, "m")?;
                if !crate::exactnum::is_prime(p) {
                    return Err(Error::NotPrime(p));
                }
                if precision < 1 || m == 0 {
                    return Err(Error::Parse(format!("bad series model {s:?}")));
                }
                Ok(GroupModel::AdditiveSeries { p, precision, m })
            }
            _ => Err(Error::Parse(format!("unknown model descriptor {s:?}"))),
        }
    }
}

/// A group element together with its model.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupPoint {
    model: GroupModel,
    coords: Coords,
}

impl GroupPoint {
    pub fn new(model: GroupModel, coords: Coords) -> Result<Self> {
        model.validate(&coords)?;
        Ok(GroupPoint { model, coords })
    }

    pub fn identity(model: GroupModel) -> Self {
        GroupPoint {
            model,
            coords: model.identity(),
        }
    }

    pub fn model(&self) -> GroupModel {
        self.model
    }

    pub fn coords(&self) -> &[ExactScalar] {
        &self.coords
    }

    pub fn into_coords(self) -> Coords {
        self.coords
    }
}

impl fmt::Display for GroupPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Multiplication or inversion; `h` is ignored for inversion.
pub fn group_op(g: &GroupPoint, h: &GroupPoint, op: GroupOp) -> Result<GroupPoint> {
    let model = g.model;
    match op {
        GroupOp::Mul => {
            if h.model != model {
                return Err(Error::ModelMismatch(format!("{model} vs {}", h.model)));
            }
            Ok(GroupPoint {
                model,
                coords: model.mul(&g.coords, &h.coords)?,
            })
        }
        GroupOp::Inv => Ok(GroupPoint {
            model,
            coords: model.inv(&g.coords)?,
        }),
    }
}

pub fn modular_function(model: GroupModel, g: &GroupPoint) -> Result<ExactScalar> {
    if g.model != model {
        return Err(Error::ModelMismatch(format!("{model} vs {}", g.model)));
    }
    model.modular_function(&g.coords)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> ExactScalar {
        ExactScalar::Rat(rat(n, d))
    }

    fn axb(a: ExactScalar, b: ExactScalar) -> GroupPoint {
        GroupPoint::new(GroupModel::AxPlusB, vec![a, b]).unwrap()
    }

    #[test]
    fn ax_plus_b_law() {
        let g = axb(r(2, 1), r(3, 1));
        let h = axb(r(1, 2), r(1, 1));
        let gh = group_op(&g, &h, GroupOp::Mul).unwrap();
        assert_eq!(gh.coords(), &[r(1, 1), r(5, 1)]);
        let gi = group_op(&g, &g, GroupOp::Inv).unwrap();
        assert_eq!(gi.coords(), &[r(1, 2), r(-3, 2)]);
    }

    #[test]
    fn additive_law() {
        let m: GroupModel = "Rn:2:rat".parse().unwrap();
        let a = GroupPoint::new(m, vec![r(1, 1), r(0, 1)]).unwrap();
        let b = GroupPoint::new(m, vec![r(0, 1), r(1, 1)]).unwrap();
        assert_eq!(group_op(&a, &b, GroupOp::Mul).unwrap().coords(), &[r(1, 1), r(1, 1)]);
    }

    #[test]
    fn modular_function_values() {
        let g = axb(r(2, 1), r(7, 1));
        assert_eq!(modular_function(GroupModel::AxPlusB, &g).unwrap(), r(1, 2));
        let m: GroupModel = "Rn:2:quad(2)".parse().unwrap();
        let p = GroupPoint::identity(m);
        assert_eq!(modular_function(m, &p).unwrap(), r(1, 1));
        let e = GroupPoint::identity(GroupModel::AxPlusB);
        assert_eq!(modular_function(GroupModel::AxPlusB, &e).unwrap(), r(1, 1));
    }

    #[test]
    fn rejects_bad_points() {
        assert!(GroupPoint::new(GroupModel::AxPlusB, vec![r(0, 1), r(1, 1)]).is_err());
        assert!(GroupPoint::new(GroupModel::AxPlusB, vec![r(1, 1)]).is_err());
        let m: GroupModel = "Rn:1:rat".parse().unwrap();
        let q: ExactScalar = "1+1*sqrt(2)".parse().unwrap();
        assert!(GroupPoint::new(m, vec![q]).is_err());
        let a = GroupPoint::identity(m);
        let b = GroupPoint::identity(GroupModel::AxPlusB);
        assert!(matches!(
            group_op(&a, &b, GroupOp::Mul),
            Err(Error::ModelMismatch(_))
        ));
    }

    #[test]
    fn descriptors_roundtrip() {
        for s in ["Rn:2:quad(2)", "Rn:3:rat", "axb", "series:p=2:N=16:m=2"] {
            let m: GroupModel = s.parse().unwrap();
            assert_eq!(m.to_string(), s);
        }
        assert!("series:p=4:N=16:m=2".parse::<GroupModel>().is_err());
        assert!("Rn:2:quad(4)".parse::<GroupModel>().is_err());
        assert!("sl2".parse::<GroupModel>().is_err());
    }

    fn small_rat() -> impl Strategy<Value = ExactScalar> {
        (-40i64..40, 1i64..12).prop_map(|(n, d)| r(n, d))
    }

    fn pos_rat() -> impl Strategy<Value = ExactScalar> {
        (1i64..40, 1i64..12).prop_map(|(n, d)| r(n, d))
    }

    fn axb_point() -> impl Strategy<Value = Coords> {
        (pos_rat(), small_rat()).prop_map(|(a, b)| vec![a, b])
    }

    fn quad_point() -> impl Strategy<Value = Coords> {
        prop::collection::vec((-20i64..20, -20i64..20, 1i64..6), 2).prop_map(|v| {
            v.into_iter()
                .map(|(a, b, d)| {
                    crate::exactnum::QuadElem::new(rat(a, d), int(b), 2)
                        .unwrap()
                        .into()
                })
                .collect()
        })
    }

    fn series_point() -> impl Strategy<Value = Coords> {
        prop::collection::vec(prop::collection::vec(0i64..3, 6), 2).prop_map(|v| {
            v.into_iter()
                .map(|c| ExactScalar::Series(FpSeries::new(3, 6, 0, &c).unwrap()))
                .collect()
        })
    }

    fn check_axioms(m: GroupModel, g: &Coords, h: &Coords, k: &Coords) {
        let e = m.identity();
        let gh_k = m.mul(&m.mul(g, h).unwrap(), k).unwrap();
        let g_hk = m.mul(g, &m.mul(h, k).unwrap()).unwrap();
        assert_eq!(gh_k, g_hk);
        assert_eq!(&m.mul(&e, g).unwrap(), g);
        assert_eq!(&m.mul(g, &e).unwrap(), g);
        assert_eq!(m.mul(g, &m.inv(g).unwrap()).unwrap(), e);
        assert_eq!(m.mul(&m.inv(g).unwrap(), g).unwrap(), e);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn axb_group_axioms(g in axb_point(), h in axb_point(), k in axb_point()) {
            let m = GroupModel::AxPlusB;
            check_axioms(m, &g, &h, &k);
            let dg = m.modular_function(&g).unwrap();
            let dh = m.modular_function(&h).unwrap();
            let dgh = m.modular_function(&m.mul(&g, &h).unwrap()).unwrap();
            prop_assert_eq!(dgh, dg.try_mul(&dh).unwrap());
            let dinv = m.modular_function(&m.inv(&g).unwrap()).unwrap();
            prop_assert_eq!(dinv.try_mul(&dg).unwrap(), ExactScalar::one());
        }

        #[test]
        fn quadratic_rn_group_axioms(g in quad_point(), h in quad_point(), k in quad_point()) {
            check_axioms("Rn:2:quad(2)".parse().unwrap(), &g, &h, &k);
        }

        #[test]
        fn series_group_axioms(g in series_point(), h in series_point(), k in series_point()) {
            let m: GroupModel = "series:p=3:N=6:m=2".parse().unwrap();
            m.validate(&g).unwrap();
            check_axioms(m, &g, &h, &k);
        }
    }
}
