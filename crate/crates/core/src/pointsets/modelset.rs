//! Cut-and-project sets `Λ(I) = Γ ∩ (R × I)` with
//! `Γ = {(m + n√d, m − n√d) : m, n ∈ Z}`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{int, is_squarefree, ExactScalar, QuadElem, Rational, ScalarDomain};
use crate::groupmodels::{Coords, GroupModel};

use super::order::sort_by_norm;
use super::window::{Interval, Window};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModelSet {
    d: u64,
    window: Interval,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelSetOp {
    Product,
    Inverse,
    Power(usize),
}

/// Evidence gathered while checking that window arithmetic describes a
/// product of model sets on a sampled physical range.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrossCheck {
    /// Physical radius of the sample.
    pub radius: ExactScalar,
    /// Products of sampled factors confirmed to lie in the result.
    pub products_checked: usize,
    /// Result points for which an explicit factorization was found.
    pub decompositions_found: usize,
}

impl ModelSet {
    /// `Λ(I)` over `Q(√d)`; the window endpoints must be rational.
    pub fn new(d: u64, window: Interval) -> Result<Self> {
        if !is_squarefree(d) {
            return Err(Error::InvalidScalar(format!("{d} is not square-free")));
        }
        if window.lo.as_rational().is_none() || window.hi.as_rational().is_none() {
            return Err(Error::InvalidScalar("model set window needs rational endpoints".into()));
        }
        Ok(ModelSet { d, window })
    }

    pub fn symmetric(d: u64, r: Rational) -> Result<Self> {
        ModelSet::new(d, Interval::symmetric(r)?)
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn window(&self) -> &Interval {
        &self.window
    }

    pub fn model(&self) -> GroupModel {
        GroupModel::rn(2, ScalarDomain::Quadratic(self.d))
    }

    fn sqrt_d(&self) -> QuadElem {
        QuadElem::new(int(0), int(1), self.d).expect("square-free d")
    }

    pub fn lattice_point(&self, m: i64, n: i64) -> Coords {
        let x = QuadElem::integer(m, n, self.d).expect("square-free d");
        let y = x.conjugate();
        vec![x.into(), y.into()]
    }

    /// `(m, n)` with `p = (m + n√d, m − n√d)`, if `p ∈ Γ`.
    pub fn lattice_coordinates(&self, p: &[ExactScalar]) -> Option<(i64, i64)> {
        if p.len() != 2 {
            return None;
        }
        let x = p[0].to_quad(self.d).ok()?;
        let y = p[1].to_quad(self.d).ok()?;
        if !x.a().is_integer() || !x.b().is_integer() || y != x.conjugate() {
            return None;
        }
        Some((x.a().to_integer().to_i64()?, x.b().to_integer().to_i64()?))
    }

    pub fn internal_window_contains(&self, y: &ExactScalar) -> bool {
        self.window.contains(y)
    }

    pub fn contains(&self, p: &[ExactScalar]) -> bool {
        self.lattice_coordinates(p).is_some() && self.window.contains(&p[1])
    }

    pub fn contains_identity(&self) -> bool {
        self.window.contains(&ExactScalar::zero())
    }

    pub fn is_symmetric(&self) -> bool {
        self.window.is_symmetric()
    }

    /// Every point of `Λ` in a box `X × Y` (physical × internal).
    pub fn points_in(&self, w: &Window) -> Result<Vec<Coords>> {
        let ivs = w
            .intervals()
            .ok_or_else(|| Error::UnboundedWindow("model set enumeration needs a box".into()))?;
        if ivs.len() != 2 {
            return Err(Error::InvalidPoint("model set windows are two-dimensional".into()));
        }
        let (x, y) = (&ivs[0], &ivs[1]);
        let ylo = max_real(&y.lo, &self.window.lo)?;
        let yhi = min_real(&y.hi, &self.window.hi)?;
        if ylo.real_cmp(&yhi)? == Ordering::Greater {
            return Ok(Vec::new());
        }
        // x − y = 2n√d, so n√d ∈ [(x.lo − yhi)/2, (x.hi − ylo)/2].
        let half = ExactScalar::Rat(Rational::new(1.into(), 2.into()));
        let over = ExactScalar::Quad(self.sqrt_d()).try_mul(&ExactScalar::Rat(Rational::new(1.into(), (self.d as i64).into())))?;
        let n_lo = x.lo.try_sub(&yhi)?.try_mul(&half)?.try_mul(&over)?.ceil()?;
        let n_hi = x.hi.try_sub(&ylo)?.try_mul(&half)?.try_mul(&over)?.floor()?;
        let (n_lo, n_hi) = (to_i64(&n_lo)?, to_i64(&n_hi)?);
        let mut out = Vec::new();
        let sd = ExactScalar::Quad(self.sqrt_d());
        for n in n_lo..=n_hi {
            let ns = sd.try_mul(&ExactScalar::from(n))?;
            let lo = max_real(&x.lo.try_sub(&ns)?, &ylo.try_add(&ns)?)?;
            let hi = min_real(&x.hi.try_sub(&ns)?, &yhi.try_add(&ns)?)?;
            let (m_lo, m_hi) = (to_i64(&lo.ceil()?)?, to_i64(&hi.floor()?)?);
            for m in m_lo..=m_hi {
                let p = self.lattice_point(m, n);
                debug_assert!(w.contains(&p) && self.contains(&p));
                out.push(p);
            }
        }
        sort_by_norm(&self.model(), &mut out);
        Ok(out)
    }

    /// Points of `Λ` whose physical coordinate has absolute value at most `r`.
    pub fn points_in_physical(&self, r: &ExactScalar) -> Result<Vec<Coords>> {
        let w = Window::Box(vec![Interval::symmetric(r.clone())?, self.window.clone()]);
        self.points_in(&w)
    }

    /// Points `(m + n√d, m − n√d) ∈ Λ` with `|m|, |n| ≤ k`.
    pub fn points_in_index_window(&self, k: i64) -> Vec<Coords> {
        let mut out = Vec::new();
        for n in -k..=k {
            for m in -k..=k {
                let p = self.lattice_point(m, n);
                if self.window.contains(&p[1]) {
                    out.push(p);
                }
            }
        }
        sort_by_norm(&self.model(), &mut out);
        out
    }

    pub fn same_lattice(&self, other: &ModelSet) -> Result<()> {
        if self.d != other.d {
            return Err(Error::LatticeMismatch(format!("d = {} vs d = {}", self.d, other.d)));
        }
        Ok(())
    }

    pub fn product_window(&self, other: &ModelSet) -> Result<ModelSet> {
        self.same_lattice(other)?;
        ModelSet::new(self.d, self.window.minkowski_sum(&other.window)?)
    }

    pub fn inverse(&self) -> ModelSet {
        ModelSet {
            d: self.d,
            window: self.window.negated(),
        }
    }
}

fn to_i64(n: &num_bigint::BigInt) -> Result<i64> {
    n.to_i64()
        .ok_or_else(|| Error::UnboundedWindow("window bound does not fit in 64 bits".into()))
}

fn max_real(a: &ExactScalar, b: &ExactScalar) -> Result<ExactScalar> {
    Ok(if a.real_cmp(b)? == Ordering::Less { b.clone() } else { a.clone() })
}

fn min_real(a: &ExactScalar, b: &ExactScalar) -> Result<ExactScalar> {
    Ok(if a.real_cmp(b)? == Ordering::Greater { b.clone() } else { a.clone() })
}

/// Checks `Λ₁·Λ₂ = Γ ∩ (R × (I₁ + I₂))` on the physical range `[−r, r]`:
/// every product of sampled factors is a member of the window-sum set, and
/// every member is split explicitly as `a + b` with `a ∈ Λ₁`, `b ∈ Λ₂`.
fn cross_check_product(a: &ModelSet, b: &ModelSet, sum: &ModelSet, r: &ExactScalar) -> Result<CrossCheck> {
    let model = sum.model();
    let fa = a.points_in_physical(r)?;
    let fb = b.points_in_physical(r)?;
    let mut products_checked = 0;
    for x in &fa {
        for y in &fb {
            let z = model.mul(x, y)?;
            if !sum.contains(&z) {
                return Err(Error::CrossCheckFailed(format!("product ({}, {}) not in window sum", z[0], z[1])));
            }
            products_checked += 1;
        }
    }
    // Factors are searched among members of Λ₁ with physical coordinate up
    // to 2r, in norm order.
    let search = a.points_in_physical(&r.try_add(r)?)?;
    let targets = sum.points_in_physical(r)?;
    let mut decompositions_found = 0;
    for z in &targets {
        let found = search.iter().any(|x| {
            model
                .left_quotient(x, z)
                .map(|y| b.contains(&y))
                .unwrap_or(false)
        });
        if !found {
            return Err(Error::CrossCheckFailed(format!(
                "({}, {}) has no factorization within the search range",
                z[0], z[1]
            )));
        }
        decompositions_found += 1;
    }
    Ok(CrossCheck {
        radius: r.clone(),
        products_checked,
        decompositions_found,
    })
}

/// Window arithmetic for products, inverses and powers of model sets, with
/// the sampled cross-check on the physical range `[−r, r]`.
pub fn modelset_product(
    a: &ModelSet,
    b: &ModelSet,
    op: ModelSetOp,
    r: &ExactScalar,
) -> Result<(ModelSet, Vec<CrossCheck>)> {
    a.same_lattice(b)?;
    match op {
        ModelSetOp::Product => {
            let sum = a.product_window(b)?;
            let check = cross_check_product(a, b, &sum, r)?;
            Ok((sum, vec![check]))
        }
        ModelSetOp::Inverse => {
            let inv = a.inverse();
            let model = a.model();
            let mut n = 0;
            for p in a.points_in_physical(r)? {
                if !inv.contains(&model.inv(&p)?) {
                    return Err(Error::CrossCheckFailed(format!("inverse of ({}, {})", p[0], p[1])));
                }
                n += 1;
            }
            for p in inv.points_in_physical(r)? {
                if !a.contains(&model.inv(&p)?) {
                    return Err(Error::CrossCheckFailed(format!("({}, {}) is not an inverse", p[0], p[1])));
                }
                n += 1;
            }
            Ok((
                inv,
                vec![CrossCheck {
                    radius: r.clone(),
                    products_checked: n,
                    decompositions_found: n,
                }],
            ))
        }
        ModelSetOp::Power(k) => {
            if k == 0 {
                return Err(Error::InvalidPoint("power must be at least 1".into()));
            }
            let mut acc = a.clone();
            let mut checks = Vec::new();
            for _ in 1..k {
                let next = acc.product_window(a)?;
                checks.push(cross_check_product(&acc, a, &next, r)?);
                acc = next;
            }
            Ok((acc, checks))
        }
    }
}

impl fmt::Display for ModelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cutproject d={} window={}", self.d, self.window)
    }
}

impl FromStr for ModelSet {
    type Err = Error;

    /// `cutproject d=<d> window=[lo,hi]`.
    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split_whitespace();
        if parts.next() != Some("cutproject") {
            return Err(Error::Parse(format!("expected 'cutproject', got {s:?}")));
        }
        let mut d = None;
        let mut window = None;
        for p in parts {
            if let Some(v) = p.strip_prefix("d=") {
                d = Some(v.parse::<u64>().map_err(|_| Error::Parse(format!("bad d in {s:?}")))?);
            } else if let Some(v) = p.strip_prefix("window=") {
                window = Some(v.parse::<Interval>()?);
            } else {
                return Err(Error::Parse(format!("unknown field {p:?}")));
            }
        }
        match (d, window) {
            (Some(d), Some(w)) => ModelSet::new(d, w),
            _ => Err(Error::Parse(format!("cutproject needs d= and window=: {s:?}"))),
        }
    }
}

impl Serialize for ModelSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lam(r: i64) -> ModelSet {
        ModelSet::symmetric(2, int(r)).unwrap()
    }

    fn s(x: &str) -> ExactScalar {
        x.parse().unwrap()
    }

    #[test]
    fn membership_examples() {
        let l = lam(1);
        assert!(l.contains(&[s("1"), s("1")]));
        assert!(l.contains(&[s("1+1*sqrt(2)"), s("1-1*sqrt(2)")]));
        assert!(!l.contains(&[s("3"), s("3")]));
        assert!(!l.contains(&[s("1+1*sqrt(2)"), s("1+1*sqrt(2)")]));
        assert!(!l.contains(&[s("1/2"), s("1/2")]));
        assert!(l.contains_identity() && l.is_symmetric());
    }

    #[test]
    fn box_enumeration_matches_index_scan() {
        // Oracle: scan all (m, n) in a generous index range and filter.
        let l = lam(1);
        let r = s("25");
        let got = l.points_in_physical(&r).unwrap();
        let mut want: Vec<Coords> = l
            .points_in_index_window(40)
            .into_iter()
            .filter(|p| p[0].abs().unwrap() <= r)
            .collect();
        sort_by_norm(&l.model(), &mut want);
        assert_eq!(got, want);
        assert!(got.len() >= 10);
        assert!(l.points_in_physical(&s("50")).unwrap().len() > got.len());
    }

    #[test]
    fn square_is_window_sum() {
        let (sq, checks) = modelset_product(&lam(1), &lam(1), ModelSetOp::Product, &s("12")).unwrap();
        assert_eq!(sq, lam(2));
        assert!(checks[0].decompositions_found > 0);
        let (cube, checks) = modelset_product(&lam(1), &lam(1), ModelSetOp::Power(3), &s("8")).unwrap();
        assert_eq!(cube, lam(3));
        assert_eq!(checks.len(), 2);
        let (inv, _) = modelset_product(&lam(1), &lam(1), ModelSetOp::Inverse, &s("8")).unwrap();
        assert_eq!(inv, lam(1));
    }

    #[test]
    fn boundary_failure_is_reported() {
        // Λ([0,1/2])·Λ([0,1/2]) would need a factor with internal coordinate
        // exactly 1/2 to reach internal coordinate 1; no lattice point has
        // that conjugate, yet (1, 1) lies in the window-sum set.
        let a = ModelSet::new(2, Interval::new(int(0), Rational::new(1.into(), 2.into())).unwrap()).unwrap();
        let err = modelset_product(&a, &a, ModelSetOp::Product, &s("6")).unwrap_err();
        assert!(matches!(err, Error::CrossCheckFailed(_)));
    }

    #[test]
    fn lattice_mismatch() {
        let a = lam(1);
        let b = ModelSet::symmetric(3, int(1)).unwrap();
        assert!(matches!(
            modelset_product(&a, &b, ModelSetOp::Product, &s("4")),
            Err(Error::LatticeMismatch(_))
        ));
    }

    #[test]
    fn text_roundtrip() {
        let l: ModelSet = "cutproject d=2 window=[-1,1]".parse().unwrap();
        assert_eq!(l, lam(1));
        assert_eq!(l.to_string(), "cutproject d=2 window=[-1,1]");
    }
}
