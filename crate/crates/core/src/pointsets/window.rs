use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{ExactScalar, Rational};
use crate::groupmodels::GroupModel;

/// Closed interval with exact endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: ExactScalar,
    pub hi: ExactScalar,
}

impl Interval {
    pub fn new(lo: impl Into<ExactScalar>, hi: impl Into<ExactScalar>) -> Result<Self> {
        let (lo, hi) = (lo.into(), hi.into());
        if lo.real_cmp(&hi)? == Ordering::Greater {
            return Err(Error::Parse(format!("empty interval [{lo},{hi}]")));
        }
        Ok(Interval { lo, hi })
    }

    pub fn symmetric(r: impl Into<ExactScalar>) -> Result<Self> {
        let r = r.into();
        Interval::new(r.neg(), r)
    }

    pub fn contains(&self, x: &ExactScalar) -> bool {
        matches!(
            (x.real_cmp(&self.lo), x.real_cmp(&self.hi)),
            (Ok(a), Ok(b)) if a != Ordering::Less && b != Ordering::Greater
        )
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        other.contains(&self.lo) && other.contains(&self.hi)
    }

    pub fn minkowski_sum(&self, other: &Interval) -> Result<Interval> {
        Ok(Interval {
            lo: self.lo.try_add(&other.lo)?,
            hi: self.hi.try_add(&other.hi)?,
        })
    }

    pub fn negated(&self) -> Interval {
        Interval {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
        }
    }

    pub fn shift(&self, by: &ExactScalar) -> Result<Interval> {
        Ok(Interval {
            lo: self.lo.try_add(by)?,
            hi: self.hi.try_add(by)?,
        })
    }

    /// `[lo + r, hi − r]`, or `None` if that is empty.
    pub fn shrink(&self, r: &ExactScalar) -> Result<Option<Interval>> {
        let lo = self.lo.try_add(r)?;
        let hi = self.hi.try_sub(r)?;
        Ok((lo.real_cmp(&hi)? != Ordering::Greater).then_some(Interval { lo, hi }))
    }

    pub fn is_symmetric(&self) -> bool {
        self.lo == self.hi.neg()
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.lo, self.hi)
    }
}

impl FromStr for Interval {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("expected [lo,hi], got {s:?}")))?;
        let (lo, hi) = inner
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("expected [lo,hi], got {s:?}")))?;
        Interval::new(lo.parse::<ExactScalar>()?, hi.parse::<ExactScalar>()?)
    }
}

/// A coordinate box, or the whole space.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Window {
    All,
    Box(Vec<Interval>),
}

impl Window {
    /// `[-r, r]^n`.
    pub fn cube(n: usize, r: impl Into<ExactScalar>) -> Result<Self> {
        let i = Interval::symmetric(r)?;
        Ok(Window::Box(vec![i; n]))
    }

    /// Box of max-norm radius `r` around the identity of `model`.
    pub fn ball(model: &GroupModel, r: impl Into<ExactScalar>) -> Result<Self> {
        let r = r.into();
        let e = model.identity();
        let ivs = e
            .iter()
            .map(|c| Interval::new(c.try_sub(&r)?, c.try_add(&r)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(Window::Box(ivs))
    }

    pub fn from_rationals(bounds: &[(Rational, Rational)]) -> Result<Self> {
        let ivs = bounds
            .iter()
            .map(|(lo, hi)| Interval::new(lo.clone(), hi.clone()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Window::Box(ivs))
    }

    pub fn intervals(&self) -> Option<&[Interval]> {
        match self {
            Window::All => None,
            Window::Box(v) => Some(v),
        }
    }

    pub fn contains(&self, p: &[ExactScalar]) -> bool {
        match self {
            Window::All => true,
            Window::Box(v) => v.len() == p.len() && v.iter().zip(p).all(|(i, x)| i.contains(x)),
        }
    }

    pub fn is_subset_of(&self, other: &Window) -> bool {
        match (self, other) {
            (_, Window::All) => true,
            (Window::All, Window::Box(_)) => false,
            (Window::Box(a), Window::Box(b)) => {
                a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.is_subset_of(y))
            }
        }
    }

    /// Shrinks every side by `r`; `None` when nothing is left.
    pub fn shrink(&self, r: &ExactScalar) -> Result<Option<Window>> {
        match self {
            Window::All => Ok(Some(Window::All)),
            Window::Box(v) => {
                let mut out = Vec::with_capacity(v.len());
                for i in v {
                    match i.shrink(r)? {
                        Some(j) => out.push(j),
                        None => return Ok(None),
                    }
                }
                Ok(Some(Window::Box(out)))
            }
        }
    }

    /// Common part of two windows; `None` when they are disjoint.
    pub fn intersect(&self, other: &Window) -> Option<Window> {
        match (self, other) {
            (Window::All, w) | (w, Window::All) => Some(w.clone()),
            (Window::Box(a), Window::Box(b)) => {
                if a.len() != b.len() {
                    return None;
                }
                let mut out = Vec::with_capacity(a.len());
                for (x, y) in a.iter().zip(b) {
                    let lo = x.lo.clone().max(y.lo.clone());
                    let hi = x.hi.clone().min(y.hi.clone());
                    if lo > hi {
                        return None;
                    }
                    out.push(Interval { lo, hi });
                }
                Some(Window::Box(out))
            }
        }
    }

    pub fn grow(&self, r: &ExactScalar) -> Result<Window> {
        Ok(self.shrink(&r.neg())?.expect("growing never empties"))
    }

    /// Image of the box under left multiplication by `g`. Boxes stay boxes
    /// for the additive models and for `ax+b` (where `a > 0`).
    pub fn left_translate(&self, model: &GroupModel, g: &[ExactScalar]) -> Result<Window> {
        let Window::Box(v) = self else {
            return Ok(Window::All);
        };
        match model {
            GroupModel::AxPlusB => {
                let (a, b) = (&g[0], &g[1]);
                let x = Interval {
                    lo: a.try_mul(&v[0].lo)?,
                    hi: a.try_mul(&v[0].hi)?,
                };
                let y = Interval {
                    lo: a.try_mul(&v[1].lo)?.try_add(b)?,
                    hi: a.try_mul(&v[1].hi)?.try_add(b)?,
                };
                Ok(Window::Box(vec![x, y]))
            }
            _ => Ok(Window::Box(
                v.iter().zip(g).map(|(i, s)| i.shift(s)).collect::<Result<_>>()?,
            )),
        }
    }

    /// Largest absolute value of any endpoint (the max-norm radius of the
    /// smallest centred cube containing the box).
    pub fn radius(&self) -> Option<ExactScalar> {
        let v = self.intervals()?;
        let mut best = ExactScalar::zero();
        for i in v {
            for e in [&i.lo, &i.hi] {
                let a = e.abs().ok()?;
                if a > best {
                    best = a;
                }
            }
        }
        Some(best)
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Window::All => write!(f, "all"),
            Window::Box(v) => {
                for (k, i) in v.iter().enumerate() {
                    if k > 0 {
                        write!(f, "x")?;
                    }
                    write!(f, "{i}")?;
                }
                Ok(())
            }
        }
    }
}

impl Serialize for Window {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl FromStr for Window {
    type Err = Error;

    /// `all` or `[lo,hi]x[lo,hi]x...`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "all" {
            return Ok(Window::All);
        }
        let mut out = Vec::new();
        let mut rest = s;
        while !rest.is_empty() {
            let end = rest
                .find(']')
                .ok_or_else(|| Error::Parse(format!("unterminated interval in {s:?}")))?;
            out.push(rest[..=end].parse::<Interval>()?);
            rest = &rest[end + 1..];
            if let Some(r) = rest.strip_prefix('x') {
                rest = r;
            } else if !rest.is_empty() {
                return Err(Error::Parse(format!("expected 'x' between intervals in {s:?}")));
            }
        }
        if out.is_empty() {
            return Err(Error::Parse("empty window".into()));
        }
        Ok(Window::Box(out))
    }
}
