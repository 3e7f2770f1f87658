use std::cmp::Ordering;
use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::exactnum::ExactScalar;
use crate::groupmodels::{Coords, GroupModel};

use super::order::sort_by_norm;
use super::window::{Interval, Window};

/// A finite sample of a discrete set inside a window.
///
/// When `complete` is set, the stored points are exactly the represented
/// set intersected with the window, so membership inside the window is
/// decidable. Otherwise the patch is a heuristic truncation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitePatch {
    model: GroupModel,
    points: BTreeSet<Coords>,
    window: Window,
    complete: bool,
}

impl FinitePatch {
    pub fn new(model: GroupModel, points: Vec<Coords>, window: Window, complete: bool) -> Result<Self> {
        let mut set = BTreeSet::new();
        for p in points {
            model.validate(&p)?;
            if !window.contains(&p) {
                return Err(Error::InvalidPoint(format!("{} lies outside the window {window}", fmt_point(&p))));
            }
            let shown = fmt_point(&p);
            if !set.insert(p) {
                return Err(Error::DuplicatePoint(shown));
            }
        }
        Ok(FinitePatch {
            model,
            points: set,
            window,
            complete,
        })
    }

    /// Like [`FinitePatch::new`] but silently drops duplicates and points
    /// outside the window.
    pub fn collect(model: GroupModel, points: impl IntoIterator<Item = Coords>, window: Window, complete: bool) -> Result<Self> {
        let mut set = BTreeSet::new();
        for p in points {
            model.validate(&p)?;
            if window.contains(&p) {
                set.insert(p);
            }
        }
        Ok(FinitePatch {
            model,
            points: set,
            window,
            complete,
        })
    }

    pub fn empty(model: GroupModel, window: Window) -> Self {
        FinitePatch {
            model,
            points: BTreeSet::new(),
            window,
            complete: true,
        }
    }

    pub fn model(&self) -> GroupModel {
        self.model
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = &Coords> {
        self.points.iter()
    }

    /// Points in the deterministic norm order.
    pub fn sorted_points(&self) -> Vec<Coords> {
        let mut v: Vec<Coords> = self.points.iter().cloned().collect();
        sort_by_norm(&self.model, &mut v);
        v
    }

    pub fn has_point(&self, p: &[ExactScalar]) -> bool {
        self.points.contains(p)
    }

    /// `Some(true)` for stored points, `Some(false)` for other points of a
    /// complete window, `None` where the patch cannot tell.
    pub fn contains(&self, p: &[ExactScalar]) -> Option<bool> {
        if self.points.contains(p) {
            Some(true)
        } else if self.complete && self.window.contains(p) {
            Some(false)
        } else {
            None
        }
    }

    /// The stored points inside `w`; errors if completeness on `w` is
    /// claimed but not guaranteed.
    pub fn sample(&self, w: &Window, require_complete: bool) -> Result<Vec<Coords>> {
        if require_complete && !(self.complete && w.is_subset_of(&self.window)) {
            return Err(Error::IncompletePatch);
        }
        let mut v: Vec<Coords> = self.points.iter().filter(|p| w.contains(p)).cloned().collect();
        sort_by_norm(&self.model, &mut v);
        Ok(v)
    }

    /// Restriction to a smaller window (complete if `self` is complete there).
    pub fn restrict(&self, w: &Window) -> Result<FinitePatch> {
        let complete = self.complete && w.is_subset_of(&self.window);
        let pts = self.points.iter().filter(|p| w.contains(p)).cloned();
        FinitePatch::collect(self.model, pts, w.clone(), complete)
    }

    pub fn union(&self, other: &FinitePatch) -> Result<FinitePatch> {
        if self.model != other.model {
            return Err(Error::ModelMismatch(format!("{} vs {}", self.model, other.model)));
        }
        if self.window != other.window {
            return Err(Error::WindowTooSmall("union of patches needs a common window".into()));
        }
        let pts = self.points.iter().chain(other.points.iter()).cloned();
        FinitePatch::collect(self.model, pts, self.window.clone(), self.complete && other.complete)
    }

    /// Left translate `g·P`, with the window moved along.
    pub fn left_translate(&self, g: &[ExactScalar]) -> Result<FinitePatch> {
        let w = self.window.left_translate(&self.model, g)?;
        let pts = self
            .points
            .iter()
            .map(|p| self.model.mul(g, p))
            .collect::<Result<Vec<_>>>()?;
        FinitePatch::collect(self.model, pts, w, self.complete)
    }

    pub fn inverse(&self) -> Result<FinitePatch> {
        let w = inverse_window(&self.model, &self.window)?;
        let pts = self
            .points
            .iter()
            .map(|p| self.model.inv(p))
            .collect::<Result<Vec<_>>>()?;
        FinitePatch::collect(self.model, pts, w, self.complete)
    }
}

pub fn fmt_point(p: &[ExactScalar]) -> String {
    let parts: Vec<String> = p.iter().map(|c| c.to_string()).collect();
    format!("({})", parts.join(", "))
}

fn real_min_max(vals: &[ExactScalar]) -> Result<Interval> {
    let mut lo = vals[0].clone();
    let mut hi = vals[0].clone();
    for v in &vals[1..] {
        if v.real_cmp(&lo)? == Ordering::Less {
            lo = v.clone();
        }
        if v.real_cmp(&hi)? == Ordering::Greater {
            hi = v.clone();
        }
    }
    Interval::new(lo, hi)
}

/// A box containing `{g·h : g ∈ A, h ∈ B}` for boxes `A`, `B`.
pub fn product_window(model: &GroupModel, a: &Window, b: &Window) -> Result<Window> {
    let (Some(x), Some(y)) = (a.intervals(), b.intervals()) else {
        return Ok(Window::All);
    };
    match model {
        GroupModel::AxPlusB => {
            let aa = real_min_max(&[
                x[0].lo.try_mul(&y[0].lo)?,
                x[0].lo.try_mul(&y[0].hi)?,
                x[0].hi.try_mul(&y[0].lo)?,
                x[0].hi.try_mul(&y[0].hi)?,
            ])?;
            let ab = real_min_max(&[
                x[0].lo.try_mul(&y[1].lo)?,
                x[0].lo.try_mul(&y[1].hi)?,
                x[0].hi.try_mul(&y[1].lo)?,
                x[0].hi.try_mul(&y[1].hi)?,
            ])?;
            Ok(Window::Box(vec![aa, ab.minkowski_sum(&x[1])?]))
        }
        _ => Ok(Window::Box(
            x.iter().zip(y).map(|(i, j)| i.minkowski_sum(j)).collect::<Result<_>>()?,
        )),
    }
}

/// A box containing the inverses of a box.
pub fn inverse_window(model: &GroupModel, w: &Window) -> Result<Window> {
    let Some(v) = w.intervals() else {
        return Ok(Window::All);
    };
    match model {
        GroupModel::AxPlusB => {
            // (a, b)⁻¹ = (1/a, −b/a).
            let one = ExactScalar::one();
            let a = Interval::new(one.try_div(&v[0].hi)?, one.try_div(&v[0].lo)?)?;
            let b = real_min_max(&[
                v[1].lo.try_div(&v[0].lo)?.neg(),
                v[1].lo.try_div(&v[0].hi)?.neg(),
                v[1].hi.try_div(&v[0].lo)?.neg(),
                v[1].hi.try_div(&v[0].hi)?.neg(),
            ])?;
            Ok(Window::Box(vec![a, b]))
        }
        GroupModel::AdditiveSeries { .. } => Ok(Window::All),
        _ => Ok(Window::Box(v.iter().map(|i| i.negated()).collect())),
    }
}

/// Pointwise product set `AB`. Truncation means the result can never be
/// certified complete, so it is always flagged heuristic.
pub fn patch_product(a: &FinitePatch, b: &FinitePatch) -> Result<FinitePatch> {
    if a.model != b.model {
        return Err(Error::ModelMismatch(format!("{} vs {}", a.model, b.model)));
    }
    let model = a.model;
    let w = product_window(&model, &a.window, &b.window)?;
    let mut pts = BTreeSet::new();
    for x in &a.points {
        for y in &b.points {
            pts.insert(model.mul(x, y)?);
        }
    }
    FinitePatch::collect(model, pts, w, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, ScalarDomain};

    fn line(v: &[i64]) -> FinitePatch {
        let m = GroupModel::rn(1, ScalarDomain::Rational);
        let pts = v.iter().map(|&x| vec![ExactScalar::from(x)]).collect();
        FinitePatch::new(m, pts, Window::All, true).unwrap()
    }

    #[test]
    fn sumset() {
        let a = line(&[-1, 0, 1]);
        let s = patch_product(&a, &a).unwrap();
        assert_eq!(s, FinitePatch::collect(a.model(), line(&[-2, -1, 0, 1, 2]).points().cloned(), Window::All, false).unwrap());
        assert!(!s.is_complete());
        assert!(a.points().all(|p| s.has_point(p)));
        let inv = s.inverse().unwrap();
        assert_eq!(inv.sorted_points(), s.sorted_points());
    }

    #[test]
    fn rejects_duplicates_and_strays() {
        let m = GroupModel::rn(1, ScalarDomain::Rational);
        let dup = vec![vec![ExactScalar::from(1)], vec![ExactScalar::from(1)]];
        assert!(matches!(FinitePatch::new(m, dup, Window::All, true), Err(Error::DuplicatePoint(_))));
        let w = Window::cube(1, int(1)).unwrap();
        assert!(FinitePatch::new(m, vec![vec![ExactScalar::from(2)]], w, true).is_err());
    }

    #[test]
    fn membership_is_three_valued() {
        let m = GroupModel::rn(1, ScalarDomain::Rational);
        let w = Window::cube(1, int(2)).unwrap();
        let p = FinitePatch::new(m, vec![vec![ExactScalar::from(0)]], w, true).unwrap();
        assert_eq!(p.contains(&[ExactScalar::from(0)]), Some(true));
        assert_eq!(p.contains(&[ExactScalar::from(1)]), Some(false));
        assert_eq!(p.contains(&[ExactScalar::from(3)]), None);
    }

    #[test]
    fn ax_plus_b_windows() {
        let m = GroupModel::AxPlusB;
        let w: Window = "[1/2,2]x[-1,1]".parse().unwrap();
        let inv = inverse_window(&m, &w).unwrap();
        assert_eq!(inv.to_string(), "[1/2,2]x[-2,2]");
        let prod = product_window(&m, &w, &w).unwrap();
        assert_eq!(prod.to_string(), "[1/4,4]x[-3,3]");
    }
}
