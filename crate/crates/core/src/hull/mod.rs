//! Chabauty–Fell geometry of discrete sets: a local-matching distance on
//! patches, finite-scale limit checks, sampled orbit closures, emptiness
//! witnesses and inclusion propagation along translates.

mod orbit;
mod subgroup;

use std::cmp::Ordering;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{int, ExactScalar, Rational};
use crate::groupmodels::{Coords, GroupModel};
use crate::pointsets::delone::Nearest;
use crate::pointsets::{fmt_point, FinitePatch, Window};

pub use orbit::{
    emptiness_witness, hull_sample, quasi_monotone_check, EmptinessResult, HullEntry, HullSample,
    QuasiMonotoneReport, TranslateSearch, TranslateVerdict,
};
pub use subgroup::{subgroup_hull_check, SubgroupHullReport, SubgroupSpec, SubgroupTranslate, SubgroupVerdict};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CfConfig {
    /// Matching radii, strictly decreasing and positive. The observation
    /// ball for `ε` has radius `1/ε`.
    #[serde(serialize_with = "serialize_grid")]
    pub eps_grid: Vec<Rational>,
}

fn serialize_grid<S: serde::Serializer>(g: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(g.iter().map(|r| r.to_string()))
}

impl Default for CfConfig {
    fn default() -> Self {
        CfConfig::uniform(64)
    }
}

impl CfConfig {
    pub fn new(eps_grid: Vec<Rational>) -> Result<Self> {
        let zero = int(0);
        if eps_grid.is_empty() || eps_grid.iter().any(|e| *e <= zero) || eps_grid.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::InvalidScalar("ε grid must be positive and strictly decreasing".into()));
        }
        Ok(CfConfig { eps_grid })
    }

    /// `1, (k−1)/k, …, 1/k`.
    pub fn uniform(k: u32) -> Self {
        let k = k.max(1);
        let eps_grid = (1..=k).rev().map(|j| Rational::new(j.into(), k.into())).collect();
        CfConfig { eps_grid }
    }

    pub fn min_eps(&self) -> &Rational {
        self.eps_grid.last().expect("non-empty grid")
    }

    /// Tolerance used by the limit checks: twice the finest ε.
    pub fn tolerance(&self) -> Rational {
        self.min_eps() * int(2)
    }
}

fn require_additive(model: &GroupModel) -> Result<usize> {
    match model {
        GroupModel::AdditiveRn { n, .. } => Ok(*n),
        m => Err(Error::ModelMismatch(format!("the matching distance needs a normed additive model, got {m}"))),
    }
}

fn complete_on(p: &FinitePatch, w: &Window) -> bool {
    p.is_complete() && w.is_subset_of(p.window())
}

fn ball_around(model: &GroupModel, n: usize, c: &[ExactScalar], r: &ExactScalar) -> Result<Window> {
    Window::cube(n, r.clone())?.left_translate(model, c)
}

/// Nearest-neighbour distances from each point of `a` to `b`
/// (`None` when `b` is empty).
fn nearest_distances(model: GroupModel, a: &[Coords], b: &[Coords]) -> Result<Vec<Option<ExactScalar>>> {
    if b.is_empty() {
        return Ok(vec![None; a.len()]);
    }
    let nn = Nearest::new(model, b);
    a.iter().map(|p| nn.distance(p).map(Some)).collect()
}

enum Matching {
    Holds,
    Fails,
    Unknown,
}

/// Decides `A ∩ B(0, 1/ε) ⊆ B + B(0, ε)` from stored data.
fn one_way(
    model: &GroupModel,
    n: usize,
    a: &FinitePatch,
    a_pts: &[Coords],
    b: &FinitePatch,
    nn: &[Option<ExactScalar>],
    eps: &ExactScalar,
    ball: &Window,
) -> Result<Matching> {
    let mut all_close = true;
    for (p, d) in a_pts.iter().zip(nn) {
        if !ball.contains(p) {
            continue;
        }
        let close = d.as_ref().is_some_and(|d| d <= eps);
        if !close {
            // A stored point with no partner is a genuine failure once
            // `b` is known to be complete around it.
            if complete_on(b, &ball_around(model, n, p, eps)?) {
                return Ok(Matching::Fails);
            }
            all_close = false;
        }
    }
    if all_close && complete_on(a, ball) {
        Ok(Matching::Holds)
    } else {
        Ok(Matching::Unknown)
    }
}

/// Local-matching distance between two patches of a normed additive model.
///
/// Returns 0 when the patches agree on their common window, otherwise the
/// smallest grid value `ε` with two-way `ε`-matching on `B(0, 1/ε)`, or 1
/// when no grid value matches. Matching is monotone in `ε`, so the grid is
/// scanned from the top until the first failure.
pub fn cf_distance(p: &FinitePatch, q: &FinitePatch, cfg: &CfConfig) -> Result<Rational> {
    if p.model() != q.model() {
        return Err(Error::ModelMismatch(format!("{} vs {}", p.model(), q.model())));
    }
    let model = p.model();
    let n = require_additive(&model)?;
    if let Some(common) = p.window().intersect(q.window()) {
        if p.sample(&common, false)? == q.sample(&common, false)? && complete_on(p, &common) && complete_on(q, &common) {
            return Ok(int(0));
        }
    }
    let pp = p.sorted_points();
    let qp = q.sorted_points();
    let p_to_q = nearest_distances(model, &pp, &qp)?;
    let q_to_p = nearest_distances(model, &qp, &pp)?;
    let mut best = int(1);
    for e in &cfg.eps_grid {
        let eps = ExactScalar::Rat(e.clone());
        let radius = ExactScalar::Rat(e.recip());
        let ball = Window::ball(&model, radius.clone())?;
        let forward = one_way(&model, n, p, &pp, q, &p_to_q, &eps, &ball)?;
        let backward = one_way(&model, n, q, &qp, p, &q_to_p, &eps, &ball)?;
        match (forward, backward) {
            (Matching::Fails, _) | (_, Matching::Fails) => return Ok(best),
            (Matching::Holds, Matching::Holds) => best = e.clone(),
            _ => {
                return Err(Error::WindowTooSmall(format!(
                    "cannot decide ε = {e}: both patches must be complete on the ball of radius {radius}"
                )))
            }
        }
    }
    Ok(best)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum LimitFailure {
    /// A candidate point with no tail approximant.
    Cf1 { sequence_index: usize, point: Coords },
    /// A tail point away from the candidate.
    Cf2 { sequence_index: usize, point: Coords },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LimitReport {
    pub window: Window,
    /// Window shrunk by the tolerance; only points inside it are checked.
    pub checked_window: Option<Window>,
    #[serde(serialize_with = "crate::exactnum::serialize_rational")]
    pub tolerance: Rational,
    pub tail_start: usize,
    pub sequence_len: usize,
    pub failure: Option<LimitFailure>,
}

impl LimitReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

fn within(model: &GroupModel, x: &[ExactScalar], pts: &[Coords], tol: &ExactScalar) -> Result<bool> {
    for y in pts {
        if model.distance(x, y)?.real_cmp(tol)? != Ordering::Greater {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Window-scale check that `candidate` is the Chabauty–Fell limit of the
/// sequence: on the last quarter of the sequence, every candidate point is
/// approximated by every tail patch and every tail point is close to the
/// candidate, both within twice the finest ε. Points within the tolerance
/// of the window boundary are exempt.
pub fn cf_limit_check(sequence: &[FinitePatch], candidate: &FinitePatch, cfg: &CfConfig) -> Result<LimitReport> {
    let model = candidate.model();
    require_additive(&model)?;
    if sequence.iter().any(|s| s.model() != model) {
        return Err(Error::ModelMismatch("sequence and candidate must share a model".into()));
    }
    let mut window = candidate.window().clone();
    for s in sequence {
        window = window
            .intersect(s.window())
            .ok_or_else(|| Error::WindowTooSmall("patch windows do not overlap".into()))?;
    }
    if !complete_on(candidate, &window) || sequence.iter().any(|s| !complete_on(s, &window)) {
        return Err(Error::IncompletePatch);
    }
    let tol_q = cfg.tolerance();
    let tol = ExactScalar::Rat(tol_q.clone());
    let tail_start = sequence.len() - sequence.len().div_ceil(4);
    let checked_window = window.shrink(&tol)?;
    let mut report = LimitReport {
        window: window.clone(),
        checked_window: checked_window.clone(),
        tolerance: tol_q,
        tail_start,
        sequence_len: sequence.len(),
        failure: None,
    };
    let Some(inner) = checked_window else {
        return Ok(report);
    };
    let cand_all = candidate.sample(&window, true)?;
    let cand_inner = candidate.sample(&inner, true)?;
    for (i, s) in sequence.iter().enumerate().skip(tail_start) {
        let pts = s.sample(&window, true)?;
        for x in &cand_inner {
            if !within(&model, x, &pts, &tol)? {
                report.failure = Some(LimitFailure::Cf1 {
                    sequence_index: i,
                    point: x.clone(),
                });
                return Ok(report);
            }
        }
        for y in pts.iter().filter(|y| inner.contains(y)) {
            if !within(&model, y, &cand_all, &tol)? {
                report.failure = Some(LimitFailure::Cf2 {
                    sequence_index: i,
                    point: y.clone(),
                });
                return Ok(report);
            }
        }
    }
    Ok(report)
}

impl std::fmt::Display for LimitFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LimitFailure::Cf1 { sequence_index, point } => {
                write!(f, "candidate point {} unmatched by patch {sequence_index}", fmt_point(point))
            }
            LimitFailure::Cf2 { sequence_index, point } => {
                write!(f, "point {} of patch {sequence_index} far from the candidate", fmt_point(point))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat, ScalarDomain};
    use crate::pointsets::{LatticeSet, ModelSet, PointSet};

    fn r1() -> GroupModel {
        GroupModel::rn(1, ScalarDomain::Rational)
    }

    fn shifted_integers(shift: Rational, r: i64) -> FinitePatch {
        let z = LatticeSet::new(r1(), vec![shift], vec![vec![int(1)]]).unwrap();
        PointSet::Lattice(z).patch(&Window::cube(1, int(r)).unwrap()).unwrap()
    }

    #[test]
    fn quarter_shift() {
        let p = shifted_integers(int(0), 100);
        let q = shifted_integers(rat(1, 4), 100);
        let cfg = CfConfig::default();
        assert_eq!(cf_distance(&p, &q, &cfg).unwrap(), rat(1, 4));
        assert_eq!(cf_distance(&q, &p, &cfg).unwrap(), rat(1, 4));
        assert_eq!(cf_distance(&p, &p, &cfg).unwrap(), int(0));
    }

    #[test]
    fn far_singletons_hit_the_cap() {
        let w = Window::cube(1, int(200)).unwrap();
        let p = FinitePatch::new(r1(), vec![vec![ExactScalar::from(0)]], w.clone(), true).unwrap();
        let q = FinitePatch::new(r1(), vec![vec![ExactScalar::from(100)]], w, true).unwrap();
        assert_eq!(cf_distance(&p, &q, &CfConfig::default()).unwrap(), int(1));
    }

    #[test]
    fn small_windows_are_reported() {
        let p = shifted_integers(int(0), 10);
        let q = shifted_integers(rat(1, 100), 10);
        assert!(matches!(cf_distance(&p, &q, &CfConfig::default()), Err(Error::WindowTooSmall(_))));
    }

    #[test]
    fn matching_is_a_bijection_when_separated() {
        // Packing radius 1 > 2ε: each point has exactly one partner.
        let p = shifted_integers(int(0), 100);
        let q = shifted_integers(rat(1, 8), 100);
        let eps = cf_distance(&p, &q, &CfConfig::default()).unwrap();
        assert_eq!(eps, rat(1, 8));
        let ball = Window::cube(1, ExactScalar::Rat(eps.recip())).unwrap();
        let a = p.sample(&ball, true).unwrap();
        let e = ExactScalar::Rat(eps);
        for x in &a {
            let partners = q.points().filter(|y| r1().distance(x, y).unwrap() <= e).count();
            assert_eq!(partners, 1);
        }
    }

    #[test]
    fn translates_converge_to_integers() {
        let cfg = CfConfig::default();
        let seq: Vec<FinitePatch> = (1..=64).map(|k| shifted_integers(rat(1, k), 40)).collect();
        let cand = shifted_integers(int(0), 40);
        let rep = cf_limit_check(&seq, &cand, &cfg).unwrap();
        assert!(rep.passed(), "{:?}", rep.failure);
        let far = shifted_integers(rat(1, 2), 40);
        let rep = cf_limit_check(&seq, &far, &cfg).unwrap();
        assert!(matches!(rep.failure, Some(LimitFailure::Cf1 { .. })));
    }

    #[test]
    fn vertical_translates_of_the_strip_vanish() {
        let l = PointSet::Model(ModelSet::symmetric(2, int(1)).unwrap());
        let m = l.model();
        let w = Window::cube(2, int(10)).unwrap();
        let seq: Vec<FinitePatch> = (0..40)
            .map(|k| l.translate_patch(&[ExactScalar::from(0), ExactScalar::from(k)], &w).unwrap())
            .collect();
        let empty = FinitePatch::empty(m, w);
        assert!(cf_limit_check(&seq, &empty, &CfConfig::default()).unwrap().passed());
        let first = seq[0].clone();
        let rep = cf_limit_check(&seq, &first, &CfConfig::default()).unwrap();
        assert!(matches!(rep.failure, Some(LimitFailure::Cf1 { .. })));
    }

    #[test]
    fn incomplete_patches_are_rejected() {
        let p = shifted_integers(int(0), 10);
        let trunc = FinitePatch::collect(r1(), p.points().cloned(), p.window().clone(), false).unwrap();
        assert!(matches!(cf_limit_check(&[trunc], &p, &CfConfig::default()), Err(Error::IncompletePatch)));
    }

    #[test]
    fn grid_must_decrease() {
        assert!(CfConfig::new(vec![rat(1, 2), rat(1, 2)]).is_err());
        assert!(CfConfig::new(vec![rat(1, 2), int(0)]).is_err());
        assert!(CfConfig::new(vec![int(1), rat(1, 3)]).is_ok());
    }
}
