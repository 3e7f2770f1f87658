use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{int, ExactScalar, Rational, ScalarDomain};
use crate::groupmodels::{Coords, GroupModel};
use crate::linalg::Subspace;

use super::delone::{delone_parameters, Covering, DeloneConfig, DelonePair};
use super::lattice::{to_coords, to_rationals};
use super::patch::{fmt_point, FinitePatch};
use super::window::Window;
use super::PointSet;

/// One coset `Λ_j = Λ ∩ (g_j + H)` and its difference set measured in `H`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CosetSplit {
    pub representative: Coords,
    pub members: usize,
    /// `|Λ_j − Λ_j|` restricted to the measuring window.
    pub differences: usize,
    /// Delone parameters of the differences in coordinates of `H`.
    pub delone: DelonePair,
    pub relatively_dense_in_h: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CosetReport {
    pub subspace_dim: usize,
    pub cosets: Vec<CosetSplit>,
    /// Radius of the cube in `H`-coordinates on which differences are measured.
    pub radius: ExactScalar,
}

fn rational_point(p: &[ExactScalar]) -> Result<Vec<Rational>> {
    to_rationals(p).ok_or_else(|| Error::InvalidPoint(format!("{} needs rational coordinates", fmt_point(p))))
}

/// Splits `Λ` along the cosets `g_j + H` and measures each
/// `Δ_j = Λ_j − Λ_j` inside `H`.
pub fn coset_split(
    lambda: &FinitePatch,
    h_basis: &[Vec<Rational>],
    reps: &[Coords],
    radius: &ExactScalar,
    cfg: &DeloneConfig,
) -> Result<CosetReport> {
    let model = lambda.model();
    let GroupModel::AdditiveRn { n, .. } = model else {
        return Err(Error::ModelMismatch(format!("coset splitting needs an additive model, got {model}")));
    };
    if h_basis.iter().any(|v| v.len() != n) {
        return Err(Error::DegenerateSubgroup("basis vector arity differs from the ambient dimension".into()));
    }
    let zero = int(0);
    let h = Subspace::span(h_basis.to_vec(), n, &zero);
    if h.dim() != h_basis.len() || h.dim() == 0 {
        return Err(Error::DegenerateSubgroup("basis vectors must be nonzero and independent".into()));
    }
    let reps_q = reps.iter().map(|g| rational_point(g)).collect::<Result<Vec<_>>>()?;
    let mut buckets: Vec<Vec<Vec<Rational>>> = vec![Vec::new(); reps.len()];
    let mut strays = Vec::new();
    for p in lambda.sorted_points() {
        let pq = rational_point(&p)?;
        let j = reps_q.iter().position(|g| {
            let diff: Vec<Rational> = pq.iter().zip(g).map(|(a, b)| a - b).collect();
            h.contains(&diff)
        });
        match j {
            Some(j) => buckets[j].push(pq),
            None => strays.push(fmt_point(&p)),
        }
    }
    if !strays.is_empty() {
        return Err(Error::UncoveredPoints(strays));
    }
    let k = h.dim();
    let hmodel = GroupModel::rn(k, ScalarDomain::Rational);
    let w = Window::cube(k, radius.clone())?;
    let mut cosets = Vec::new();
    for (g, members) in reps.iter().zip(&buckets) {
        let mut diffs = BTreeSet::new();
        for x in members {
            for y in members {
                let d: Vec<Rational> = x.iter().zip(y).map(|(a, b)| a - b).collect();
                let c = to_coords(&h.coordinates(&d).expect("same coset"));
                if w.contains(&c) {
                    diffs.insert(c);
                }
            }
        }
        let differences = diffs.len();
        let patch = FinitePatch::collect(hmodel, diffs, w.clone(), false)?;
        let delone = delone_parameters(&PointSet::Patch(patch), &w, cfg)?;
        let relatively_dense_in_h = matches!(delone.covering, Covering::Finite { .. });
        cosets.push(CosetSplit {
            representative: g.clone(),
            members: members.len(),
            differences,
            delone,
            relatively_dense_in_h,
        });
    }
    Ok(CosetReport {
        subspace_dim: k,
        cosets,
        radius: radius.clone(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocatorResult {
    /// 1-based index of the first set whose difference set is relatively
    /// dense at the window scale.
    pub index: usize,
    pub witness: DelonePair,
    pub union: DelonePair,
    /// Delone parameters of every difference set examined, in order.
    pub examined: Vec<DelonePair>,
}

/// Given sets whose union is relatively dense on the window, finds the
/// least `i` with `P_i⁻¹P_i` relatively dense at the window scale.
pub fn union_density_locator(sets: &[PointSet], window: &Window, cfg: &DeloneConfig) -> Result<LocatorResult> {
    let first = sets.first().ok_or(Error::EmptySet)?;
    let model = first.model();
    if sets.iter().any(|s| s.model() != model) {
        return Err(Error::ModelMismatch("all sets must share a model".into()));
    }
    let mut all = BTreeSet::new();
    let mut samples = Vec::new();
    for s in sets {
        let pts = s.sample(window)?;
        all.extend(pts.iter().cloned());
        samples.push(pts);
    }
    let union = FinitePatch::collect(model, all, window.clone(), false)?;
    let union = delone_parameters(&PointSet::Patch(union), window, cfg)?;
    if let Covering::Infinite { probe, .. } = &union.covering {
        return Err(Error::UnionNotDense(fmt_point(probe)));
    }
    let mut examined = Vec::new();
    for (i, pts) in samples.iter().enumerate() {
        let mut diffs = BTreeSet::new();
        for x in pts {
            for y in pts {
                let d = model.left_quotient(x, y)?;
                if window.contains(&d) {
                    diffs.insert(d);
                }
            }
        }
        if diffs.is_empty() {
            continue;
        }
        let patch = FinitePatch::collect(model, diffs, window.clone(), false)?;
        let pair = delone_parameters(&PointSet::Patch(patch), window, cfg)?;
        let finite = pair.covering.is_finite();
        examined.push(pair.clone());
        if finite {
            return Ok(LocatorResult {
                index: i + 1,
                witness: pair,
                union,
                examined,
            });
        }
    }
    Err(Error::ScaleInsufficient)
}
