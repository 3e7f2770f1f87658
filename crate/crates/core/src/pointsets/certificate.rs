use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::ExactScalar;
use crate::groupmodels::{Coords, GroupModel};

use super::modelset::CrossCheck;
use super::order::sort_by_norm;
use super::patch::fmt_point;
use super::window::Window;
use super::{power_sample, PointSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Inclusion {
    /// `P² ⊂ F·P`.
    ProductCover,
    /// `A ⊂ B·F`.
    CommensurabilityLeft,
    /// `B ⊂ A·F`.
    CommensurabilityRight,
}

/// A finite set `F` and the inclusion it was verified to certify.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessSet {
    pub points: Vec<Coords>,
    pub inclusion: Inclusion,
    /// Radius of the ball around the identity on which the cover was found.
    pub radius: ExactScalar,
    /// Radius at which the size of `F` was re-checked.
    pub stable_radius: ExactScalar,
}

impl WitnessSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Which side the finite set multiplies on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoverSide {
    /// `x ∈ F·Y`: some `f` has `f⁻¹x ∈ Y`.
    Left,
    /// `x ∈ Y·F`: some `f` has `x·f⁻¹ ∈ Y`.
    Right,
}

fn cofactor(model: &GroupModel, side: CoverSide, f: &[ExactScalar], x: &[ExactScalar]) -> Result<Coords> {
    match side {
        CoverSide::Left => model.left_quotient(f, x),
        CoverSide::Right => model.mul(x, &model.inv(f)?),
    }
}

fn covered_by(
    model: &GroupModel,
    side: CoverSide,
    x: &[ExactScalar],
    f: &[ExactScalar],
    target: &PointSet,
) -> Result<bool> {
    Ok(target.contains(&cofactor(model, side, f, x)?) == Some(true))
}

/// Greedy cover: for each point (in norm order) take the first pool element
/// that works. Returns the used pool elements in norm order.
fn greedy_cover(
    model: &GroupModel,
    side: CoverSide,
    points: &[Coords],
    pool: &[Coords],
    target: &PointSet,
) -> Result<Vec<Coords>> {
    let mut used = BTreeSet::new();
    for x in points {
        let mut hit = None;
        for (i, f) in pool.iter().enumerate() {
            if covered_by(model, side, x, f, target)? {
                hit = Some(i);
                break;
            }
        }
        match hit {
            Some(i) => {
                used.insert(pool[i].clone());
            }
            None => return Err(Error::CoverNotFound(fmt_point(x))),
        }
    }
    let mut v: Vec<Coords> = used.into_iter().collect();
    sort_by_norm(model, &mut v);
    Ok(v)
}

/// Checks that every point of `source ∩ ball(r)` lies in `F·target`
/// (or `target·F`) by membership. Returns the number of points checked.
pub fn verify_cover(
    source_points: &[Coords],
    target: &PointSet,
    f: &[Coords],
    side: CoverSide,
) -> Result<usize> {
    let model = target.model();
    for x in source_points {
        let mut ok = false;
        for g in f {
            if covered_by(&model, side, x, g, target)? {
                ok = true;
                break;
            }
        }
        if !ok {
            return Err(Error::CoverNotFound(fmt_point(x)));
        }
    }
    Ok(source_points.len())
}

#[derive(Clone, Debug, PartialEq)]
pub struct CertConfig {
    /// Radius of the ball around the identity on which `Λ²` is sampled.
    pub radius: ExactScalar,
    /// Radius of the candidate pool `Λ² ∩ ball(pool_radius)`.
    pub pool_radius: ExactScalar,
}

impl CertConfig {
    pub fn new(radius: impl Into<ExactScalar>, pool_radius: impl Into<ExactScalar>) -> Self {
        CertConfig {
            radius: radius.into(),
            pool_radius: pool_radius.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ApproxCertificate {
    pub witness: WitnessSet,
    /// Points of `Λ²` covered at the base radius.
    pub product_points: usize,
    /// `|F|` found at the doubled radius.
    pub enlarged_size: usize,
    /// Points of `Λ²` re-verified against the final `F` by membership.
    pub reverified: usize,
    /// Points of `Λ³` checked to lie in `F²Λ`.
    pub cube_points_checked: usize,
    /// Whether `Λ²` was sampled exactly (model sets, lattices) rather than
    /// from products of a truncated sample.
    pub exact_products: bool,
    pub cross_checks: Vec<CrossCheck>,
}

fn cover_at(set: &PointSet, radius: &ExactScalar, pool_radius: &ExactScalar) -> Result<(Vec<Coords>, Vec<Coords>, bool, Vec<CrossCheck>)> {
    let model = set.model();
    let w = if model.is_real() { Window::ball(&model, radius.clone())? } else { Window::All };
    let (products, exact, checks) = power_sample(set, 2, &w)?;
    let pw = if model.is_real() { Window::ball(&model, pool_radius.clone())? } else { Window::All };
    let (pool, _, _) = power_sample(set, 2, &pw)?;
    let f = greedy_cover(&model, CoverSide::Left, &products, &pool, set)?;
    Ok((products, f, exact, checks))
}

/// Finds a finite `F` with `Λ² ⊂ FΛ` on the configured scale and checks
/// that `|F|` does not change when the scale is doubled.
pub fn approx_subgroup_certificate(set: &PointSet, cfg: &CertConfig) -> Result<ApproxCertificate> {
    let model = set.model();
    let w = if model.is_real() { Window::ball(&model, cfg.radius.clone())? } else { Window::All };
    set.check_symmetric_with_identity(&w)?;
    let (products, f, exact, mut cross_checks) = cover_at(set, &cfg.radius, &cfg.pool_radius)?;
    let big = cfg.radius.try_add(&cfg.radius)?;
    let (_, f_big, _, more) = cover_at(set, &big, &cfg.pool_radius)?;
    cross_checks.extend(more);
    if f_big.len() != f.len() {
        return Err(Error::CoverUnstable {
            small: f.len(),
            large: f_big.len(),
        });
    }
    let reverified = verify_cover(&products, set, &f, CoverSide::Left)?;
    // Λ³ ⊂ F²Λ.
    let (cube, _, _) = power_sample(set, 3, &w)?;
    let mut f2 = BTreeSet::new();
    for a in &f {
        for b in &f {
            f2.insert(model.mul(a, b)?);
        }
    }
    let mut f2: Vec<Coords> = f2.into_iter().collect();
    sort_by_norm(&model, &mut f2);
    let cube_points_checked = verify_cover(&cube, set, &f2, CoverSide::Left)?;
    Ok(ApproxCertificate {
        witness: WitnessSet {
            points: f,
            inclusion: Inclusion::ProductCover,
            radius: cfg.radius.clone(),
            stable_radius: big,
        },
        product_points: products.len(),
        enlarged_size: f_big.len(),
        reverified,
        cube_points_checked,
        exact_products: exact,
        cross_checks,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Commensurability {
    /// `A ⊂ B·F₁`.
    pub f1: WitnessSet,
    /// `B ⊂ A·F₂`.
    pub f2: WitnessSet,
}

fn one_direction(a: &PointSet, b: &PointSet, radius: &ExactScalar, pool_radius: &ExactScalar) -> Result<Vec<Coords>> {
    let model = a.model();
    let ball = |r: &ExactScalar| -> Result<Window> {
        if model.is_real() {
            Window::ball(&model, r.clone())
        } else {
            Ok(Window::All)
        }
    };
    let src = a.sample(&ball(radius)?)?;
    let pw = ball(pool_radius)?;
    let (pa, pb) = (a.sample(&pw)?, b.sample(&pw)?);
    // Candidates b⁻¹a, so that a·f⁻¹ = b.
    let mut pool = BTreeSet::new();
    for x in &pa {
        for y in &pb {
            let f = model.left_quotient(y, x)?;
            if pw.contains(&f) {
                pool.insert(f);
            }
        }
    }
    let mut pool: Vec<Coords> = pool.into_iter().collect();
    sort_by_norm(&model, &mut pool);
    greedy_cover(&model, CoverSide::Right, &src, &pool, b)
}

/// Finite `F₁`, `F₂` with `A ⊂ BF₁` and `B ⊂ AF₂` on the scale, each stable
/// when the scale is doubled.
pub fn commensurability_witness(a: &PointSet, b: &PointSet, cfg: &CertConfig) -> Result<Commensurability> {
    if a.model() != b.model() {
        return Err(Error::ModelMismatch(format!("{} vs {}", a.model(), b.model())));
    }
    let big = cfg.radius.try_add(&cfg.radius)?;
    let mut out = Vec::new();
    for (x, y, tag) in [(a, b, Inclusion::CommensurabilityLeft), (b, a, Inclusion::CommensurabilityRight)] {
        let f = one_direction(x, y, &cfg.radius, &cfg.pool_radius)?;
        let f_big = one_direction(x, y, &big, &cfg.pool_radius)?;
        if f.len() != f_big.len() {
            return Err(Error::CoverUnstable {
                small: f.len(),
                large: f_big.len(),
            });
        }
        out.push(WitnessSet {
            points: f,
            inclusion: tag,
            radius: cfg.radius.clone(),
            stable_radius: big.clone(),
        });
    }
    let f2 = out.pop().expect("two directions");
    let f1 = out.pop().expect("two directions");
    Ok(Commensurability { f1, f2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, ScalarDomain};
    use crate::pointsets::{FinitePatch, LatticeSet, ModelSet};

    fn rn(n: usize) -> GroupModel {
        GroupModel::rn(n, ScalarDomain::Rational)
    }

    fn lattice(gens: &[&[i64]]) -> PointSet {
        let n = gens[0].len();
        let g = gens.iter().map(|v| v.iter().map(|&x| int(x)).collect()).collect();
        PointSet::Lattice(LatticeSet::new(rn(n), vec![int(0); n], g).unwrap())
    }

    fn pts(v: &[&[i64]]) -> Vec<Coords> {
        v.iter().map(|p| p.iter().map(|&x| ExactScalar::from(x)).collect()).collect()
    }

    #[test]
    fn subgroup_needs_only_identity() {
        let z2 = lattice(&[&[1, 0], &[0, 1]]);
        let c = approx_subgroup_certificate(&z2, &CertConfig::new(6, 3)).unwrap();
        assert_eq!(c.witness.points, pts(&[&[0, 0]]));
        assert!(c.exact_products);
    }

    #[test]
    fn three_point_set() {
        let m = rn(1);
        let p = FinitePatch::new(m, pts(&[&[-1], &[0], &[1]]), Window::All, true).unwrap();
        let c = approx_subgroup_certificate(&PointSet::Patch(p), &CertConfig::new(4, 4)).unwrap();
        assert_eq!(c.witness.points, pts(&[&[0], &[1], &[-1]]));
        assert_eq!(c.product_points, 5);
    }

    #[test]
    fn strip_model_set_needs_three() {
        let l = PointSet::Model(ModelSet::symmetric(2, int(1)).unwrap());
        let c = approx_subgroup_certificate(&l, &CertConfig::new(12, 3)).unwrap();
        let want = pts(&[&[0, 0], &[1, 1], &[-1, -1]]);
        assert_eq!(c.witness.points, want);
        assert!(c.cube_points_checked > 0);
    }

    #[test]
    fn rejects_asymmetric_and_identity_free_sets() {
        let m = rn(1);
        let p = FinitePatch::new(m, pts(&[&[0], &[1]]), Window::All, true).unwrap();
        assert!(matches!(
            approx_subgroup_certificate(&PointSet::Patch(p), &CertConfig::new(3, 3)),
            Err(Error::NotSymmetric(_))
        ));
        let q = FinitePatch::new(m, pts(&[&[-1], &[1]]), Window::All, true).unwrap();
        assert!(matches!(
            approx_subgroup_certificate(&PointSet::Patch(q), &CertConfig::new(3, 3)),
            Err(Error::MissingIdentity)
        ));
    }

    #[test]
    fn commensurable_lattices() {
        let z = lattice(&[&[1]]);
        let z2 = lattice(&[&[2]]);
        let c = commensurability_witness(&z, &z2, &CertConfig::new(10, 3)).unwrap();
        assert_eq!(c.f1.points, pts(&[&[0], &[1]]));
        assert_eq!(c.f2.points, pts(&[&[0]]));
        let same = commensurability_witness(&z, &z, &CertConfig::new(10, 3)).unwrap();
        assert_eq!(same.f1.points, pts(&[&[0]]));
        assert_eq!(same.f2.points, pts(&[&[0]]));
        let a = lattice(&[&[1, 0], &[0, 1]]);
        let b = lattice(&[&[1, 0], &[0, 2]]);
        let c = commensurability_witness(&a, &b, &CertConfig::new(6, 2)).unwrap();
        assert_eq!(c.f1.points, pts(&[&[0, 0], &[0, 1]]));
        assert_eq!(c.f2.points, pts(&[&[0, 0]]));
    }
}
