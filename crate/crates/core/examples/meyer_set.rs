//! A cut-and-project set over Z[√2]: its points, Delone parameters and a
//! finite cover certificate for Λ·Λ ⊂ F·Λ.

use approxlat::exactnum::{int, ExactScalar, ScalarDomain};
use approxlat::groupmodels::GroupModel;
use approxlat::pointsets::{
    approx_subgroup_certificate, delone_parameters, CertConfig, DeloneConfig, FinitePatch, ModelSet, PointSet, Window,
};

fn main() -> approxlat::Result<()> {
    let set = ModelSet::symmetric(2, int(1))?;
    let pts = set.points_in_physical(&ExactScalar::from(6))?;
    println!("{} points with |x| ≤ 6 and internal coordinate in [-1, 1]", pts.len());
    for p in pts.iter().take(6) {
        println!("  ({}, {})  ≈ {:.4}", p[0], p[1], p[0].to_f64());
    }

    // Project to the line and measure packing and covering radii.
    let w = Window::cube(1, int(20))?;
    let phys = set.points_in_physical(&ExactScalar::from(20))?;
    let line = GroupModel::rn(1, ScalarDomain::Quadratic(2));
    let proj = FinitePatch::collect(line, phys.iter().map(|p| vec![p[0].clone()]), w.clone(), true)?;
    let dp = delone_parameters(&PointSet::Patch(proj), &w, &DeloneConfig::default().cap(ExactScalar::from(4)))?;
    println!("packing radius {:?}, covering {:?}", dp.packing.map(|r| r.to_string()), dp.covering.radius().map(|r| r.to_string()));

    let cert = approx_subgroup_certificate(&PointSet::Model(set), &CertConfig::new(12, 3))?;
    println!("Λ·Λ ⊂ F·Λ with |F| = {} ({} products re-verified)", cert.witness.len(), cert.reverified);
    Ok(())
}
