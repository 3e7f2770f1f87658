//! The local-matching distance on patches of the line, a limit check and
//! a sample of an orbit closure.

use approxlat::exactnum::{int, rat, ExactScalar, ScalarDomain};
use approxlat::groupmodels::GroupModel;
use approxlat::hull::{cf_distance, cf_limit_check, hull_sample, CfConfig};
use approxlat::pointsets::{FinitePatch, LatticeSet, ModelSet, PointSet, Window};

fn shifted(shift: approxlat::exactnum::Rational, r: i64) -> approxlat::Result<FinitePatch> {
    let m = GroupModel::rn(1, ScalarDomain::Rational);
    PointSet::Lattice(LatticeSet::new(m, vec![shift], vec![vec![int(1)]])?).patch(&Window::cube(1, int(r))?)
}

fn main() -> approxlat::Result<()> {
    let cfg = CfConfig::default();
    let z = shifted(int(0), 100)?;
    for k in [1, 4, 8, 16] {
        let d = cf_distance(&z, &shifted(rat(k, 64), 100)?, &cfg)?;
        println!("d(Z, Z + {}) = {d}", rat(k, 64));
    }

    let seq = (1..=64).map(|k| shifted(rat(1, k), 40)).collect::<approxlat::Result<Vec<_>>>()?;
    let rep = cf_limit_check(&seq, &shifted(int(0), 40)?, &cfg)?;
    println!("Z + 1/k → Z: {}", if rep.passed() { "holds" } else { "fails" });

    // Vertical translates of the strip leave every bounded window.
    let strip = PointSet::Model(ModelSet::symmetric(2, int(1))?);
    let ts: Vec<_> = (0..10).map(|k| vec![ExactScalar::from(0), ExactScalar::from(k)]).collect();
    print!("{}", hull_sample(&strip, &ts, &Window::cube(2, int(8))?)?.to_csv());
    Ok(())
}
