//! The strip {(x, x') : |x'| ≤ 1} of Z[√2] seen in R²: an approximate
//! subgroup that is Zariski dense yet misses arbitrarily large balls.

use approxlat::exactnum::{int, ExactScalar};
use approxlat::hull::{emptiness_witness, TranslateSearch};
use approxlat::pointsets::{ModelSet, PointSet};
use approxlat::zariski::density_certificate;

fn main() -> approxlat::Result<()> {
    let strip = ModelSet::symmetric(2, int(1))?;
    let set = PointSet::Model(strip.clone());

    let up = TranslateSearch::Powers { base: vec![ExactScalar::from(0), ExactScalar::from(1)], steps: 64 };
    for r in [2, 5, 10] {
        let e = emptiness_witness(&set, &ExactScalar::from(r), &up)?;
        println!("R = {r}: translate {:?} empties the ball ({} tried)", e.witness.map(|g| format!("({}, {})", g[0], g[1])), e.tried);
    }

    let pts = strip.points_in_index_window(30);
    for d in 1..=3 {
        let c = density_certificate(&pts, d, None)?;
        println!("degree {d}: {:?} over {}", c.verdict, c.field);
    }
    Ok(())
}
