//! A positive density on the ax+b group whose Δ-weighted mass exceeds
//! its total mass, and the right-translation law for Haar measure.

use approxlat::groupmodels::GroupModel;
use approxlat::unimod::{b2_density, right_translation_check, DensityConfig};

fn main() -> approxlat::Result<()> {
    let cfg = DensityConfig { resolution: 256, tolerance: 1e-5, ..DensityConfig::default() };
    let r = b2_density(&GroupModel::AxPlusB, &cfg)?;
    println!("∫ρ dm  = {:.8}", r.integral);
    println!("∫ρΔ dm = {:.8} (closed form {:.8})", r.integral_delta, r.closed_form);
    println!("min ρ on the test grid = {:e}", r.min_on_test_grid);

    for g in [[0.5, 0.0], [2.0, 0.25], [3.0, 2.0]] {
        let c = right_translation_check(g, 200)?;
        println!("g = {:?}: ∫f(tg) = {:.8}, Δ(g)⁻¹∫f = {:.8}", g, c.translated, c.predicted);
    }
    Ok(())
}
