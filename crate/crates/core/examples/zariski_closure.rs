//! Vanishing polynomials of a point sample and the coset cover of a set
//! lying on two parallel lines.

use approxlat::exactnum::{ExactScalar, ScalarDomain};
use approxlat::groupmodels::{Coords, GroupModel};
use approxlat::pointsets::{fmt_point, FinitePatch, Window};
use approxlat::zariski::{coset_cover_verifier, density_certificate, vanishing_basis};

fn pt(a: i64, b: i64) -> Coords {
    vec![ExactScalar::from(a), ExactScalar::from(b)]
}

fn main() -> approxlat::Result<()> {
    // Six points on the parabola y = x²: a conic vanishes on them.
    let parabola: Vec<Coords> = (-3..3).map(|x| pt(x, x * x)).collect();
    for d in 0..=3 {
        let vb = vanishing_basis(&parabola, d, None)?;
        let polys: Vec<&str> = vb.basis.iter().map(|p| p.text.as_str()).collect();
        println!("d = {d}: h = {}, vanishing {:?}", vb.hilbert, polys);
    }
    let c = density_certificate(&parabola, 2, None)?;
    match c.witness() {
        Some(w) => println!("not dense at degree 2: {} vanishes", w.text),
        None => println!("dense up to degree 2"),
    }

    let rows: Vec<Coords> = (-10..=10).flat_map(|x| [pt(x, 0), pt(x, 1)]).collect();
    let w: Window = "[-10,10]x[-2,2]".parse()?;
    let patch = FinitePatch::new(GroupModel::rn(2, ScalarDomain::Rational), rows, w, true)?;
    let cover = coset_cover_verifier(&patch, 3)?;
    let show = |v: &[Coords]| v.iter().map(|p| fmt_point(p)).collect::<Vec<_>>().join(", ");
    println!("H spanned by {}, F = {{{}}}", show(&cover.h_basis), show(&cover.f));
    Ok(())
}
