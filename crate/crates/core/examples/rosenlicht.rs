//! Solutions of y^p = t·x^p − x in F_p[[t]] modulo t^N.

use approxlat::charp::{laurent_search, rosenlicht_growth, rosenlicht_solve};

fn main() -> approxlat::Result<()> {
    let space = rosenlicht_solve(3, 6)?;
    println!("p = 3, N = 6: dimension {}", space.dimension);
    for b in &space.basis {
        println!("  x = {}\n  y = {}", b.x.terms(), b.y.terms());
    }

    let g = rosenlicht_growth(2, &[1, 2, 3, 4, 5, 6, 7, 8], 3, 1 << 16)?;
    for r in &g.rows {
        println!("p = 2, N = {}: dimension {} (enumeration agrees: {:?})", r.precision, r.dimension, r.oracle_agrees);
    }

    // For p = 2, x = 1/t and y = 0 already solve the equation.
    let l = laurent_search(2, 3, 8)?;
    println!("p = 2: {} Laurent solutions among {} principal parts", l.solutions.len(), l.examined);
    Ok(())
}
