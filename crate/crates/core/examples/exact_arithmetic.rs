//! Exact comparisons in Q(√2) and truncated series over F_p.

use approxlat::exactnum::{rat, FpSeries, QuadElem};

fn main() -> approxlat::Result<()> {
    // 577/408 is a convergent of √2; the sign of the gap is decided exactly.
    let sqrt2 = QuadElem::integer(0, 1, 2)?;
    let approx = QuadElem::from_rational(rat(577, 408), 2)?;
    let gap = approx.try_sub(&sqrt2)?;
    println!("577/408 - √2 = {gap} has sign {:?} (f64 says {:e})", gap.signum(), gap.to_f64());

    // The unit 1 + √2 has norm -1, so its powers alternate in norm.
    let u = QuadElem::integer(1, 1, 2)?;
    let mut x = u.clone();
    for k in 1..=5 {
        println!("(1+√2)^{k} = {x}, norm {}", x.norm());
        x = x.try_mul(&u)?;
    }

    // In characteristic 3, Frobenius is additive.
    let a = FpSeries::new(3, 10, 0, &[1, 2, 0, 1])?;
    let b = FpSeries::new(3, 10, 1, &[2, 2])?;
    let lhs = a.try_add(&b)?.frobenius()?;
    let rhs = a.frobenius()?.try_add(&b.frobenius()?)?;
    println!("(a+b)^3 = {lhs}\na^3+b^3 = {rhs}\nequal: {}", lhs == rhs);
    Ok(())
}
