//! Invariants over random inputs.

use std::cmp::Ordering;

use approxlat::charp::{is_solution, rosenlicht_solve};
use approxlat::exactnum::{int, rat, ExactScalar, FpSeries, QuadElem, ScalarDomain};
use approxlat::groupmodels::{Coords, GroupModel};
use approxlat::hull::{cf_distance, CfConfig};
use approxlat::linalg::{nullspace, rank};
use approxlat::pointsets::{FinitePatch, LatticeSet, PointSet, Window};
use approxlat::zariski::{density_certificate, monomial_count, vanishing_basis};
use proptest::prelude::*;

/// Sign of `m + n√d` by integer squaring alone.
fn quad_sign(m: i64, n: i64, d: u64) -> Ordering {
    let (m, n, d) = (m as i128, n as i128, d as i128);
    if m >= 0 && n >= 0 {
        return (m + n).cmp(&0);
    }
    if m <= 0 && n <= 0 {
        return 0.cmp(&-(m + n));
    }
    // Opposite signs: the term with the larger square wins.
    let by_square = (m * m).cmp(&(n * n * d));
    if m > 0 {
        by_square
    } else {
        by_square.reverse()
    }
}

fn series(p: u32, n: i64, coeffs: &[i64]) -> FpSeries {
    FpSeries::new(p, n, 0, coeffs).unwrap()
}

fn line_patch(points: &[i64], den: i64, w: i64) -> FinitePatch {
    let m = GroupModel::rn(1, ScalarDomain::Rational);
    let pts = points.iter().map(|&x| vec![ExactScalar::Rat(rat(x, den))]);
    FinitePatch::collect(m, pts, Window::cube(1, int(w)).unwrap(), true).unwrap()
}

fn rational_points(raw: &[(i64, i64, i64, i64)]) -> Vec<Coords> {
    let mut v: Vec<Coords> = raw
        .iter()
        .map(|&(a, b, c, d)| vec![ExactScalar::Rat(rat(a, b)), ExactScalar::Rat(rat(c, d))])
        .collect();
    v.sort();
    v.dedup();
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn quadratic_sign_matches_squaring(m in -10_000i64..10_000, n in -10_000i64..10_000, d in prop::sample::select(vec![2u64, 3, 5, 6, 7, 10, 11])) {
        let x = QuadElem::integer(m, n, d).unwrap();
        prop_assert_eq!(x.signum(), quad_sign(m, n, d));
        // Conjugation is a ring map: N(xy) = N(x)N(y).
        let y = QuadElem::integer(n, m, d).unwrap();
        prop_assert_eq!(x.try_mul(&y).unwrap().norm(), x.norm() * y.norm());
    }

    #[test]
    fn frobenius_is_additive(p in prop::sample::select(vec![2u32, 3, 5]), a in prop::collection::vec(0i64..5, 1..12), b in prop::collection::vec(0i64..5, 1..12)) {
        let n = 24;
        let (x, y) = (series(p, n, &a), series(p, n, &b));
        let lhs = x.try_add(&y).unwrap().frobenius().unwrap();
        let rhs = x.frobenius().unwrap().try_add(&y.frobenius().unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(x.try_mul(&y).unwrap(), y.try_mul(&x).unwrap());
    }

    #[test]
    fn nullspace_vectors_are_annihilated(rows in prop::collection::vec(prop::collection::vec(-4i64..5, 6), 1..6)) {
        let m: Vec<Vec<ExactScalar>> = rows.iter().map(|r| r.iter().map(|&x| ExactScalar::from(x)).collect()).collect();
        let zero = ExactScalar::zero();
        let k = nullspace(m.clone(), 6, &zero);
        prop_assert_eq!(k.len() + rank(m.clone(), 6, &zero), 6);
        for v in &k {
            for r in &m {
                let mut acc = ExactScalar::zero();
                for (a, b) in r.iter().zip(v) {
                    acc = acc.try_add(&a.try_mul(b).unwrap()).unwrap();
                }
                prop_assert!(acc.is_zero());
            }
        }
    }

    #[test]
    fn solution_sums_are_solutions(p in prop::sample::select(vec![2u32, 3, 5]), n in 1usize..7, c in prop::collection::vec(0u32..5, 8)) {
        let space = rosenlicht_solve(p, n).unwrap();
        let mut x = FpSeries::zero(p, n as i64).unwrap();
        let mut y = x.clone();
        for (b, &k) in space.basis.iter().zip(&c) {
            for _ in 0..k % p {
                x = x.try_add(&b.x).unwrap();
                y = y.try_add(&b.y).unwrap();
            }
        }
        prop_assert!(is_solution(&x, &y).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn matching_distance_is_a_symmetric_premetric(pts in prop::collection::btree_set(-400i64..400, 0..40), shift in 0i64..9) {
        let pts: Vec<i64> = pts.into_iter().collect();
        let w = 40;
        let p = line_patch(&pts, 8, w);
        let q = line_patch(&pts.iter().map(|x| x + shift).collect::<Vec<_>>(), 8, w);
        let cfg = CfConfig::uniform(16);
        prop_assert_eq!(cf_distance(&p, &p, &cfg).unwrap(), int(0));
        match (cf_distance(&p, &q, &cfg), cf_distance(&q, &p, &cfg)) {
            (Ok(a), Ok(b)) => {
                prop_assert_eq!(&a, &b);
                prop_assert!(a >= int(0) && a <= int(1));
            }
            (Err(_), Err(_)) => {}
            (a, b) => prop_assert!(false, "asymmetric outcome {:?} vs {:?}", a, b),
        }
    }

    #[test]
    fn lattice_shift_distance_is_the_shift(k in 1i64..=16) {
        let m = GroupModel::rn(1, ScalarDomain::Rational);
        let w = Window::cube(1, int(100)).unwrap();
        let z = |s| PointSet::Lattice(LatticeSet::new(m, vec![s], vec![vec![int(1)]]).unwrap()).patch(&w).unwrap();
        let d = cf_distance(&z(int(0)), &z(rat(k, 64)), &CfConfig::default()).unwrap();
        prop_assert_eq!(d, rat(k, 64));
    }

    #[test]
    fn hilbert_function_shape(raw in prop::collection::vec((-6i64..7, 1i64..4, -6i64..7, 1i64..4), 1..7)) {
        let pts = rational_points(&raw);
        let mut prev = 0;
        for d in 0..=pts.len() {
            let vb = vanishing_basis(&pts, d, None).unwrap();
            prop_assert!(vb.hilbert >= prev);
            prop_assert!(vb.hilbert <= pts.len().min(monomial_count(2, d)));
            if d + 1 >= pts.len() {
                prop_assert_eq!(vb.hilbert, pts.len());
            }
            for poly in &vb.basis {
                for x in &pts {
                    prop_assert!(poly.eval(x).unwrap().is_zero());
                }
            }
            prev = vb.hilbert;
        }
    }

    #[test]
    fn granted_density_survives_new_points(raw in prop::collection::vec((-6i64..7, 1i64..4, -6i64..7, 1i64..4), 6..14), extra in (-6i64..7, 1i64..4, -6i64..7, 1i64..4), d in 1usize..3) {
        let pts = rational_points(&raw);
        let mut more = pts.clone();
        more.extend(rational_points(&[extra]));
        more.sort();
        more.dedup();
        if density_certificate(&pts, d, None).unwrap().is_granted() {
            prop_assert!(density_certificate(&more, d, None).unwrap().is_granted());
        }
    }
}
