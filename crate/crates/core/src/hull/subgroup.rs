use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{int, Rational};
use crate::groupmodels::Coords;
use crate::linalg::{independent_coordinates, inverse, Subspace};
use crate::pointsets::{fmt_point, to_coords, to_rationals, Window, MAX_ENUMERATION};

/// A closed subgroup `L + V` of `R^n`: a lattice part spanned over `Z`
/// and a subspace part spanned over `R`, jointly independent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupSpec {
    pub lattice_gens: Vec<Vec<Rational>>,
    pub subspace_basis: Vec<Vec<Rational>>,
}

struct Prepared {
    n: usize,
    k_lat: usize,
    gens: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
    inv: Vec<Vec<Rational>>,
    span: Subspace<Rational>,
    v: Subspace<Rational>,
}

impl SubgroupSpec {
    pub fn lattice(gens: Vec<Vec<Rational>>) -> Self {
        SubgroupSpec {
            lattice_gens: gens,
            subspace_basis: Vec::new(),
        }
    }

    pub fn subspace(basis: Vec<Vec<Rational>>) -> Self {
        SubgroupSpec {
            lattice_gens: Vec::new(),
            subspace_basis: basis,
        }
    }

    pub fn ambient(&self) -> Option<usize> {
        self.lattice_gens.iter().chain(&self.subspace_basis).map(Vec::len).next()
    }

    fn prepare(&self, n: usize) -> Result<Prepared> {
        let gens: Vec<Vec<Rational>> = self.lattice_gens.iter().chain(&self.subspace_basis).cloned().collect();
        if gens.iter().any(|g| g.len() != n) {
            return Err(Error::DegenerateSubgroup("generator arity differs from the ambient dimension".into()));
        }
        let zero = int(0);
        let (pivots, inv) = if gens.is_empty() {
            (Vec::new(), Vec::new())
        } else {
            let pivots = independent_coordinates(&gens, n, &zero)
                .ok_or_else(|| Error::DegenerateSubgroup("generators are dependent".into()))?;
            let restricted: Vec<Vec<Rational>> =
                pivots.iter().map(|&r| gens.iter().map(|g| g[r].clone()).collect()).collect();
            (pivots, inverse(&restricted, &zero).expect("independent pivot block"))
        };
        Ok(Prepared {
            n,
            k_lat: self.lattice_gens.len(),
            span: Subspace::span(gens.clone(), n, &zero),
            v: Subspace::span(self.subspace_basis.clone(), n, &zero),
            gens,
            pivots,
            inv,
        })
    }
}

impl std::fmt::Display for SubgroupSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let show = |v: &[Vec<Rational>]| v.iter().map(|g| fmt_point(&to_coords(g))).collect::<Vec<_>>().join(" ");
        write!(f, "lattice [{}] + span [{}]", show(&self.lattice_gens), show(&self.subspace_basis))
    }
}

impl Serialize for SubgroupSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl Prepared {
    /// Coefficients of `u ∈ span` along the generators.
    fn coefficients(&self, u: &[Rational]) -> Vec<Rational> {
        (0..self.gens.len())
            .map(|i| {
                self.pivots
                    .iter()
                    .enumerate()
                    .map(|(row, &r)| &u[r] * &self.inv[i][row])
                    .fold(Rational::zero(), |a, b| a + b)
            })
            .collect()
    }

    /// Canonical coset representative: the component off the span plus the
    /// fractional parts of the lattice coefficients.
    fn representative(&self, g: &[Rational]) -> Vec<Rational> {
        let w = self.span.reduce(g);
        let u: Vec<Rational> = g.iter().zip(&w).map(|(a, b)| a - b).collect();
        let c = self.coefficients(&u);
        let mut k = w;
        for (ci, l) in c.iter().zip(&self.gens).take(self.k_lat) {
            let frac = ci - ci.floor();
            for (x, y) in k.iter_mut().zip(l) {
                *x += &frac * y;
            }
        }
        k
    }

    fn contains(&self, x: &[Rational]) -> bool {
        self.span.contains(x) && self.coefficients(x).iter().take(self.k_lat).all(Rational::is_integer)
    }

    /// Canonical pieces `y + V` of `offset + H` meeting the box.
    fn pieces(&self, offset: &[Rational], bounds: &[(Rational, Rational)]) -> Result<BTreeSet<Vec<Rational>>> {
        let mut ranges = Vec::with_capacity(self.k_lat);
        let mut total: u64 = 1;
        for i in 0..self.k_lat {
            let mut lo = Rational::zero();
            let mut hi = Rational::zero();
            for (row, &r) in self.pivots.iter().enumerate() {
                let w = &self.inv[i][row];
                let a = (&bounds[r].0 - &offset[r]) * w;
                let b = (&bounds[r].1 - &offset[r]) * w;
                let (mn, mx) = if a <= b { (a, b) } else { (b, a) };
                lo += mn;
                hi += mx;
            }
            let (lo, hi) = (lo.ceil().to_integer(), hi.floor().to_integer());
            if hi < lo {
                return Ok(BTreeSet::new());
            }
            let len = i64::try_from(&hi - &lo + num_bigint::BigInt::from(1)).map_err(|_| Error::TooManyProbes(usize::MAX))?;
            total = total.saturating_mul(len as u64);
            let lo = i64::try_from(lo).map_err(|_| Error::TooManyProbes(usize::MAX))?;
            ranges.push((lo, lo + len - 1));
        }
        if total > MAX_ENUMERATION {
            return Err(Error::TooManyProbes(total as usize));
        }
        let mut out = BTreeSet::new();
        let mut coeffs: Vec<i64> = ranges.iter().map(|r| r.0).collect();
        loop {
            let mut y = offset.to_vec();
            for (c, l) in coeffs.iter().zip(&self.gens) {
                for (x, g) in y.iter_mut().zip(l) {
                    *x += Rational::from_integer((*c).into()) * g;
                }
            }
            if self.piece_meets(&y, bounds) {
                out.insert(self.v.reduce(&y));
            }
            // Odometer over the coefficient ranges.
            let mut i = 0;
            loop {
                if i == self.k_lat {
                    return Ok(out);
                }
                if coeffs[i] < ranges[i].1 {
                    coeffs[i] += 1;
                    break;
                }
                coeffs[i] = ranges[i].0;
                i += 1;
            }
        }
    }

    /// Does `y + V` meet the box? Exact Fourier–Motzkin elimination over
    /// the subspace coefficients.
    fn piece_meets(&self, y: &[Rational], bounds: &[(Rational, Rational)]) -> bool {
        let basis = self.v.basis();
        let mut cons: Vec<(Vec<Rational>, Rational)> = Vec::new();
        for r in 0..self.n {
            let a: Vec<Rational> = basis.iter().map(|v| v[r].clone()).collect();
            // lo ≤ y + a·t ≤ hi
            cons.push((a.clone(), &bounds[r].1 - &y[r]));
            cons.push((a.iter().map(|x| -x).collect(), &y[r] - &bounds[r].0));
        }
        feasible(cons, basis.len())
    }
}

/// Whether `{t : a·t ≤ b for all constraints}` is non-empty.
fn feasible(mut cons: Vec<(Vec<Rational>, Rational)>, nvars: usize) -> bool {
    for j in 0..nvars {
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for c in cons {
            if c.0[j].is_positive() {
                pos.push(c);
            } else if c.0[j].is_negative() {
                neg.push(c);
            } else {
                rest.push(c);
            }
        }
        for (pa, pb) in &pos {
            for (na, nb) in &neg {
                let (sp, sn) = (-&na[j], pa[j].clone());
                let a: Vec<Rational> = pa.iter().zip(na).map(|(x, y)| x * &sp + y * &sn).collect();
                rest.push((a, pb * &sp + nb * &sn));
            }
        }
        cons = rest;
    }
    cons.iter().all(|(_, b)| !b.is_negative())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SubgroupVerdict {
    Coset,
    Empty,
    Mismatch,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubgroupTranslate {
    pub translate: Coords,
    pub representative: Coords,
    /// Number of affine pieces meeting the window.
    pub pieces: usize,
    pub verdict: SubgroupVerdict,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubgroupHullReport {
    pub subgroup: SubgroupSpec,
    pub window: Window,
    pub translates: Vec<SubgroupTranslate>,
    pub empty: usize,
    pub passed: bool,
}

/// For each translate `g`, computes `(g + H) ∩ W` by translating the
/// pieces of `H ∩ (W − g)` and compares it with `(k + H) ∩ W` for the
/// canonical representative `k` of `g` modulo `H`.
pub fn subgroup_hull_check(spec: &SubgroupSpec, translates: &[Coords], window: &Window) -> Result<SubgroupHullReport> {
    let n = spec
        .ambient()
        .or_else(|| window.intervals().map(<[_]>::len))
        .ok_or_else(|| Error::DegenerateSubgroup("cannot infer the ambient dimension".into()))?;
    let h = spec.prepare(n)?;
    let bounds: Vec<(Rational, Rational)> = window
        .intervals()
        .ok_or_else(|| Error::UnboundedWindow("subgroup check needs a box".into()))?
        .iter()
        .map(|i| match (i.lo.as_rational(), i.hi.as_rational()) {
            (Some(a), Some(b)) => Ok((a.clone(), b.clone())),
            _ => Err(Error::InvalidScalar(format!("window side {i} needs rational endpoints"))),
        })
        .collect::<Result<_>>()?;
    if bounds.len() != n {
        return Err(Error::DegenerateSubgroup(format!("window has {} sides, subgroup lives in R^{n}", bounds.len())));
    }
    let zero_offset = vec![Rational::zero(); n];
    let verdicts = translates
        .par_iter()
        .map(|g| {
            let gq = to_rationals(g)
                .filter(|v| v.len() == n)
                .ok_or_else(|| Error::InvalidPoint(format!("{} is not a rational point of R^{n}", fmt_point(g))))?;
            let k = h.representative(&gq);
            let diff: Vec<Rational> = gq.iter().zip(&k).map(|(a, b)| a - b).collect();
            if !h.contains(&diff) {
                return Err(Error::CrossCheckFailed(format!("{} is not congruent to its representative", fmt_point(g))));
            }
            let back: Vec<(Rational, Rational)> = bounds.iter().zip(&gq).map(|((lo, hi), s)| (lo - s, hi - s)).collect();
            let moved: BTreeSet<Vec<Rational>> = h
                .pieces(&zero_offset, &back)?
                .into_iter()
                .map(|y| {
                    let z: Vec<Rational> = y.iter().zip(&gq).map(|(a, b)| a + b).collect();
                    h.v.reduce(&z)
                })
                .collect();
            let coset = h.pieces(&k, &bounds)?;
            let verdict = if moved != coset {
                SubgroupVerdict::Mismatch
            } else if coset.is_empty() {
                SubgroupVerdict::Empty
            } else {
                SubgroupVerdict::Coset
            };
            Ok(SubgroupTranslate {
                translate: g.clone(),
                representative: to_coords(&k),
                pieces: coset.len(),
                verdict,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let empty = verdicts.iter().filter(|v| v.verdict == SubgroupVerdict::Empty).count();
    let passed = verdicts.iter().all(|v| v.verdict != SubgroupVerdict::Mismatch);
    Ok(SubgroupHullReport {
        subgroup: spec.clone(),
        window: window.clone(),
        translates: verdicts,
        empty,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat, ExactScalar};

    fn q(v: &[(i64, i64)]) -> Coords {
        v.iter().map(|&(a, b)| ExactScalar::Rat(rat(a, b))).collect()
    }

    #[test]
    fn integers_in_the_line() {
        let spec = SubgroupSpec::lattice(vec![vec![int(1)]]);
        let w = Window::cube(1, int(5)).unwrap();
        let ts: Vec<Coords> = (-8..=8).map(|k| q(&[(k, 3)])).collect();
        let r = subgroup_hull_check(&spec, &ts, &w).unwrap();
        assert!(r.passed);
        assert_eq!(r.empty, 0);
        let t = &r.translates[0];
        assert_eq!(t.representative, q(&[(1, 3)]));
        assert_eq!(t.pieces, 10);
    }

    #[test]
    fn horizontal_integers_empty_vertically() {
        let spec = SubgroupSpec::lattice(vec![vec![int(1), int(0)]]);
        let w = Window::cube(2, int(4)).unwrap();
        let ts: Vec<Coords> = (0..10).map(|k| q(&[(1, 2), (k, 1)])).collect();
        let r = subgroup_hull_check(&spec, &ts, &w).unwrap();
        assert!(r.passed);
        assert_eq!(r.empty, 5);
        assert_eq!(r.translates[2].representative, q(&[(1, 2), (2, 1)]));
    }

    #[test]
    fn horizontal_lines() {
        let spec = SubgroupSpec::subspace(vec![vec![int(1), int(0)]]);
        let w = Window::cube(2, int(4)).unwrap();
        let ts: Vec<Coords> = (0..10).map(|k| q(&[(7, 1), (k, 2)])).collect();
        let r = subgroup_hull_check(&spec, &ts, &w).unwrap();
        assert!(r.passed);
        assert!(r.translates.iter().take(9).all(|t| t.pieces == 1));
        assert_eq!(r.translates[9].verdict, SubgroupVerdict::Empty);
        assert_eq!(r.translates[3].representative, q(&[(0, 1), (3, 2)]));
    }

    #[test]
    fn skew_lattice_plus_line() {
        let spec = SubgroupSpec {
            lattice_gens: vec![vec![int(1), int(2), int(0)]],
            subspace_basis: vec![vec![int(0), int(1), int(1)]],
        };
        let w = Window::cube(3, int(3)).unwrap();
        let ts = vec![q(&[(1, 3), (5, 2), (-7, 4)]), q(&[(0, 1), (0, 1), (0, 1)])];
        let r = subgroup_hull_check(&spec, &ts, &w).unwrap();
        assert!(r.passed);
        assert!(r.translates[1].pieces > 0);
    }

    #[test]
    fn degenerate_specs() {
        let w = Window::cube(1, int(5)).unwrap();
        let dep = SubgroupSpec::lattice(vec![vec![int(1)], vec![int(2)]]);
        assert!(matches!(subgroup_hull_check(&dep, &[], &w), Err(Error::DegenerateSubgroup(_))));
        let zero = SubgroupSpec::subspace(vec![vec![int(0)]]);
        assert!(matches!(subgroup_hull_check(&zero, &[], &w), Err(Error::DegenerateSubgroup(_))));
    }

    #[test]
    fn fourier_motzkin() {
        // t ≤ 1, −t ≤ −2 is infeasible; t ≤ 2, −t ≤ −2 is the point 2.
        assert!(!feasible(vec![(vec![int(1)], int(1)), (vec![int(-1)], int(-2))], 1));
        assert!(feasible(vec![(vec![int(1)], int(2)), (vec![int(-1)], int(-2))], 1));
        assert!(feasible(vec![(vec![int(1), int(1)], int(0)), (vec![int(-1), int(0)], int(-5))], 2));
    }
}
