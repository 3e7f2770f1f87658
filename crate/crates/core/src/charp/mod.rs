//! The unipotent group `{(x, y) : y^p = t·x^p − x}` over `F_p((t))`, solved
//! modulo `t^N` as a linear system over `F_p`.
//!
//! The equation is additive in characteristic `p`, so the solutions modulo
//! `t^N` form an `F_p`-subspace of the coefficient vectors
//! `(a_0, …, a_{N−1}, b_0, …, b_{N−1})` of `x` and `y`.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactnum::{is_prime, ExactScalar, Field, Fp, FpSeries};
use crate::groupmodels::{Coords, GroupModel};
use crate::linalg::{nullspace, rref};
use crate::pointsets::{approx_subgroup_certificate, verify_cover, ApproxCertificate, CertConfig, CoverSide, FinitePatch, PointSet, Window};

/// Largest candidate count the enumeration oracle and the Laurent search
/// will walk through.
pub const MAX_CANDIDATES: u64 = 1 << 24;

pub const DEFAULT_LAURENT_BOUND: i64 = 3;

fn serialize_series<S: Serializer>(x: &FpSeries, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// A pair `(x, y)` in the series text encoding.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct SeriesPair {
    #[serde(serialize_with = "serialize_series")]
    pub x: FpSeries,
    #[serde(serialize_with = "serialize_series")]
    pub y: FpSeries,
}

impl SeriesPair {
    pub fn valuation(&self) -> i64 {
        self.x.valuation().min(self.y.valuation())
    }
}

/// `x^p`, reading a power that vanishes modulo `t^N` as zero.
fn pth_power(x: &FpSeries) -> Result<FpSeries> {
    match x.frobenius() {
        Err(Error::PrecisionUnderflow(_)) => FpSeries::with_floor(x.p(), x.precision(), x.precision(), &[], x.floor()),
        r => r,
    }
}

/// `y^p − (t·x^p − x)`.
pub fn residual(x: &FpSeries, y: &FpSeries) -> Result<FpSeries> {
    let rhs = pth_power(x)?.shift(1)?.try_sub(x)?;
    pth_power(y)?.try_sub(&rhs)
}

/// Whether `(x, y)` solves the equation modulo `t^N`, i.e. the residual
/// has valuation at least `N` (`N` being the smaller precision).
pub fn is_solution(x: &FpSeries, y: &FpSeries) -> Result<bool> {
    let n = x.precision().min(y.precision());
    let r = residual(x, y)?;
    Ok(r.valuation() >= n)
}

fn check(p: u32, n: usize) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if n == 0 {
        return Err(Error::InvalidScalar("precision must be at least 1".into()));
    }
    Ok(())
}

/// One row per coefficient `t^j`, `j < N`, over the columns
/// `a_0..a_{N−1}, b_0..b_{N−1}`:
/// `[p | j]·b_{j/p} − [p | j−1]·a_{(j−1)/p} + a_j = 0`.
fn constraints(p: u32, n: usize) -> Vec<Vec<Fp>> {
    let pu = p as usize;
    (0..n)
        .map(|j| {
            let mut row = vec![Fp::reduce(0, p); 2 * n];
            if j % pu == 0 {
                row[n + j / pu] = row[n + j / pu].plus(&Fp::reduce(1, p));
            }
            if j >= 1 && (j - 1) % pu == 0 {
                let c = (j - 1) / pu;
                row[c] = row[c].minus(&Fp::reduce(1, p));
            }
            row[j] = row[j].plus(&Fp::reduce(1, p));
            row
        })
        .collect()
}

fn pair_from_coeffs(p: u32, n: usize, c: &[u32]) -> Result<SeriesPair> {
    let a: Vec<i64> = c[..n].iter().map(|&v| v as i64).collect();
    let b: Vec<i64> = c[n..].iter().map(|&v| v as i64).collect();
    Ok(SeriesPair {
        x: FpSeries::new(p, n as i64, 0, &a)?,
        y: FpSeries::new(p, n as i64, 0, &b)?,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RosenlichtSpace {
    pub p: u32,
    pub precision: usize,
    pub dimension: usize,
    /// Reduced row echelon basis of the coefficient vectors.
    #[serde(skip)]
    pub coefficient_basis: Vec<Vec<u32>>,
    pub basis: Vec<SeriesPair>,
}

impl RosenlichtSpace {
    /// `p^dimension`, if it fits.
    pub fn solution_count(&self) -> Option<u64> {
        (self.p as u64).checked_pow(self.dimension as u32)
    }

    /// Every element of the span, as coefficient vectors.
    pub fn elements(&self) -> Result<BTreeSet<Vec<u32>>> {
        let count = self.solution_count().filter(|&c| c <= MAX_CANDIDATES).ok_or(Error::TooManyProbes(usize::MAX))?;
        let len = 2 * self.precision;
        let mut out = BTreeSet::new();
        for mut k in 0..count {
            let mut v = vec![0u32; len];
            for b in &self.coefficient_basis {
                let c = (k % self.p as u64) as u32;
                k /= self.p as u64;
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi = (*vi + c * bi) % self.p;
                }
            }
            out.insert(v);
        }
        Ok(out)
    }

    pub fn contains(&self, coeffs: &[u32]) -> bool {
        let p = self.p;
        let mut rows: Vec<Vec<Fp>> = self
            .coefficient_basis
            .iter()
            .map(|b| b.iter().map(|&c| Fp::reduce(c as i64, p)).collect())
            .collect();
        rows.push(coeffs.iter().map(|&c| Fp::reduce(c as i64, p)).collect());
        crate::linalg::rank(rows, 2 * self.precision, &Fp::reduce(0, p)) == self.dimension
    }

    /// The pair with the given coefficient vector.
    pub fn pair(&self, coeffs: &[u32]) -> Result<SeriesPair> {
        pair_from_coeffs(self.p, self.precision, coeffs)
    }
}

/// Solutions of `y^p = t·x^p − x` modulo `t^N` with `x, y ∈ F_p[[t]]`.
pub fn rosenlicht_solve(p: u32, n: usize) -> Result<RosenlichtSpace> {
    check(p, n)?;
    let zero = Fp::reduce(0, p);
    let null = nullspace(constraints(p, n), 2 * n, &zero);
    let (rows, _) = rref(null, 2 * n, &zero);
    let coefficient_basis: Vec<Vec<u32>> = rows.iter().map(|r| r.iter().map(Fp::value).collect()).collect();
    let basis = coefficient_basis
        .iter()
        .map(|c| pair_from_coeffs(p, n, c))
        .collect::<Result<Vec<_>>>()?;
    Ok(RosenlichtSpace {
        p,
        precision: n,
        dimension: coefficient_basis.len(),
        coefficient_basis,
        basis,
    })
}

fn digits(mut k: u64, p: u32, len: usize) -> Vec<u32> {
    let mut v = vec![0u32; len];
    for d in v.iter_mut() {
        *d = (k % p as u64) as u32;
        k /= p as u64;
    }
    v
}

/// Brute-force solution set modulo `t^N`: every coefficient vector whose
/// pair has residual valuation at least `N`, found by evaluating the
/// equation in series arithmetic.
pub fn enumerate_solutions(p: u32, n: usize) -> Result<BTreeSet<Vec<u32>>> {
    check(p, n)?;
    let total = (p as u64)
        .checked_pow(2 * n as u32)
        .filter(|&c| c <= MAX_CANDIDATES)
        .ok_or(Error::TooManyProbes(usize::MAX))?;
    let found: Vec<Vec<u32>> = (0..total)
        .into_par_iter()
        .map(|k| -> Result<Option<Vec<u32>>> {
            let c = digits(k, p, 2 * n);
            let pair = pair_from_coeffs(p, n, &c)?;
            Ok(is_solution(&pair.x, &pair.y)?.then_some(c))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    Ok(found.into_iter().collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LaurentSearch {
    pub p: u32,
    /// Principal parts range over valuations `−bound..=−1`.
    pub bound: i64,
    /// Precision at which each lifted solution was re-checked.
    pub precision: i64,
    pub examined: u64,
    /// Solutions with negative valuation: the principal part, completed by
    /// the coefficient recursion with `y` integral part zero.
    pub solutions: Vec<SeriesPair>,
}

impl LaurentSearch {
    pub fn none_found(&self) -> bool {
        self.solutions.is_empty()
    }
}

/// Exhaustive search over all principal parts
/// `(a_{−V}, …, a_{−1}, b_{−V}, …, b_{−1})`. The coefficients of the
/// residual below `t^0` depend on the principal parts only, and the
/// integral coefficients of `x` can always be solved for afterwards, so a
/// principal part extends to a solution modulo `t^N` for every `N` exactly
/// when the residual vanishes below `t^0`. Each hit is lifted and
/// re-verified at `precision`.
pub fn laurent_search(p: u32, bound: i64, precision: usize) -> Result<LaurentSearch> {
    check(p, precision)?;
    if bound < 0 {
        return Err(Error::InvalidScalar("Laurent bound must be >= 0".into()));
    }
    let v = bound as usize;
    let total = (p as u64)
        .checked_pow(2 * v as u32)
        .filter(|&c| c <= MAX_CANDIDATES)
        .ok_or(Error::TooManyProbes(usize::MAX))?;
    let floor = p as i64 * bound + 1;
    let n = precision as i64;
    let mut solutions = Vec::new();
    for k in 1..total {
        let c = digits(k, p, 2 * v);
        let a: Vec<i64> = c[..v].iter().map(|&x| x as i64).collect();
        let b: Vec<i64> = c[v..].iter().map(|&x| x as i64).collect();
        let x = FpSeries::with_floor(p, 0, -bound, &a, floor)?;
        let y = FpSeries::with_floor(p, 0, -bound, &b, floor)?;
        if !residual(&x, &y)?.is_zero() {
            continue;
        }
        // a_j for j ≥ 0 from the recursion, taking b_j = 0 for j ≥ 0.
        let pu = p as i64;
        let mut full: Vec<i64> = a.clone();
        let coeff = |full: &[i64], i: i64| -> i64 {
            if i < -bound {
                0
            } else {
                full[(i + bound) as usize]
            }
        };
        for j in 0..n {
            let aj = if (j - 1).rem_euclid(pu) == 0 {
                coeff(&full, (j - 1).div_euclid(pu))
            } else {
                0
            };
            full.push(aj);
        }
        let x = FpSeries::with_floor(p, n, -bound, &full, floor)?;
        let y = FpSeries::with_floor(p, n, -bound, &b, floor)?;
        if !is_solution(&x, &y)? {
            return Err(Error::CrossCheckFailed(format!("lifted Laurent pair ({x}, {y}) is not a solution")));
        }
        solutions.push(SeriesPair { x, y });
    }
    Ok(LaurentSearch {
        p,
        bound,
        precision: n,
        examined: total.saturating_sub(1),
        solutions,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthRow {
    pub precision: usize,
    pub dimension: usize,
    /// Solver set equals the enumeration set, when the enumeration was run.
    pub oracle_agrees: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthReport {
    pub p: u32,
    pub rows: Vec<GrowthRow>,
    pub strictly_increasing: bool,
    pub laurent: LaurentSearch,
}

/// Dimensions along `precisions`, each cross-checked against the
/// enumeration oracle when `p^(2N)` is at most `oracle_limit`, plus the
/// bounded Laurent search at the largest precision.
pub fn rosenlicht_growth(p: u32, precisions: &[usize], bound: i64, oracle_limit: u64) -> Result<GrowthReport> {
    if precisions.is_empty() || precisions.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidScalar("precisions must be a nonempty increasing list".into()));
    }
    let mut rows = Vec::with_capacity(precisions.len());
    for &n in precisions {
        let space = rosenlicht_solve(p, n)?;
        let size = (p as u64).checked_pow(2 * n as u32);
        let oracle_agrees = match size {
            Some(s) if s <= oracle_limit.min(MAX_CANDIDATES) => Some(space.elements()? == enumerate_solutions(p, n)?),
            _ => None,
        };
        rows.push(GrowthRow {
            precision: n,
            dimension: space.dimension,
            oracle_agrees,
        });
    }
    let strictly_increasing = rows.windows(2).all(|w| w[0].dimension < w[1].dimension);
    let laurent = laurent_search(p, bound, *precisions.last().expect("nonempty"))?;
    Ok(GrowthReport {
        p,
        rows,
        strictly_increasing,
        laurent,
    })
}

/// The solution group modulo `t^N` as an additive series model with two
/// coordinates.
pub fn solution_model(space: &RosenlichtSpace) -> GroupModel {
    GroupModel::AdditiveSeries {
        p: space.p,
        precision: space.precision as i64,
        m: 2,
    }
}

fn to_coords(pair: &SeriesPair) -> Coords {
    vec![ExactScalar::Series(pair.x.clone()), ExactScalar::Series(pair.y.clone())]
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FiniteSubsetReport {
    pub size: usize,
    /// Points of `S + S` covered by `S + S` with `F = S`.
    pub covered: usize,
    pub certificate: ApproxCertificate,
}

/// `S = {0} ∪ ±basis` as a complete patch of the solution group: checks
/// `S² ⊂ F·S` with `F = S` by membership and runs the generic
/// approximate-subgroup certificate on it.
pub fn finite_subset_certificate(space: &RosenlichtSpace) -> Result<FiniteSubsetReport> {
    let model = solution_model(space);
    let mut pts: BTreeSet<Coords> = BTreeSet::new();
    pts.insert(model.identity());
    for b in &space.basis {
        let c = to_coords(b);
        pts.insert(model.inv(&c)?);
        pts.insert(c);
    }
    let pts: Vec<Coords> = pts.into_iter().collect();
    let size = pts.len();
    let patch = FinitePatch::new(model, pts.clone(), Window::All, true)?;
    let set = PointSet::Patch(patch);
    let mut sums = BTreeSet::new();
    for a in &pts {
        for b in &pts {
            sums.insert(model.mul(a, b)?);
        }
    }
    let sums: Vec<Coords> = sums.into_iter().collect();
    let covered = verify_cover(&sums, &set, &pts, CoverSide::Left)?;
    let certificate = approx_subgroup_certificate(&set, &CertConfig::new(ExactScalar::zero(), ExactScalar::zero()))?;
    Ok(FiniteSubsetReport {
        size,
        covered,
        certificate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent check of a coefficient vector: evaluates the coefficient
    /// of `t^j` in `y^p − t·x^p + x` directly from the definitions of the
    /// p-th power and the shift.
    fn satisfies(p: u32, n: usize, c: &[u32]) -> bool {
        let (a, b) = c.split_at(n);
        let pu = p as usize;
        (0..n).all(|j| {
            let ypow = if j % pu == 0 { b[j / pu] } else { 0 };
            let txp = if j >= 1 && (j - 1) % pu == 0 { a[(j - 1) / pu] } else { 0 };
            (ypow + p - txp + a[j]).is_multiple_of(p)
        })
    }

    #[test]
    fn smallest_case_by_hand() {
        let s = rosenlicht_solve(2, 2).unwrap();
        assert_eq!(s.dimension, 2);
        assert_eq!(s.solution_count(), Some(4));
        let e = s.elements().unwrap();
        // a1 = a0, b0 = a0, b1 free.
        let expect: BTreeSet<Vec<u32>> = [[0, 0, 0, 0], [1, 1, 1, 0], [0, 0, 0, 1], [1, 1, 1, 1]]
            .iter()
            .map(|v| v.to_vec())
            .collect();
        assert_eq!(e, expect);
    }

    #[test]
    fn solver_matches_enumeration_for_p2() {
        for n in 1..=6 {
            let s = rosenlicht_solve(2, n).unwrap();
            let brute = enumerate_solutions(2, n).unwrap();
            assert_eq!(s.elements().unwrap(), brute, "N = {n}");
            for c in &brute {
                assert!(satisfies(2, n, c));
            }
        }
    }

    #[test]
    fn solver_matches_enumeration_for_p3() {
        for n in 1..=4 {
            let s = rosenlicht_solve(3, n).unwrap();
            assert_eq!(s.elements().unwrap(), enumerate_solutions(3, n).unwrap(), "N = {n}");
        }
    }

    #[test]
    fn zero_and_sums_are_solutions() {
        let s = rosenlicht_solve(2, 8).unwrap();
        assert!(s.contains(&[0; 16]));
        for u in &s.basis {
            assert!(is_solution(&u.x, &u.y).unwrap());
            for v in &s.basis {
                let x = u.x.try_add(&v.x).unwrap();
                let y = u.y.try_add(&v.y).unwrap();
                assert!(is_solution(&x, &y).unwrap());
                assert!(is_solution(&x.neg(), &y.neg()).unwrap());
            }
        }
    }

    #[test]
    fn basis_is_reduced_echelon_and_integral() {
        let s = rosenlicht_solve(3, 5).unwrap();
        assert_eq!(s.dimension, 5);
        for b in &s.basis {
            assert!(b.valuation() >= 0);
        }
        let mut last = None;
        for row in &s.coefficient_basis {
            let lead = row.iter().position(|&c| c != 0).unwrap();
            assert_eq!(row[lead], 1);
            assert!(last.is_none_or(|l| lead > l));
            last = Some(lead);
        }
    }

    #[test]
    fn dimension_grows() {
        let r = rosenlicht_growth(2, &[1, 2, 3, 4, 5, 6, 7, 8], 0, 1 << 12).unwrap();
        assert!(r.strictly_increasing);
        let dims: Vec<usize> = r.rows.iter().map(|r| r.dimension).collect();
        assert_eq!(dims, (1..=8).collect::<Vec<_>>());
        assert!(r.rows[..6].iter().all(|r| r.oracle_agrees == Some(true)));
        assert_eq!(r.rows[7].oracle_agrees, None);
        assert!(r.laurent.none_found());
        assert_eq!(r.laurent.examined, 0);
    }

    #[test]
    fn p2_has_a_pole_at_minus_one() {
        // t·(t⁻¹)² − t⁻¹ = 0, so (t⁻¹, 0) solves the equation exactly.
        let x = FpSeries::with_floor(2, 8, -1, &[1], 4).unwrap();
        let y = FpSeries::with_floor(2, 8, 8, &[], 4).unwrap();
        assert!(residual(&x, &y).unwrap().is_zero());
        let s = laurent_search(2, 3, 8).unwrap();
        assert_eq!(s.examined, 63);
        assert!(!s.none_found());
        assert!(s.solutions.iter().any(|q| q.x == x && q.y.is_zero()));
        for q in &s.solutions {
            assert!((-3..=-1).contains(&q.valuation()));
        }
    }

    #[test]
    fn odd_primes_have_no_poles_in_range() {
        for p in [3, 5] {
            let s = laurent_search(p, 2, 6).unwrap();
            assert!(s.none_found(), "p = {p}: {:?}", s.solutions);
        }
    }

    #[test]
    fn finite_subsets_are_approximate_subgroups() {
        let s = rosenlicht_solve(2, 4).unwrap();
        let r = finite_subset_certificate(&s).unwrap();
        assert_eq!(r.size, 5);
        assert_eq!(r.covered, r.certificate.product_points);
    }

    #[test]
    fn rejects_composite_moduli() {
        assert!(matches!(rosenlicht_solve(4, 3), Err(Error::NotPrime(4))));
        assert!(matches!(enumerate_solutions(1, 3), Err(Error::NotPrime(1))));
    }
}
