//! Degree-bounded vanishing ideals of exact point sets, Zariski-density
//! certificates up to a degree, affine hulls, and the subgroup-plus-finite
//! coset cover shape in the linear case.
//!
//! "Dense up to degree d" means no nonzero polynomial of total degree at
//! most `d` vanishes on the sample; a finite set is never literally dense.

mod cover;

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{ExactScalar, ScalarDomain};
use crate::groupmodels::{Coords, GroupModel};
use crate::linalg::{nullspace, Subspace};

pub use cover::{coset_cover_verifier, ClusterInfo, CosetCover, CoverShape};

/// Monomials in `n` variables of total degree at most `d`, in graded
/// lexicographic order: by degree, then by exponent tuple descending.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonomialBasis {
    pub n: usize,
    pub d: usize,
    pub exponents: Vec<Vec<u32>>,
}

impl MonomialBasis {
    pub fn new(n: usize, d: usize) -> Self {
        let mut exponents = Vec::new();
        for deg in 0..=d {
            let mut cur = Vec::with_capacity(n);
            push_tuples(n, deg as u32, &mut cur, &mut exponents);
        }
        MonomialBasis { n, d, exponents }
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }
}

fn push_tuples(n: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if cur.len() + 1 == n {
        cur.push(left);
        out.push(cur.clone());
        cur.pop();
        return;
    }
    if n == 0 {
        if left == 0 {
            out.push(Vec::new());
        }
        return;
    }
    for e in (0..=left).rev() {
        cur.push(e);
        push_tuples(n, left - e, cur, out);
        cur.pop();
    }
}

/// `C(n + d, d)`, the number of monomials of degree at most `d`.
pub fn monomial_count(n: usize, d: usize) -> usize {
    let mut c: u128 = 1;
    for i in 1..=d as u128 {
        c = c * (n as u128 + i) / i;
    }
    c as usize
}

/// The exact field shared by the coordinates of a point list.
pub fn common_field(points: &[Coords]) -> Result<ScalarDomain> {
    let mut field = ScalarDomain::Rational;
    for c in points.iter().flatten() {
        match c.domain() {
            ScalarDomain::Rational => {}
            ScalarDomain::Quadratic(d) => match field {
                ScalarDomain::Rational => field = ScalarDomain::Quadratic(d),
                ScalarDomain::Quadratic(e) if e == d => {}
                _ => return Err(Error::MixedFields),
            },
            ScalarDomain::Series { .. } => {
                return Err(Error::DomainMismatch("vanishing ideals need ℚ or ℚ(√d) coordinates".into()))
            }
        }
    }
    Ok(field)
}

fn field_name(f: ScalarDomain) -> String {
    match f {
        ScalarDomain::Rational => "Q".into(),
        ScalarDomain::Quadratic(d) => format!("Q(sqrt({d}))"),
        ScalarDomain::Series { p, .. } => format!("F{p}((t))"),
    }
}

/// Variable names: `a, b` on the ax+b group, `x, y, z` up to three
/// coordinates, `x1, x2, …` beyond.
pub fn variable_names(model: Option<&GroupModel>, n: usize) -> Vec<String> {
    if matches!(model, Some(GroupModel::AxPlusB)) {
        return vec!["a".into(), "b".into()];
    }
    if n <= 3 {
        ["x", "y", "z"][..n].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=n).map(|i| format!("x{i}")).collect()
    }
}

/// A polynomial as a coefficient vector over a monomial basis.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Polynomial {
    pub variables: Vec<String>,
    pub exponents: Vec<Vec<u32>>,
    pub coefficients: Vec<ExactScalar>,
    pub text: String,
}

impl Polynomial {
    pub fn new(variables: Vec<String>, basis: &MonomialBasis, coefficients: Vec<ExactScalar>) -> Self {
        let mut p = Polynomial {
            variables,
            exponents: basis.exponents.clone(),
            coefficients,
            text: String::new(),
        };
        p.text = p.render();
        p
    }

    fn render(&self) -> String {
        let mut terms = Vec::new();
        for (c, e) in self.coefficients.iter().zip(&self.exponents) {
            if c.is_zero() {
                continue;
            }
            let mut t = format!("({c})");
            for (v, &k) in self.variables.iter().zip(e) {
                match k {
                    0 => {}
                    1 => t.push_str(&format!("*{v}")),
                    _ => t.push_str(&format!("*{v}^{k}")),
                }
            }
            terms.push(t);
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }

    /// Direct evaluation, independent of any elimination.
    pub fn eval(&self, p: &[ExactScalar]) -> Result<ExactScalar> {
        let top = self.exponents.iter().flatten().copied().max().unwrap_or(0) as usize;
        let mut powers: Vec<Vec<ExactScalar>> = Vec::with_capacity(p.len());
        for x in p {
            let mut row = vec![ExactScalar::one()];
            for k in 0..top {
                row.push(row[k].try_mul(x)?);
            }
            powers.push(row);
        }
        let mut acc = ExactScalar::zero();
        for (c, e) in self.coefficients.iter().zip(&self.exponents) {
            if c.is_zero() {
                continue;
            }
            let mut term = c.clone();
            for (row, &k) in powers.iter().zip(e) {
                if k > 0 {
                    term = term.try_mul(&row[k as usize])?;
                }
            }
            acc = acc.try_add(&term)?;
        }
        Ok(acc)
    }

    pub fn degree(&self) -> Option<u32> {
        self.coefficients
            .iter()
            .zip(&self.exponents)
            .filter(|(c, _)| !c.is_zero())
            .map(|(_, e)| e.iter().sum())
            .max()
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VanishingBasis {
    pub points: usize,
    pub degree: usize,
    pub field: String,
    pub monomials: MonomialBasis,
    pub basis: Vec<Polynomial>,
    /// `C(n+d, d)` minus the number of independent vanishing polynomials.
    pub hilbert: usize,
}

fn check_points(points: &[Coords]) -> Result<usize> {
    let n = points.first().map_or(0, Vec::len);
    if points.iter().any(|p| p.len() != n) {
        return Err(Error::InvalidPoint("points have different dimensions".into()));
    }
    let mut seen = BTreeSet::new();
    for p in points {
        if !seen.insert(p) {
            return Err(Error::DuplicatePoint(crate::pointsets::fmt_point(p)));
        }
    }
    Ok(n)
}

/// Exact null space of the evaluation matrix (rows are points, columns are
/// monomials). Every returned polynomial is re-evaluated on every point.
pub fn vanishing_basis(points: &[Coords], d: usize, variables: Option<Vec<String>>) -> Result<VanishingBasis> {
    let n = check_points(points)?;
    let field = common_field(points)?;
    let monomials = MonomialBasis::new(n, d);
    let rows: Vec<Vec<ExactScalar>> = points
        .par_iter()
        .map(|p| monomials.exponents.iter().map(|e| monomial_value(p, e)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let zero = ExactScalar::zero();
    let kernel = nullspace(rows, monomials.len(), &zero);
    let vars = variables.unwrap_or_else(|| variable_names(None, n));
    let basis: Vec<Polynomial> = kernel
        .into_iter()
        .map(|c| Polynomial::new(vars.clone(), &monomials, c))
        .collect();
    for (i, poly) in basis.iter().enumerate() {
        for p in points {
            if !poly.eval(p)?.is_zero() {
                return Err(Error::CrossCheckFailed(format!("basis polynomial {i} does not vanish")));
            }
        }
    }
    Ok(VanishingBasis {
        points: points.len(),
        degree: d,
        field: field_name(field),
        hilbert: monomials.len() - basis.len(),
        monomials,
        basis,
    })
}

fn monomial_value(p: &[ExactScalar], e: &[u32]) -> Result<ExactScalar> {
    let mut v = ExactScalar::one();
    for (x, &k) in p.iter().zip(e) {
        for _ in 0..k {
            v = v.try_mul(x)?;
        }
    }
    Ok(v)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum DensityVerdict {
    /// No nonzero polynomial of degree `≤ d` vanishes on the sample.
    Granted,
    /// `witness` vanishes exactly on the whole sample.
    Refuted { witness: Polynomial },
    /// Fewer than `C(n+d, d)` points: a vanishing polynomial always exists.
    Inconclusive { needed: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityCertificate {
    pub degree: usize,
    pub sample_size: usize,
    pub field: String,
    #[serde(flatten)]
    pub verdict: DensityVerdict,
    pub caveat: &'static str,
}

pub const DENSITY_CAVEAT: &str = "Zariski dense up to the stated degree only";

impl DensityCertificate {
    pub fn is_granted(&self) -> bool {
        self.verdict == DensityVerdict::Granted
    }

    pub fn witness(&self) -> Option<&Polynomial> {
        match &self.verdict {
            DensityVerdict::Refuted { witness } => Some(witness),
            _ => None,
        }
    }
}

pub fn density_certificate(points: &[Coords], d: usize, variables: Option<Vec<String>>) -> Result<DensityCertificate> {
    let vb = vanishing_basis(points, d, variables)?;
    let needed = vb.monomials.len();
    let verdict = if points.len() < needed {
        DensityVerdict::Inconclusive { needed }
    } else if let Some(w) = vb.basis.into_iter().next() {
        DensityVerdict::Refuted { witness: w }
    } else {
        DensityVerdict::Granted
    };
    Ok(DensityCertificate {
        degree: d,
        sample_size: points.len(),
        field: vb.field,
        verdict,
        caveat: DENSITY_CAVEAT,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AffineHull {
    pub base: Coords,
    /// Reduced row echelon basis of the direction space.
    pub directions: Vec<Coords>,
}

impl AffineHull {
    pub fn dim(&self) -> usize {
        self.directions.len()
    }

    fn subspace(&self) -> Subspace<ExactScalar> {
        Subspace::span(self.directions.clone(), self.base.len(), &ExactScalar::zero())
    }

    pub fn contains(&self, p: &[ExactScalar]) -> Result<bool> {
        let rel = p.iter().zip(&self.base).map(|(a, b)| a.try_sub(b)).collect::<Result<Vec<_>>>()?;
        Ok(self.subspace().contains(&rel))
    }
}

/// Base point is the first point; directions span the differences.
pub fn affine_hull(points: &[Coords]) -> Result<AffineHull> {
    let n = check_points(points)?;
    common_field(points)?;
    let base = points.first().ok_or(Error::EmptySet)?.clone();
    let diffs = points[1..]
        .iter()
        .map(|p| p.iter().zip(&base).map(|(a, b)| a.try_sub(b)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let s = Subspace::span(diffs, n, &ExactScalar::zero());
    Ok(AffineHull {
        base,
        directions: s.basis().to_vec(),
    })
}
