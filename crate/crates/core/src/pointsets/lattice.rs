use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{int, ExactScalar, Rational};
use crate::groupmodels::{Coords, GroupModel};
use crate::linalg::{independent_coordinates, inverse, Subspace};

use super::window::Window;

/// Largest number of lattice points a single box enumeration may visit.
pub const MAX_ENUMERATION: u64 = 20_000_000;

/// `offset + Z·g_1 + ... + Z·g_k` in coordinates, with independent
/// rational generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineLattice {
    offset: Vec<Rational>,
    gens: Vec<Vec<Rational>>,
    /// Coordinates on which the generators restrict to an invertible matrix.
    pivots: Vec<usize>,
    /// Inverse of that restriction: `c_i = Σ_r (z_r − o_r) inv[r][i]`.
    inv: Vec<Vec<Rational>>,
    span: Subspace<Rational>,
}

impl AffineLattice {
    pub fn new(offset: Vec<Rational>, gens: Vec<Vec<Rational>>) -> Result<Self> {
        let n = offset.len();
        if gens.iter().any(|g| g.len() != n) {
            return Err(Error::DegenerateSubgroup("generator arity differs from ambient dimension".into()));
        }
        let zero = int(0);
        let pivots = if gens.is_empty() {
            Vec::new()
        } else {
            independent_coordinates(&gens, n, &zero)
                .ok_or_else(|| Error::DegenerateSubgroup("lattice generators are dependent".into()))?
        };
        let restricted: Vec<Vec<Rational>> = pivots
            .iter()
            .map(|&r| gens.iter().map(|g| g[r].clone()).collect())
            .collect();
        let inv = if gens.is_empty() {
            Vec::new()
        } else {
            inverse(&restricted, &zero).expect("pivot restriction is invertible")
        };
        let span = Subspace::span(gens.clone(), n, &zero);
        Ok(AffineLattice {
            offset,
            gens,
            pivots,
            inv,
            span,
        })
    }

    pub fn ambient(&self) -> usize {
        self.offset.len()
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    pub fn offset(&self) -> &[Rational] {
        &self.offset
    }

    pub fn gens(&self) -> &[Vec<Rational>] {
        &self.gens
    }

    pub fn point(&self, c: &[Rational]) -> Vec<Rational> {
        let mut z = self.offset.clone();
        for (ci, g) in c.iter().zip(&self.gens) {
            for (zr, gr) in z.iter_mut().zip(g) {
                *zr += ci * gr;
            }
        }
        z
    }

    /// Real coefficients `c` with `z = offset + Σ c_i g_i`, if `z` lies in
    /// the affine span.
    pub fn coefficients(&self, z: &[Rational]) -> Option<Vec<Rational>> {
        let rel: Vec<Rational> = z.iter().zip(&self.offset).map(|(a, b)| a - b).collect();
        if !self.span.contains(&rel) {
            return None;
        }
        let k = self.rank();
        let mut c = vec![Rational::zero(); k];
        for (row, &r) in self.pivots.iter().enumerate() {
            for (i, ci) in c.iter_mut().enumerate() {
                *ci += &rel[r] * &self.inv[i][row];
            }
        }
        Some(c)
    }

    pub fn contains(&self, z: &[Rational]) -> bool {
        self.coefficients(z)
            .is_some_and(|c| c.iter().all(|x| x.is_integer()))
    }

    /// Integer coefficient ranges covering every lattice point whose
    /// pivot coordinates lie in the given bounds.
    fn coefficient_ranges(&self, bounds: &[(Rational, Rational)]) -> Vec<(BigInt, BigInt)> {
        (0..self.rank())
            .map(|i| {
                let mut lo = Rational::zero();
                let mut hi = Rational::zero();
                for (row, &r) in self.pivots.iter().enumerate() {
                    let w = &self.inv[i][row];
                    let a = (&bounds[r].0 - &self.offset[r]) * w;
                    let b = (&bounds[r].1 - &self.offset[r]) * w;
                    let (mn, mx) = if a <= b { (a, b) } else { (b, a) };
                    lo += mn;
                    hi += mx;
                }
                (lo.ceil().to_integer(), hi.floor().to_integer())
            })
            .collect()
    }

    /// All lattice points in the closed box `bounds`.
    pub fn points_in_bounds(&self, bounds: &[(Rational, Rational)]) -> Result<Vec<Vec<Rational>>> {
        let ranges = self.coefficient_ranges(bounds);
        let mut total: u64 = 1;
        for (lo, hi) in &ranges {
            if hi < lo {
                return Ok(Vec::new());
            }
            let len = (hi - lo + 1u32).to_u64().unwrap_or(u64::MAX);
            total = total.saturating_mul(len);
        }
        if total > MAX_ENUMERATION {
            return Err(Error::TooManyProbes(total as usize));
        }
        let ranges: Vec<(i64, i64)> = ranges
            .iter()
            .map(|(a, b)| (a.to_i64().expect("bounded"), b.to_i64().expect("bounded")))
            .collect();
        let mut out = Vec::new();
        let mut c = vec![int(0); self.rank()];
        self.enumerate(0, &ranges, &mut c, bounds, &mut out);
        Ok(out)
    }

    fn enumerate(
        &self,
        i: usize,
        ranges: &[(i64, i64)],
        c: &mut Vec<Rational>,
        bounds: &[(Rational, Rational)],
        out: &mut Vec<Vec<Rational>>,
    ) {
        if i == ranges.len() {
            let z = self.point(c);
            if z.iter().zip(bounds).all(|(x, (lo, hi))| lo <= x && x <= hi) {
                out.push(z);
            }
            return;
        }
        for v in ranges[i].0..=ranges[i].1 {
            c[i] = int(v);
            self.enumerate(i + 1, ranges, c, bounds, out);
        }
    }
}

/// Integer hull of a bounded window: `[floor(lo), ceil(hi)]` per axis.
pub fn rational_bounds(w: &Window) -> Result<Vec<(Rational, Rational)>> {
    let ivs = w
        .intervals()
        .ok_or_else(|| Error::UnboundedWindow("enumeration needs a box".into()))?;
    ivs.iter()
        .map(|i| {
            Ok((
                Rational::from_integer(i.lo.floor()?),
                Rational::from_integer(i.hi.ceil()?),
            ))
        })
        .collect()
}

/// A coordinate lattice viewed as a point set of a model, e.g. `Z^2` in
/// `R^2` or `{1} × Z` in the `ax+b` group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeSet {
    model: GroupModel,
    lattice: AffineLattice,
}

impl LatticeSet {
    pub fn new(model: GroupModel, offset: Vec<Rational>, gens: Vec<Vec<Rational>>) -> Result<Self> {
        if !model.is_real() || offset.len() != model.dim() {
            return Err(Error::InvalidPoint(format!(
                "lattice of dimension {} does not fit {model}",
                offset.len()
            )));
        }
        let lattice = AffineLattice::new(offset, gens)?;
        let s = LatticeSet { model, lattice };
        if let Some(p) = s.lattice.points_in_bounds(&s.probe_bounds())?.first() {
            model.validate(&to_coords(p))?;
        }
        Ok(s)
    }

    /// `Z^n` in `R^n` with rational coordinates.
    pub fn integer_lattice(model: GroupModel) -> Result<Self> {
        let n = model.dim();
        let gens = (0..n)
            .map(|i| (0..n).map(|j| int((i == j) as i64)).collect())
            .collect();
        LatticeSet::new(model, vec![int(0); n], gens)
    }

    fn probe_bounds(&self) -> Vec<(Rational, Rational)> {
        self.lattice
            .offset()
            .iter()
            .map(|o| (o - int(1), o + int(1)))
            .collect()
    }

    pub fn model(&self) -> GroupModel {
        self.model
    }

    pub fn lattice(&self) -> &AffineLattice {
        &self.lattice
    }

    pub fn contains(&self, p: &[ExactScalar]) -> bool {
        let Some(z) = to_rationals(p) else {
            return false;
        };
        self.lattice.contains(&z)
    }

    pub fn points_in(&self, w: &Window) -> Result<Vec<Coords>> {
        let bounds = rational_bounds(w)?;
        let pts = self.lattice.points_in_bounds(&bounds)?;
        Ok(pts
            .iter()
            .map(|z| to_coords(z))
            .filter(|c| w.contains(c) && self.model.validate(c).is_ok())
            .collect())
    }
}

impl fmt::Display for LatticeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "lattice offset=(")?;
        for (i, o) in self.lattice.offset().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{o}")?;
        }
        write!(f, ")")?;
        for g in self.lattice.gens() {
            write!(f, " gen=(")?;
            for (i, x) in g.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

pub fn to_coords(z: &[Rational]) -> Coords {
    z.iter().map(|x| ExactScalar::Rat(x.clone())).collect()
}

pub fn to_rationals(p: &[ExactScalar]) -> Option<Vec<Rational>> {
    p.iter().map(|x| x.as_rational().cloned()).collect()
}
