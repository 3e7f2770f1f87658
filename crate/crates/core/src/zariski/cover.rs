use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::ExactScalar;
use crate::groupmodels::{Coords, GroupModel};
use crate::linalg::Subspace;
use crate::pointsets::{sort_by_norm, FinitePatch};

use super::{affine_hull, density_certificate, monomial_count, vanishing_basis, DensityCertificate};

/// Number of leading difference vectors combined pairwise when looking for
/// two-dimensional cluster directions.
const PAIR_CANDIDATES: usize = 16;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClusterInfo {
    pub representative: Coords,
    pub size: usize,
    pub hull_dim: usize,
    pub hilbert: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoverShape {
    /// The sample is dense up to the degree: `H` is the whole space.
    Dense,
    /// Finitely many parallel flat clusters.
    Split,
}

/// `g + H ⊂ closure(Λ) ⊂ F + H` at the sampled scale.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CosetCover {
    pub shape: CoverShape,
    pub degree: usize,
    pub certificate: DensityCertificate,
    /// Echelon basis of the direction space `H`.
    pub h_basis: Vec<Coords>,
    pub g: Coords,
    pub f: Vec<Coords>,
    pub clusters: Vec<ClusterInfo>,
    /// Points of `g + H` checked against the hull of the `g`-cluster.
    pub h_sample_checked: usize,
    /// Points of `Λ` checked to lie in `F + H`.
    pub points_checked: usize,
}

fn sub(a: &[ExactScalar], b: &[ExactScalar]) -> Result<Coords> {
    a.iter().zip(b).map(|(x, y)| x.try_sub(y)).collect()
}

fn unit_basis(n: usize) -> Vec<Coords> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { ExactScalar::one() } else { ExactScalar::zero() }).collect())
        .collect()
}

/// Groups points by their canonical coset modulo `d`, in order of first
/// appearance.
fn cluster(points: &[Coords], d: &Subspace<ExactScalar>) -> Vec<Vec<Coords>> {
    let mut index: BTreeMap<Coords, usize> = BTreeMap::new();
    let mut out: Vec<Vec<Coords>> = Vec::new();
    for p in points {
        let key = d.reduce(p);
        let i = *index.entry(key).or_insert_with(|| {
            out.push(Vec::new());
            out.len() - 1
        });
        out[i].push(p.clone());
    }
    out
}

/// Candidate cluster directions: spans of differences from the first
/// point, and of pairs of the shortest ones, below full dimension.
fn candidates(points: &[Coords], n: usize) -> Result<Vec<Subspace<ExactScalar>>> {
    let zero = ExactScalar::zero();
    let mut out = vec![Subspace::span(Vec::new(), n, &zero)];
    if n < 2 || points.len() < 2 {
        return Ok(out);
    }
    let diffs: Vec<Coords> = points[1..].iter().map(|p| sub(p, &points[0])).collect::<Result<_>>()?;
    for v in &diffs {
        out.push(Subspace::span(vec![v.clone()], n, &zero));
    }
    if n >= 3 {
        let head = &diffs[..diffs.len().min(PAIR_CANDIDATES)];
        for (i, u) in head.iter().enumerate() {
            for v in &head[i + 1..] {
                let s = Subspace::span(vec![u.clone(), v.clone()], n, &zero);
                if s.dim() == 2 && s.dim() < n {
                    out.push(s);
                }
            }
        }
    }
    Ok(out)
}

/// Recovers `(H, g, F)` with `g + H ⊂ closure(Λ) ⊂ F + H` for a patch of
/// an additive model, then re-verifies both inclusions by exact
/// membership. A dense sample gives `H` = everything and `F = {0}`;
/// otherwise the sample is split into parallel flat clusters, and a
/// cluster that is not flat up to the degree is out of scope.
pub fn coset_cover_verifier(lambda: &FinitePatch, d: usize) -> Result<CosetCover> {
    let model = lambda.model();
    let GroupModel::AdditiveRn { n, .. } = model else {
        return Err(Error::ModelMismatch(format!("coset covers need an additive model, got {model}")));
    };
    let points = lambda.sorted_points();
    if points.is_empty() {
        return Err(Error::EmptySet);
    }
    let certificate = density_certificate(&points, d, None)?;
    let zero = ExactScalar::zero();
    if certificate.is_granted() {
        return Ok(CosetCover {
            shape: CoverShape::Dense,
            degree: d,
            certificate,
            h_basis: unit_basis(n),
            g: model.identity(),
            f: vec![model.identity()],
            clusters: vec![ClusterInfo {
                representative: model.identity(),
                size: points.len(),
                hull_dim: n,
                hilbert: monomial_count(n, d),
            }],
            h_sample_checked: 0,
            points_checked: points.len(),
        });
    }

    // Fewest clusters wins; ties keep the earliest candidate.
    let mut best: Option<Vec<Vec<Coords>>> = None;
    for s in candidates(&points, n)? {
        let c = cluster(&points, &s);
        if best.as_ref().is_none_or(|b| c.len() < b.len()) {
            best = Some(c);
        }
    }
    let mut clusters = best.expect("the zero subspace is always a candidate");
    for c in &mut clusters {
        sort_by_norm(&model, c);
    }

    let mut infos = Vec::with_capacity(clusters.len());
    let mut hulls = Vec::with_capacity(clusters.len());
    for (i, c) in clusters.iter().enumerate() {
        let hull = affine_hull(c)?;
        let hilbert = vanishing_basis(c, d, None)?.hilbert;
        if hilbert != monomial_count(hull.dim(), d) {
            return Err(Error::NonlinearClosure(i));
        }
        infos.push(ClusterInfo {
            representative: c[0].clone(),
            size: c.len(),
            hull_dim: hull.dim(),
            hilbert,
        });
        hulls.push(hull);
    }
    let largest = (0..clusters.len())
        .max_by(|&a, &b| clusters[a].len().cmp(&clusters[b].len()).then(b.cmp(&a)))
        .expect("non-empty");
    let h_basis = hulls[largest].directions.clone();
    let h = Subspace::span(h_basis.clone(), n, &zero);
    let g = clusters[largest][0].clone();
    let f: Vec<Coords> = infos.iter().map(|c| c.representative.clone()).collect();

    // g + H sample: small integer combinations of the basis.
    let mut h_sample_checked = 0;
    let mut combos: Vec<Vec<i64>> = vec![Vec::new()];
    for _ in 0..h_basis.len() {
        combos = combos
            .into_iter()
            .flat_map(|c| {
                (-2..=2).map(move |k| {
                    let mut c = c.clone();
                    c.push(k);
                    c
                })
            })
            .collect();
    }
    for c in combos {
        let mut x = g.clone();
        for (k, v) in c.iter().zip(&h_basis) {
            for (xi, vi) in x.iter_mut().zip(v) {
                *xi = xi.try_add(&ExactScalar::from(*k).try_mul(vi)?)?;
            }
        }
        if !hulls.iter().any(|hl| hl.contains(&x).unwrap_or(false)) {
            return Err(Error::CrossCheckFailed(format!(
                "{} lies in g + H but in no cluster hull",
                crate::pointsets::fmt_point(&x)
            )));
        }
        h_sample_checked += 1;
    }

    for p in &points {
        let mut ok = false;
        for r in &f {
            if h.contains(&sub(p, r)?) {
                ok = true;
                break;
            }
        }
        if !ok {
            return Err(Error::UncoveredPoints(vec![crate::pointsets::fmt_point(p)]));
        }
    }

    Ok(CosetCover {
        shape: CoverShape::Split,
        degree: d,
        certificate,
        h_basis,
        g,
        f,
        clusters: infos,
        h_sample_checked,
        points_checked: points.len(),
    })
}
