use std::cmp::Ordering;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{int, ExactScalar, Rational};
use crate::groupmodels::{Coords, GroupModel};

use super::order::sort_by_norm;
use super::window::Window;
use super::PointSet;

/// Largest probe grid a single measurement may use.
pub const MAX_PROBES: usize = 4_000_000;

#[derive(Clone, Debug, PartialEq)]
pub struct DeloneConfig {
    /// Probe grid spacing.
    pub delta: Rational,
    /// Probes farther than this from the set raise the ∞-flag. Defaults to
    /// the shortest window side divided by 64.
    pub cap: Option<ExactScalar>,
}

impl Default for DeloneConfig {
    fn default() -> Self {
        DeloneConfig {
            delta: Rational::new(1.into(), 4.into()),
            cap: None,
        }
    }
}

impl DeloneConfig {
    pub fn with_delta(delta: Rational) -> Self {
        DeloneConfig { delta, cap: None }
    }

    pub fn cap(mut self, cap: impl Into<ExactScalar>) -> Self {
        self.cap = Some(cap.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Covering {
    /// Every probe is within `radius` of the set; `probe` attains it.
    Finite { radius: ExactScalar, probe: Coords },
    /// `probe` has no point of the set within `cap`: an absolute
    /// certificate that the covering radius exceeds `cap`.
    Infinite { cap: ExactScalar, probe: Coords, distance: ExactScalar },
}

impl Covering {
    pub fn is_finite(&self) -> bool {
        matches!(self, Covering::Finite { .. })
    }

    pub fn radius(&self) -> Option<&ExactScalar> {
        match self {
            Covering::Finite { radius, .. } => Some(radius),
            Covering::Infinite { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DelonePair {
    /// Minimum pairwise distance; undefined for fewer than two points.
    pub packing: Option<ExactScalar>,
    pub packing_witness: Option<(Coords, Coords)>,
    pub covering: Covering,
    /// Window the points were taken from.
    pub window: Window,
    /// Window the probes were taken from (shrunk by the cap).
    pub probe_window: Window,
    #[serde(serialize_with = "crate::exactnum::serialize_rational")]
    pub delta: Rational,
    pub points: usize,
    pub probes: usize,
}

/// Nearest-point queries in the max-norm: floating-point pruning along the
/// first coordinate, exact distances for the final answer.
pub(crate) struct Nearest<'a> {
    model: GroupModel,
    pts: &'a [Coords],
    /// (first coordinate, index) sorted.
    by_x: Vec<(f64, usize)>,
    approx: Vec<Vec<f64>>,
}

impl<'a> Nearest<'a> {
    pub(crate) fn new(model: GroupModel, pts: &'a [Coords]) -> Self {
        let approx: Vec<Vec<f64>> = pts.iter().map(|p| p.iter().map(|c| c.to_f64()).collect()).collect();
        let mut by_x: Vec<(f64, usize)> = approx.iter().enumerate().map(|(i, a)| (a[0], i)).collect();
        by_x.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        Nearest { model, pts, by_x, approx }
    }

    fn dist_f64(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    }

    /// Exact distance from `q` to the set.
    pub(crate) fn distance(&self, q: &[ExactScalar]) -> Result<ExactScalar> {
        let qa: Vec<f64> = q.iter().map(|c| c.to_f64()).collect();
        let start = self.by_x.partition_point(|&(x, _)| x < qa[0]);
        let mut best = f64::INFINITY;
        let mut cands: Vec<(f64, usize)> = Vec::new();
        let slack = 1e-9;
        let mut scan = |k: usize, best: &mut f64| -> bool {
            let (x, i) = self.by_x[k];
            if (x - qa[0]).abs() > *best + slack {
                return false;
            }
            let d = Self::dist_f64(&self.approx[i], &qa);
            if d <= *best + slack {
                cands.push((d, i));
                if d < *best {
                    *best = d;
                }
            }
            true
        };
        for k in start..self.by_x.len() {
            if !scan(k, &mut best) {
                break;
            }
        }
        for k in (0..start).rev() {
            if !scan(k, &mut best) {
                break;
            }
        }
        let mut exact: Option<ExactScalar> = None;
        for (d, i) in cands {
            if d > best + slack {
                continue;
            }
            let e = self.model.distance(q, &self.pts[i])?;
            if exact.as_ref().is_none_or(|b| e < *b) {
                exact = Some(e);
            }
        }
        exact.ok_or(Error::EmptySet)
    }
}

fn min_pairwise(model: &GroupModel, pts: &[Coords]) -> Result<Option<(ExactScalar, Coords, Coords)>> {
    if pts.len() < 2 {
        return Ok(None);
    }
    let approx: Vec<Vec<f64>> = pts.iter().map(|p| p.iter().map(|c| c.to_f64()).collect()).collect();
    let mut order: Vec<usize> = (0..pts.len()).collect();
    order.sort_by(|&a, &b| approx[a][0].total_cmp(&approx[b][0]));
    let mut best = f64::INFINITY;
    let mut cands = Vec::new();
    for (k, &i) in order.iter().enumerate() {
        for &j in &order[k + 1..] {
            if approx[j][0] - approx[i][0] > best + 1e-9 {
                break;
            }
            let d = Nearest::dist_f64(&approx[i], &approx[j]);
            if d <= best + 1e-9 {
                cands.push((d, i.min(j), i.max(j)));
                best = best.min(d);
            }
        }
    }
    let mut out: Option<(ExactScalar, Coords, Coords)> = None;
    for (d, i, j) in cands {
        if d > best + 1e-9 {
            continue;
        }
        let e = model.distance(&pts[i], &pts[j])?;
        let (a, b) = (pts[i].clone(), pts[j].clone());
        if out.as_ref().is_none_or(|(bd, _, _)| e < *bd) {
            out = Some((e, a, b));
        }
    }
    Ok(out)
}

fn probe_grid(w: &Window, delta: &Rational) -> Result<Vec<Coords>> {
    let ivs = w
        .intervals()
        .ok_or_else(|| Error::UnboundedWindow("probe grid needs a box".into()))?;
    let d = ExactScalar::Rat(delta.clone());
    let mut axes: Vec<Vec<ExactScalar>> = Vec::new();
    let mut total: usize = 1;
    for i in ivs {
        let lo = i.lo.try_div(&d)?.ceil()?;
        let hi = i.hi.try_div(&d)?.floor()?;
        let mut axis = Vec::new();
        let mut k = lo;
        while k <= hi {
            axis.push(ExactScalar::Rat(Rational::from_integer(k.clone()) * delta));
            k += 1;
            if axis.len() > MAX_PROBES {
                return Err(Error::TooManyProbes(axis.len()));
            }
        }
        total = total.saturating_mul(axis.len());
        axes.push(axis);
    }
    if total > MAX_PROBES {
        return Err(Error::TooManyProbes(total));
    }
    let mut out: Vec<Coords> = vec![Vec::new()];
    for axis in axes {
        let mut next = Vec::with_capacity(out.len() * axis.len());
        for p in &out {
            for c in &axis {
                let mut q = p.clone();
                q.push(c.clone());
                next.push(q);
            }
        }
        out = next;
    }
    Ok(out)
}

fn default_cap(w: &Window) -> Result<ExactScalar> {
    let ivs = w
        .intervals()
        .ok_or_else(|| Error::UnboundedWindow("Delone parameters need a box".into()))?;
    let mut min: Option<ExactScalar> = None;
    for i in ivs {
        let side = i.hi.try_sub(&i.lo)?;
        if min.as_ref().is_none_or(|m| side < *m) {
            min = Some(side);
        }
    }
    min.expect("non-empty box").try_div(&ExactScalar::Rat(int(64)))
}

/// Packing and covering radii of `P ∩ window` in the max-norm.
///
/// Probes are taken on the `delta` grid inside the window shrunk by the
/// cap, so any probe farther than the cap from the sample is farther than
/// the cap from the whole set (for complete samples). Probes are scanned in
/// norm order and the first one beyond the cap is the ∞-flag witness.
pub fn delone_parameters(set: &PointSet, window: &Window, cfg: &DeloneConfig) -> Result<DelonePair> {
    let model = set.model();
    if !model.is_real() {
        return Err(Error::DomainMismatch(format!("no real distance on {model}")));
    }
    let pts = set.sample(window)?;
    if pts.is_empty() {
        return Err(Error::EmptySet);
    }
    let packing = min_pairwise(&model, &pts)?;
    let cap = match &cfg.cap {
        Some(c) => c.clone(),
        None => default_cap(window)?,
    };
    let probe_window = window
        .shrink(&cap)?
        .ok_or_else(|| Error::WindowTooSmall(format!("window {window} is narrower than twice the cap {cap}")))?;
    let mut probes = probe_grid(&probe_window, &cfg.delta)?;
    sort_by_norm(&model, &mut probes);
    let nearest = Nearest::new(model, &pts);
    let dists: Vec<ExactScalar> = probes
        .par_iter()
        .map(|q| nearest.distance(q))
        .collect::<Result<Vec<_>>>()?;
    let mut covering = None;
    for (q, d) in probes.iter().zip(&dists) {
        if d.real_cmp(&cap)? == Ordering::Greater {
            covering = Some(Covering::Infinite {
                cap: cap.clone(),
                probe: q.clone(),
                distance: d.clone(),
            });
            break;
        }
    }
    let covering = match covering {
        Some(c) => c,
        None => {
            let mut best: Option<(ExactScalar, Coords)> = None;
            for (q, d) in probes.iter().zip(&dists) {
                if best.as_ref().is_none_or(|(b, _)| d > b) {
                    best = Some((d.clone(), q.clone()));
                }
            }
            let (radius, probe) = best.ok_or_else(|| Error::WindowTooSmall("no probes in window".into()))?;
            Covering::Finite { radius, probe }
        }
    };
    let (packing, packing_witness) = match packing {
        Some((d, a, b)) => (Some(d), Some((a, b))),
        None => (None, None),
    };
    Ok(DelonePair {
        packing,
        packing_witness,
        covering,
        window: window.clone(),
        probe_window,
        delta: cfg.delta.clone(),
        points: pts.len(),
        probes: probes.len(),
    })
}
