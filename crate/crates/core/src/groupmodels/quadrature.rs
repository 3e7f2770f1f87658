use rayon::prelude::*;
use serde::Serialize;

use super::GroupModel;
use crate::error::{Error, Result};

/// Midpoint rule on a coordinate box, weighted by the left Haar density.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HaarQuadrature {
    pub region: Vec<(f64, f64)>,
    /// Subdivisions per axis.
    pub resolution: Vec<usize>,
}

impl HaarQuadrature {
    pub fn new(region: Vec<(f64, f64)>, resolution: Vec<usize>) -> Self {
        HaarQuadrature { region, resolution }
    }

    pub fn uniform(region: Vec<(f64, f64)>, per_axis: usize) -> Self {
        let resolution = vec![per_axis; region.len()];
        HaarQuadrature { region, resolution }
    }

    /// Same region, every axis subdivided twice as finely.
    pub fn refined(&self) -> Self {
        HaarQuadrature {
            region: self.region.clone(),
            resolution: self.resolution.iter().map(|r| 2 * r).collect(),
        }
    }

    fn validate(&self, model: &GroupModel) -> Result<()> {
        if !model.is_real() {
            return Err(Error::Quadrature(format!("no Haar quadrature on {model}")));
        }
        if self.region.len() != model.dim() || self.resolution.len() != model.dim() {
            return Err(Error::Quadrature(format!(
                "region has {} axes, {model} needs {}",
                self.region.len(),
                model.dim()
            )));
        }
        if self.resolution.contains(&0)
            || self.region.iter().any(|&(lo, hi)| !(lo < hi) || !lo.is_finite() || !hi.is_finite())
        {
            return Err(Error::Quadrature("empty region".into()));
        }
        if *model == GroupModel::AxPlusB && self.region[0].0 <= 0.0 {
            return Err(Error::Quadrature("ax+b region must have a > 0".into()));
        }
        Ok(())
    }
}

/// `∫ f dm_G` over the region of `q`. The first axis is split across
/// threads; row sums are combined in index order, so the value does not
/// depend on the thread count.
pub fn haar_quadrature<F>(model: &GroupModel, f: F, q: &HaarQuadrature) -> Result<f64>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    q.validate(model)?;
    let n = q.region.len();
    let steps: Vec<f64> = q
        .region
        .iter()
        .zip(&q.resolution)
        .map(|(&(lo, hi), &r)| (hi - lo) / r as f64)
        .collect();
    let cell: f64 = steps.iter().product();
    let inner: usize = q.resolution[1..].iter().product();
    let rows: Vec<f64> = (0..q.resolution[0])
        .into_par_iter()
        .map(|i0| {
            let mut x = vec![0.0; n];
            x[0] = q.region[0].0 + (i0 as f64 + 0.5) * steps[0];
            let mut acc = 0.0;
            for flat in 0..inner {
                let mut rest = flat;
                for ax in (1..n).rev() {
                    let r = q.resolution[ax];
                    x[ax] = q.region[ax].0 + ((rest % r) as f64 + 0.5) * steps[ax];
                    rest /= r;
                }
                acc += f(&x) * model.haar_density(&x);
            }
            acc
        })
        .collect();
    let total: f64 = rows.iter().sum::<f64>() * cell;
    if !total.is_finite() {
        return Err(Error::Quadrature("integrand produced a non-finite value".into()));
    }
    Ok(total)
}
