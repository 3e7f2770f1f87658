//! Deterministic "closest to the identity first" order on points.
//!
//! Points are compared by the max-norm of their offset from the identity,
//! then coordinate by coordinate by absolute value with positive values
//! before negative ones. Witness searches scan candidates in this order, so
//! the witnesses they report are the smallest in this sense.

use crate::exactnum::ExactScalar;
use crate::groupmodels::GroupModel;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct NormKey(Vec<(ExactScalar, bool)>);

pub fn norm_key(model: &GroupModel, c: &[ExactScalar]) -> NormKey {
    if !model.is_real() {
        return NormKey(c.iter().map(|x| (x.clone(), false)).collect());
    }
    let e = model.identity();
    let mut items = Vec::with_capacity(c.len() + 1);
    let mut max = ExactScalar::zero();
    for (x, o) in c.iter().zip(&e) {
        let rel = x.try_sub(o).expect("real coordinates");
        let neg = rel.signum().expect("real coordinates") == std::cmp::Ordering::Less;
        let abs = if neg { rel.neg() } else { rel };
        if abs > max {
            max = abs.clone();
        }
        items.push((abs, neg));
    }
    items.insert(0, (max, false));
    NormKey(items)
}

pub fn sort_by_norm(model: &GroupModel, pts: &mut Vec<Vec<ExactScalar>>) {
    let mut keyed: Vec<(NormKey, Vec<ExactScalar>)> =
        pts.drain(..).map(|p| (norm_key(model, &p), p)).collect();
    keyed.sort();
    pts.extend(keyed.into_iter().map(|(_, p)| p));
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::ScalarDomain;

    #[test]
    fn order_prefers_small_then_positive() {
        let m = GroupModel::rn(2, ScalarDomain::Rational);
        let mut v: Vec<Vec<ExactScalar>> = [(1, 0), (0, -1), (0, 1), (-1, -1), (0, 0), (1, 1)]
            .iter()
            .map(|&(a, b)| vec![ExactScalar::from(a), ExactScalar::from(b)])
            .collect();
        sort_by_norm(&m, &mut v);
        let got: Vec<String> = v.iter().map(|p| format!("{},{}", p[0], p[1])).collect();
        assert_eq!(got, ["0,0", "0,1", "0,-1", "1,0", "1,1", "-1,-1"]);
    }
}
