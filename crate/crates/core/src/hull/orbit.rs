use std::fmt;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactnum::{ExactScalar, Rational};
use crate::groupmodels::{Coords, GroupModel};
use crate::pointsets::delone::MAX_PROBES;
use crate::pointsets::{fmt_point, sort_by_norm, FinitePatch, PointSet, Window};

/// Which translates a search visits.
#[derive(Clone, Debug, PartialEq)]
pub enum TranslateSearch {
    /// `base^k` for `k = 1..=steps`.
    Powers { base: Coords, steps: usize },
    /// Valid points of the `step` grid in the cube of radius `radius`
    /// around the origin of coordinates, in norm order.
    Grid { radius: Rational, step: Rational },
    List(Vec<Coords>),
}

impl TranslateSearch {
    pub fn translates(&self, model: &GroupModel) -> Result<Vec<Coords>> {
        match self {
            TranslateSearch::Powers { base, steps } => {
                model.validate(base)?;
                let mut out = Vec::with_capacity(*steps);
                let mut g = base.clone();
                for _ in 0..*steps {
                    out.push(g.clone());
                    g = model.mul(&g, base)?;
                }
                Ok(out)
            }
            TranslateSearch::Grid { radius, step } => {
                if step <= &Rational::from_integer(0.into()) {
                    return Err(Error::InvalidScalar("grid step must be positive".into()));
                }
                let k = (radius / step).floor().to_integer();
                let k: i64 = k.try_into().map_err(|_| Error::TooManyProbes(usize::MAX))?;
                let side = (2 * k + 1) as usize;
                let total = side.checked_pow(model.dim() as u32).unwrap_or(usize::MAX);
                if total > MAX_PROBES {
                    return Err(Error::TooManyProbes(total));
                }
                let mut out: Vec<Coords> = vec![Vec::new()];
                for _ in 0..model.dim() {
                    let mut next = Vec::with_capacity(out.len() * side);
                    for p in &out {
                        for i in -k..=k {
                            let mut q = p.clone();
                            q.push(ExactScalar::Rat(step * Rational::from_integer(i.into())));
                            next.push(q);
                        }
                    }
                    out = next;
                }
                out.retain(|g| model.validate(g).is_ok());
                sort_by_norm(model, &mut out);
                Ok(out)
            }
            TranslateSearch::List(v) => {
                for g in v {
                    model.validate(g)?;
                }
                Ok(v.clone())
            }
        }
    }
}

impl fmt::Display for TranslateSearch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TranslateSearch::Powers { base, steps } => write!(f, "powers of {} up to {steps}", fmt_point(base)),
            TranslateSearch::Grid { radius, step } => write!(f, "grid of step {step} in radius {radius}"),
            TranslateSearch::List(v) => write!(f, "list of {} translates", v.len()),
        }
    }
}

impl Serialize for TranslateSearch {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EmptinessResult {
    pub radius: ExactScalar,
    pub search: TranslateSearch,
    /// `g` with `(gP) ∩ B(e, R) = ∅`, if one was found.
    pub witness: Option<Coords>,
    pub tried: usize,
    /// Translates where the set could not be evaluated completely.
    pub skipped: usize,
}

/// Searches for a translate pushing the set off the ball of radius `r`
/// around the identity. A hit certifies that the covering radius exceeds
/// `r`; finding nothing is a scale-stamped outcome, not an error.
pub fn emptiness_witness(set: &PointSet, r: &ExactScalar, search: &TranslateSearch) -> Result<EmptinessResult> {
    let model = set.model();
    let ball = Window::ball(&model, r.clone())?;
    let mut out = EmptinessResult {
        radius: r.clone(),
        search: search.clone(),
        witness: None,
        tried: 0,
        skipped: 0,
    };
    for g in search.translates(&model)? {
        out.tried += 1;
        let back = ball.left_translate(&model, &model.inv(&g)?)?;
        if !set.is_complete_on(&back) {
            out.skipped += 1;
            continue;
        }
        if set.sample(&back)?.is_empty() {
            out.witness = Some(g);
            break;
        }
    }
    Ok(out)
}

fn serialize_points<S: Serializer>(p: &FinitePatch, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(p.sorted_points())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HullEntry {
    pub translate: Coords,
    pub count: usize,
    pub complete: bool,
    #[serde(rename = "points", serialize_with = "serialize_points")]
    pub patch: FinitePatch,
}

/// Finitely many elements `gP ∩ W` of the orbit closure, stamped with the
/// translates used.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HullSample {
    pub base: String,
    pub window: Window,
    pub entries: Vec<HullEntry>,
}

impl HullSample {
    /// `g0,…,count` rows for plotting.
    pub fn to_csv(&self) -> String {
        let dim = self.entries.first().map_or(0, |e| e.translate.len());
        let mut head: Vec<String> = (0..dim).map(|i| format!("g{i}")).collect();
        head.push("count".into());
        let mut out = head.join(",");
        out.push('\n');
        for e in &self.entries {
            let mut row: Vec<String> = e.translate.iter().map(|c| csv_field(&c.to_string())).collect();
            row.push(e.count.to_string());
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Exact patches `(g·P) ∩ W` for each translate.
pub fn hull_sample(set: &PointSet, translates: &[Coords], window: &Window) -> Result<HullSample> {
    let model = set.model();
    for g in translates {
        model.validate(g)?;
    }
    let entries = translates
        .par_iter()
        .map(|g| {
            let patch = set.translate_patch(g, window)?;
            Ok(HullEntry {
                translate: g.clone(),
                count: patch.len(),
                complete: patch.is_complete(),
                patch,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(HullSample {
        base: set.to_string(),
        window: window.clone(),
        entries,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TranslateVerdict {
    pub translate: Coords,
    pub checked: usize,
    /// Points within the margin of the window boundary.
    pub exempt: usize,
    /// Points whose cofactors fell where the target set is unknown.
    pub undecided: usize,
    pub violation: Option<Coords>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuasiMonotoneReport {
    pub window: Window,
    pub margin: ExactScalar,
    pub base_checked: usize,
    pub translates: Vec<TranslateVerdict>,
    pub passed: bool,
}

fn diameter(model: &GroupModel, f: &[Coords]) -> Result<ExactScalar> {
    let mut best = ExactScalar::zero();
    for a in f {
        for b in f {
            let d = model.distance(a, b)?;
            if d > best {
                best = d;
            }
        }
    }
    Ok(best)
}

enum Cover {
    Yes,
    No,
    Unknown,
}

/// Is `shift·x ∈ Q·F`, i.e. some `f` with `shift·x·f⁻¹ ∈ Q`?
fn covered(model: &GroupModel, q: &PointSet, f_inv: &[Coords], shift: &[ExactScalar], x: &[ExactScalar]) -> Result<Cover> {
    let y = model.mul(shift, x)?;
    let mut unknown = false;
    for fi in f_inv {
        match q.contains(&model.mul(&y, fi)?) {
            Some(true) => return Ok(Cover::Yes),
            Some(false) => {}
            None => unknown = true,
        }
    }
    Ok(if unknown { Cover::Unknown } else { Cover::No })
}

/// Propagation of `P ⊂ Q·F` to translates: checks `(gP) ∩ W ⊆ (gQ)·F`
/// for every sampled `g`, exempting points within `diam(F)` of the window
/// boundary. The base inclusion must hold on `W` first.
pub fn quasi_monotone_check(
    p: &PointSet,
    q: &PointSet,
    f: &[Coords],
    translates: &[Coords],
    window: &Window,
) -> Result<QuasiMonotoneReport> {
    let model = p.model();
    if q.model() != model {
        return Err(Error::ModelMismatch(format!("{} vs {}", model, q.model())));
    }
    if f.is_empty() {
        return Err(Error::EmptySet);
    }
    for g in f.iter().chain(translates) {
        model.validate(g)?;
    }
    let margin = diameter(&model, f)?;
    let inner = window
        .shrink(&margin)?
        .ok_or_else(|| Error::WindowTooSmall(format!("window {window} is narrower than twice diam(F) = {margin}")))?;
    let f_inv = f.iter().map(|x| model.inv(x)).collect::<Result<Vec<_>>>()?;
    let e = model.identity();
    let base = p.sample_complete(&inner)?;
    for x in &base {
        if !matches!(covered(&model, q, &f_inv, &e, x)?, Cover::Yes) {
            return Err(Error::BaseInclusionFails(fmt_point(x)));
        }
    }
    let verdicts = translates
        .par_iter()
        .map(|g| {
            let gp = p.translate_patch(g, window)?;
            let g_inv = model.inv(g)?;
            let mut v = TranslateVerdict {
                translate: g.clone(),
                checked: 0,
                exempt: 0,
                undecided: 0,
                violation: None,
            };
            for x in gp.sorted_points() {
                if !inner.contains(&x) {
                    v.exempt += 1;
                    continue;
                }
                v.checked += 1;
                match covered(&model, q, &f_inv, &g_inv, &x)? {
                    Cover::Yes => {}
                    Cover::Unknown => v.undecided += 1,
                    Cover::No => {
                        v.violation = Some(x);
                        break;
                    }
                }
            }
            Ok(v)
        })
        .collect::<Result<Vec<_>>>()?;
    let passed = verdicts.iter().all(|v| v.violation.is_none() && v.undecided == 0);
    Ok(QuasiMonotoneReport {
        window: window.clone(),
        margin,
        base_checked: base.len(),
        translates: verdicts,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat, ScalarDomain};
    use crate::pointsets::{LatticeSet, ModelSet};

    fn r1() -> GroupModel {
        GroupModel::rn(1, ScalarDomain::Rational)
    }

    fn multiples(k: i64) -> PointSet {
        PointSet::Lattice(LatticeSet::new(r1(), vec![int(0)], vec![vec![int(k)]]).unwrap())
    }

    fn pt(v: &[i64]) -> Coords {
        v.iter().map(|&x| ExactScalar::from(x)).collect()
    }

    fn line_translates() -> Vec<Coords> {
        TranslateSearch::Grid { radius: int(3), step: rat(1, 2) }.translates(&r1()).unwrap()
    }

    #[test]
    fn strip_is_pushed_off_vertically() {
        let l = PointSet::Model(ModelSet::symmetric(2, int(1)).unwrap());
        let search = TranslateSearch::Powers { base: pt(&[0, 1]), steps: 20 };
        let got = emptiness_witness(&l, &ExactScalar::from(5), &search).unwrap();
        assert_eq!(got.witness, Some(pt(&[0, 7])));
    }

    #[test]
    fn horizontal_line_and_full_lattice() {
        let m = GroupModel::rn(2, ScalarDomain::Rational);
        let row = PointSet::Lattice(LatticeSet::new(m, vec![int(0), int(0)], vec![vec![int(1), int(0)]]).unwrap());
        let got = emptiness_witness(&row, &ExactScalar::from(2), &TranslateSearch::List(vec![pt(&[0, 10])])).unwrap();
        assert_eq!(got.witness, Some(pt(&[0, 10])));
        let z2 = PointSet::Lattice(LatticeSet::integer_lattice(m).unwrap());
        let grid = TranslateSearch::Grid { radius: int(3), step: rat(1, 2) };
        let got = emptiness_witness(&z2, &ExactScalar::from(2), &grid).unwrap();
        assert_eq!(got.witness, None);
        assert_eq!(got.tried, 169);
    }

    #[test]
    fn ax_plus_b_translates() {
        let m = GroupModel::AxPlusB;
        let l = PointSet::Lattice(LatticeSet::new(m, vec![int(1), int(0)], vec![vec![int(0), int(1)]]).unwrap());
        let search = TranslateSearch::Powers { base: pt(&[2, 0]), steps: 8 };
        let got = emptiness_witness(&l, &ExactScalar::from(2), &search).unwrap();
        assert_eq!(got.witness, Some(pt(&[4, 0])));
    }

    #[test]
    fn translated_patches() {
        let m = GroupModel::rn(2, ScalarDomain::Rational);
        let z2 = PointSet::Lattice(LatticeSet::integer_lattice(m).unwrap());
        let w = Window::cube(2, int(3)).unwrap();
        let half = vec![ExactScalar::Rat(rat(1, 2)), ExactScalar::from(0)];
        let s = hull_sample(&z2, &[m.identity(), half.clone()], &w).unwrap();
        assert_eq!(s.entries[0].patch, z2.patch(&w).unwrap());
        assert_eq!(s.entries[1].count, 6 * 7);
        assert!(s.entries[1].patch.points().all(|p| p[0].as_rational().is_some_and(|x| !x.is_integer())));
        let csv = s.to_csv();
        assert_eq!(csv.lines().next(), Some("g0,g1,count"));
        assert_eq!(csv.lines().nth(2), Some("1/2,0,42"));
    }

    #[test]
    fn strip_translates_deplete() {
        let l = PointSet::Model(ModelSet::symmetric(2, int(1)).unwrap());
        let w = Window::cube(2, int(8)).unwrap();
        let ts: Vec<Coords> = (0..12).map(|k| pt(&[0, k])).collect();
        let s = hull_sample(&l, &ts, &w).unwrap();
        let counts: Vec<usize> = s.entries.iter().map(|e| e.count).collect();
        assert!(counts.windows(2).all(|c| c[0] >= c[1]), "{counts:?}");
        assert_eq!(*counts.last().unwrap(), 0);
        assert!(counts[0] > 0);
    }

    #[test]
    fn inclusion_propagates() {
        let w = Window::cube(1, int(20)).unwrap();
        let r = quasi_monotone_check(&multiples(2), &multiples(1), &[pt(&[0])], &line_translates(), &w).unwrap();
        assert!(r.passed);
        let r = quasi_monotone_check(&multiples(1), &multiples(2), &[pt(&[0]), pt(&[1])], &line_translates(), &w).unwrap();
        assert!(r.passed);
        assert_eq!(r.margin, ExactScalar::from(1));
    }

    #[test]
    fn base_inclusion_witness() {
        let w = Window::cube(1, int(20)).unwrap();
        let err = quasi_monotone_check(&multiples(1), &multiples(2), &[pt(&[0])], &line_translates(), &w).unwrap_err();
        assert_eq!(err, Error::BaseInclusionFails(fmt_point(&pt(&[1]))));
    }

    #[test]
    fn translate_violation_is_reported() {
        // Base holds on the window but the patch Q is finite, so far
        // translates leave the region where Q is known.
        let w = Window::cube(1, int(5)).unwrap();
        let q = PointSet::Patch(multiples(1).patch(&Window::cube(1, int(6)).unwrap()).unwrap());
        let r = quasi_monotone_check(&multiples(1), &q, &[pt(&[0])], &[pt(&[0]), pt(&[40])], &w).unwrap();
        assert!(!r.passed);
        assert_eq!(r.translates[0].undecided, 0);
        assert!(r.translates[1].undecided > 0);
    }
}
