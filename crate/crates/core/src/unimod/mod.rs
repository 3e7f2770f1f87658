//! Densities on non-unimodular groups: summable weight sequences, a
//! positive probability density `ρ` with `∫ρΔ dm > 1` on the `ax+b` group,
//! and the report on `{1} × ℤ` in that group.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{int, rat, ExactScalar};
use crate::groupmodels::{haar_quadrature, Coords, GroupModel, HaarQuadrature};
use crate::hull::{emptiness_witness, EmptinessResult, TranslateSearch};
use crate::pointsets::{delone_parameters, DeloneConfig, DelonePair, LatticeSet, PointSet, Window};
use crate::zariski::{density_certificate, variable_names, DensityCertificate};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeightSequence {
    pub b: Vec<f64>,
    pub a: Vec<f64>,
    /// Normalizing constant in `a_n = c·2⁻ⁿ/(1 + b_n)`.
    pub c: f64,
    pub sum_a: f64,
    pub sum_ab: f64,
}

/// `a_n = c·2⁻ⁿ/(1 + b_n)` for `n = 1..M`, with `c` making `Σa = 1`. Since
/// `a_n b_n ≤ c·2⁻ⁿ`, `Σab ≤ c`.
pub fn b3_weights(b: &[f64]) -> Result<WeightSequence> {
    if b.is_empty() {
        return Err(Error::InvalidScalar("need at least one b-value".into()));
    }
    if let Some(x) = b.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
        return Err(Error::InvalidScalar(format!("b-values must be finite and nonnegative, got {x}")));
    }
    let raw: Vec<f64> = b
        .iter()
        .enumerate()
        .map(|(i, bi)| 0.5f64.powi(i as i32 + 1) / (1.0 + bi))
        .collect();
    let total: f64 = raw.iter().sum();
    let a: Vec<f64> = raw.iter().map(|r| r / total).collect();
    let sum_a = a.iter().sum();
    let sum_ab = a.iter().zip(b).map(|(x, y)| x * y).sum();
    Ok(WeightSequence {
        b: b.to_vec(),
        a,
        c: 1.0 / total,
        sum_a,
        sum_ab,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityConfig {
    /// The dense sequence is a `side × side` grid on `[1/2, 2] × [−1, 1]`.
    pub side: usize,
    /// Half-width of the tent `φ` around the identity.
    pub half_width: f64,
    /// `α` is the least value with `αγ ≥ 1/2 + margin`.
    pub margin: f64,
    /// Quadrature cells per axis on each bump's support.
    pub resolution: usize,
    pub tolerance: f64,
    /// Positivity is checked on a `test_points × test_points` grid over
    /// `[3/4, 3/2] × [−1/2, 1/2]`.
    pub test_points: usize,
    /// The shift is searched among `(2^k, 0)`, `k < max_shift_steps`.
    pub max_shift_steps: u32,
}

impl Default for DensityConfig {
    fn default() -> Self {
        DensityConfig {
            side: 8,
            half_width: 0.25,
            margin: 0.05,
            resolution: 512,
            tolerance: 1e-6,
            test_points: 17,
            max_shift_steps: 64,
        }
    }
}

pub const TEST_REGION: [(f64, f64); 2] = [(0.75, 1.5), (-0.5, 0.5)];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityReport {
    pub config: DensityConfig,
    pub sequence: Vec<[f64; 2]>,
    pub weights: WeightSequence,
    pub gamma: f64,
    pub alpha: f64,
    pub shift: [f64; 2],
    pub min_on_test_grid: f64,
    pub integral: f64,
    pub integral_delta: f64,
    /// `αγ + (1−α)γΔ(s)⁻¹`.
    pub closed_form: f64,
    /// Values at twice the resolution.
    pub integral_refined: f64,
    pub integral_delta_refined: f64,
    pub positive: bool,
    pub normalized: bool,
    pub exceeds_one: bool,
    pub closed_form_agrees: bool,
    pub note: &'static str,
}

impl DensityReport {
    pub fn passed(&self) -> bool {
        self.positive && self.normalized && self.exceeds_one && self.closed_form_agrees
    }
}

pub const TRUNCATION_NOTE: &str =
    "finite sequence: positivity is checked on the test region only, not on the whole group";

fn tent(u: f64) -> f64 {
    (1.0 - u.abs()).max(0.0)
}

/// Normalized tent bump around the identity of `ax+b`.
#[derive(Clone, Copy, Debug)]
struct Bump {
    h: f64,
    scale: f64,
}

impl Bump {
    fn new(h: f64) -> Result<Self> {
        if !(h > 0.0 && h < 1.0) {
            return Err(Error::InvalidScalar(format!("tent half-width must lie in (0, 1), got {h}")));
        }
        // ∫ tent((a−1)/h) a⁻² da = −ln(1 − h²)/h and ∫ tent(b/h) db = h.
        Ok(Bump {
            h,
            scale: -1.0 / (1.0 - h * h).ln(),
        })
    }

    fn eval(&self, t: &[f64]) -> f64 {
        self.scale * tent((t[0] - 1.0) / self.h) * tent(t[1] / self.h)
    }

    /// Support of `t ↦ φ(g·t)`.
    fn support(&self, g: &[f64]) -> Vec<(f64, f64)> {
        let (a, b) = (g[0], g[1]);
        vec![
            ((1.0 - self.h) / a, (1.0 + self.h) / a),
            ((-self.h - b) / a, (self.h - b) / a),
        ]
    }
}

/// Grid points ordered outward from the identity, by max-norm distance
/// then coordinates.
fn dense_sequence(side: usize) -> Vec<[f64; 2]> {
    let step = |lo: f64, hi: f64, i: usize| if side == 1 { (lo + hi) / 2.0 } else { lo + (hi - lo) * i as f64 / (side - 1) as f64 };
    let mut pts: Vec<[f64; 2]> = (0..side)
        .flat_map(|i| (0..side).map(move |j| [step(0.5, 2.0, i), step(-1.0, 1.0, j)]))
        .collect();
    let key = |p: &[f64; 2]| (p[0] - 1.0).abs().max(p[1].abs());
    pts.sort_by(|p, q| key(p).total_cmp(&key(q)).then(p[0].total_cmp(&q[0])).then(p[1].total_cmp(&q[1])));
    pts
}

/// `g·t` in `ax+b`, without allocating.
fn mul2(g: &[f64], t: &[f64]) -> [f64; 2] {
    [g[0] * t[0], g[0] * t[1] + g[1]]
}

/// `Σ_n a_n ∫ φ(g_n t)·w(t) dm(t)`, each term integrated on its own
/// support; terms are combined in index order.
fn weighted_terms<W>(model: &GroupModel, bump: Bump, gs: &[Vec<f64>], a: &[f64], w: W, resolution: usize) -> Result<f64>
where
    W: Fn(&[f64]) -> f64 + Sync,
{
    let parts: Vec<f64> = gs
        .par_iter()
        .map(|g| {
            let q = HaarQuadrature::uniform(bump.support(g), resolution);
            haar_quadrature(model, |t| bump.eval(&mul2(g, t)) * w(t), &q)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(parts.iter().zip(a).map(|(v, an)| v * an).sum())
}

struct Integrals {
    plain: f64,
    delta: f64,
    gamma: f64,
}

fn integrals(model: &GroupModel, bump: Bump, seq: &[Vec<f64>], shifted: &[Vec<f64>], a: &[f64], alpha: f64, resolution: usize) -> Result<Integrals> {
    let delta = |t: &[f64]| model.modular_function_f64(t);
    let m0 = weighted_terms(model, bump, seq, a, |_| 1.0, resolution)?;
    let m1 = weighted_terms(model, bump, shifted, a, |_| 1.0, resolution)?;
    let gamma = weighted_terms(model, bump, seq, a, delta, resolution)?;
    let d1 = weighted_terms(model, bump, shifted, a, delta, resolution)?;
    Ok(Integrals {
        plain: alpha * m0 + (1.0 - alpha) * m1,
        delta: alpha * gamma + (1.0 - alpha) * d1,
        gamma,
    })
}

/// Builds `ρ(t) = αρ₀(t) + (1−α)ρ₀(st)` with `ρ₀(t) = Σ a_n φ(s_n t)` and
/// `b(s_n) = Δ(s_n)⁻¹`, then checks positivity on the test grid,
/// `∫ρ dm = 1`, `∫ρΔ dm > 1` and the closed form `αγ + (1−α)γΔ(s)⁻¹`
/// by quadrature at the configured and the doubled resolution.
pub fn b2_density(model: &GroupModel, cfg: &DensityConfig) -> Result<DensityReport> {
    if model.is_unimodular() {
        return Err(Error::Unimodular);
    }
    if *model != GroupModel::AxPlusB {
        return Err(Error::ModelMismatch(format!("density construction is implemented on ax+b, got {model}")));
    }
    if cfg.side == 0 || cfg.resolution == 0 || cfg.test_points < 2 {
        return Err(Error::InvalidScalar("side, resolution and test grid must be positive".into()));
    }
    let bump = Bump::new(cfg.half_width)?;
    let sequence = dense_sequence(cfg.side);
    let seq: Vec<Vec<f64>> = sequence.iter().map(|s| s.to_vec()).collect();
    let b: Vec<f64> = seq.iter().map(|s| 1.0 / model.modular_function_f64(s)).collect();
    let weights = b3_weights(&b)?;
    let a = &weights.a;

    let gamma = weighted_terms(model, bump, &seq, a, |t| model.modular_function_f64(t), cfg.resolution)?;
    let alpha = (0.5 + cfg.margin) / gamma;
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::NoAdmissibleParameter(format!("γ = {gamma} leaves no α in (0, 1) with αγ > 1/2")));
    }
    let shift = (0..cfg.max_shift_steps)
        .map(|k| [2f64.powi(k as i32), 0.0])
        .find(|s| (1.0 - alpha) * gamma / model.modular_function_f64(s) > 0.5)
        .ok_or_else(|| Error::NoAdmissibleParameter(format!("no (2^k, 0) with k < {}", cfg.max_shift_steps)))?;
    let shifted: Vec<Vec<f64>> = seq.iter().map(|g| model.mul_f64(g, &shift)).collect();

    let rho = |t: &[f64]| -> f64 {
        let st = model.mul_f64(&shift, t);
        let r0 = |x: &[f64]| -> f64 { seq.iter().zip(a).map(|(g, an)| an * bump.eval(&mul2(g, x))).sum() };
        alpha * r0(t) + (1.0 - alpha) * r0(&st)
    };
    let n = cfg.test_points;
    let coord = |(lo, hi): (f64, f64), i: usize| lo + (hi - lo) * i as f64 / (n - 1) as f64;
    let min_on_test_grid = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| rho(&[coord(TEST_REGION[0], i), coord(TEST_REGION[1], j)]))
        .fold(f64::INFINITY, f64::min);

    let base = integrals(model, bump, &seq, &shifted, a, alpha, cfg.resolution)?;
    let fine = integrals(model, bump, &seq, &shifted, a, alpha, 2 * cfg.resolution)?;
    let tol = cfg.tolerance;
    if (fine.plain - base.plain).abs() > tol || (fine.delta - base.delta).abs() > tol {
        return Err(Error::ToleranceNotMet(format!(
            "doubling the resolution moved ∫ρ by {:.3e} and ∫ρΔ by {:.3e}",
            (fine.plain - base.plain).abs(),
            (fine.delta - base.delta).abs()
        )));
    }
    let closed_form = alpha * base.gamma + (1.0 - alpha) * base.gamma / model.modular_function_f64(&shift);
    Ok(DensityReport {
        config: cfg.clone(),
        sequence,
        gamma,
        alpha,
        shift,
        min_on_test_grid,
        integral: base.plain,
        integral_delta: base.delta,
        closed_form,
        integral_refined: fine.plain,
        integral_delta_refined: fine.delta,
        positive: min_on_test_grid > 0.0,
        normalized: (base.plain - 1.0).abs() <= tol,
        exceeds_one: base.delta > 1.0,
        closed_form_agrees: (base.delta - closed_form).abs() <= 2.0 * tol,
        weights,
        note: TRUNCATION_NOTE,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModularCheck {
    pub g: [f64; 2],
    /// `∫ f(tg) dm(t)`.
    pub translated: f64,
    /// `Δ(g)⁻¹ ∫ f dm`.
    pub predicted: f64,
    pub relative_error: f64,
}

/// C² bump supported in `[1, 2] × [−1/2, 1/2]`.
fn smooth_bump(x: &[f64]) -> f64 {
    let s = |t: f64| if t.abs() < 1.0 { (1.0 - t * t).powi(3) } else { 0.0 };
    s(2.0 * (x[0] - 1.5)) * s(2.0 * x[1])
}

/// Compares `∫ f(tg) dm(t)` with `Δ(g)⁻¹ ∫ f dm` on `ax+b`, each integral
/// taken by quadrature over a box containing its integrand's support.
pub fn right_translation_check(g: [f64; 2], resolution: usize) -> Result<ModularCheck> {
    let model = GroupModel::AxPlusB;
    if !(g[0] > 0.0) {
        return Err(Error::InvalidPoint(format!("ax+b point needs a > 0, got {}", g[0])));
    }
    let base = haar_quadrature(&model, smooth_bump, &HaarQuadrature::uniform(vec![(1.0, 2.0), (-0.5, 0.5)], resolution))?;
    // t·g = (t_a·g_a, t_a·g_b + t_b) lies in the support exactly when
    // t_a ∈ [1/g_a, 2/g_a] and |t_b + t_a·g_b| ≤ 1/2.
    let (a, b) = (g[0], g[1]);
    let reach = 2.0 * b.abs() / a;
    let region = vec![(1.0 / a, 2.0 / a), (-0.5 - reach, 0.5 + reach)];
    let translated = haar_quadrature(&model, |t| smooth_bump(&mul2(t, &g)), &HaarQuadrature::uniform(region, resolution))?;
    let predicted = base / model.modular_function_f64(&g);
    Ok(ModularCheck {
        g,
        translated,
        predicted,
        relative_error: (translated - predicted).abs() / predicted.abs(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Example3Report {
    pub window: ExactScalar,
    pub delone: DelonePair,
    pub emptiness: EmptinessResult,
    pub certificate: DensityCertificate,
    /// Coefficients of the witness over the monomials `1, a, b`.
    pub witness_coefficients: Option<Vec<ExactScalar>>,
    pub uniformly_discrete: bool,
    pub not_relatively_dense: bool,
    pub refuted_by_a_minus_one: bool,
}

impl Example3Report {
    pub fn passed(&self) -> bool {
        self.uniformly_discrete && self.not_relatively_dense && self.refuted_by_a_minus_one
    }
}

/// `{1} × ℤ` in the `ax+b` group.
pub fn example3_set() -> Result<LatticeSet> {
    LatticeSet::new(GroupModel::AxPlusB, vec![int(1), int(0)], vec![vec![int(0), int(1)]])
}

/// Uniform discreteness, a translate pushing the set off a ball, and the
/// degree-`d` vanishing polynomial of the `(a, b)`-coordinates.
pub fn example3_report(window: i64, search: &TranslateSearch, radius: &ExactScalar, d: usize) -> Result<Example3Report> {
    if window < 2 {
        return Err(Error::InvalidScalar("window must be at least 2".into()));
    }
    let model = GroupModel::AxPlusB;
    let set = PointSet::Lattice(example3_set()?);
    let w = Window::from_rationals(&[(rat(1, 2), rat(3, 2)), (int(-window), int(window))])?;
    let delone = delone_parameters(&set, &w, &DeloneConfig::default())?;
    let emptiness = emptiness_witness(&set, radius, search)?;
    let points: Vec<Coords> = set.sample(&w)?;
    let certificate = density_certificate(&points, d, Some(variable_names(Some(&model), 2)))?;
    let witness_coefficients = certificate.witness().map(|p| p.coefficients.clone());
    let one = ExactScalar::one();
    // Proportional to a − 1 over the monomials 1, a, b (and nothing else).
    let refuted_by_a_minus_one = witness_coefficients.as_ref().is_some_and(|c| {
        c.len() >= 3
            && !c[0].is_zero()
            && c[1] == c[0].neg()
            && c[2..].iter().all(ExactScalar::is_zero)
    });
    Ok(Example3Report {
        window: ExactScalar::from(window),
        uniformly_discrete: delone.packing == Some(one),
        not_relatively_dense: emptiness.witness.is_some(),
        refuted_by_a_minus_one,
        delone,
        emptiness,
        certificate,
        witness_coefficients,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn zero_b_gives_geometric_weights() {
        let w = b3_weights(&[0.0; 5]).unwrap();
        for (i, a) in w.a.iter().enumerate() {
            let want = 0.5f64.powi(i as i32 + 1) / (1.0 - 0.5f64.powi(5));
            assert!((a - want).abs() < 1e-15);
        }
        assert_eq!(w.sum_ab, 0.0);
    }

    #[test]
    fn linear_b_sum_matches_partial_sums() {
        let b: Vec<f64> = (1..=40).map(|n| n as f64).collect();
        let w = b3_weights(&b).unwrap();
        let raw: Vec<f64> = (1..=40).map(|n| 0.5f64.powi(n) / (1.0 + n as f64)).collect();
        let total: f64 = raw.iter().sum();
        let want: f64 = raw.iter().zip(&b).map(|(r, x)| r * x).sum::<f64>() / total;
        assert!((w.sum_ab - want).abs() < 1e-12);
        assert!(w.sum_ab <= w.c);
    }

    #[test]
    fn rejects_negative_b() {
        assert!(b3_weights(&[1.0, -1.0]).is_err());
        assert!(b3_weights(&[]).is_err());
    }

    proptest! {
        #[test]
        fn weights_are_normalized(b in prop::collection::vec(0.0f64..1e9, 1..80)) {
            let w = b3_weights(&b).unwrap();
            prop_assert!((w.sum_a - 1.0).abs() <= 1e-12);
            prop_assert!(w.a.iter().all(|&a| a > 0.0));
            prop_assert!(w.sum_ab <= w.c * (1.0 + 1e-12));
        }
    }

    #[test]
    fn tent_normalization_by_quadrature() {
        let bump = Bump::new(0.25).unwrap();
        let m = GroupModel::AxPlusB;
        let q = HaarQuadrature::uniform(bump.support(&[1.0, 0.0]), 512);
        let v = haar_quadrature(&m, |t| bump.eval(t), &q).unwrap();
        assert!((v - 1.0).abs() < 1e-6, "{v}");
    }

    #[test]
    fn density_on_ax_plus_b() {
        let r = b2_density(&GroupModel::AxPlusB, &DensityConfig::default()).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(r.alpha > 0.0 && r.alpha < 1.0);
        assert!(r.alpha * r.gamma > 0.5);
        assert!((1.0 - r.alpha) * r.gamma * r.shift[0] > 0.5);
        assert!(r.integral_delta >= 1.01);
        assert_eq!(r.sequence.len(), 64);
    }

    #[test]
    fn unimodular_models_are_rejected() {
        let m = GroupModel::rn(2, crate::exactnum::ScalarDomain::Rational);
        assert!(matches!(b2_density(&m, &DensityConfig::default()), Err(Error::Unimodular)));
    }

    #[test]
    fn coarse_quadrature_is_reported() {
        let cfg = DensityConfig {
            resolution: 2,
            ..DensityConfig::default()
        };
        assert!(matches!(b2_density(&GroupModel::AxPlusB, &cfg), Err(Error::ToleranceNotMet(_))));
    }

    #[test]
    fn right_translation_scales_by_inverse_modular_function() {
        for g in [[0.5, 0.0], [2.0, 0.25], [1.5, -1.0], [0.75, 0.5], [3.0, 2.0]] {
            let c = right_translation_check(g, 400).unwrap();
            assert!(c.relative_error < 1e-4, "{c:?}");
        }
    }

    #[test]
    fn vertical_line_in_ax_plus_b() {
        let search = TranslateSearch::Powers {
            base: vec![ExactScalar::from(2), ExactScalar::from(0)],
            steps: 16,
        };
        let r = example3_report(10, &search, &ExactScalar::from(2), 1).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.certificate.witness().unwrap().text, "(1) + (-1)*a");
        assert_eq!(r.delone.packing, Some(ExactScalar::one()));
        assert_eq!(r.emptiness.witness, Some(vec![ExactScalar::from(4), ExactScalar::from(0)]));
    }
}
