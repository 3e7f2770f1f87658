use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Display;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{Options, Scenario};
use crate::charp::{finite_subset_certificate, is_solution, rosenlicht_growth, rosenlicht_solve};
use crate::error::{Error, Result};
use crate::exactnum::{int, rat, rational_to_f64, ExactScalar, Rational, ScalarDomain};
use crate::groupmodels::{Coords, GroupModel};
use crate::hull::{
    cf_distance, cf_limit_check, emptiness_witness, hull_sample, quasi_monotone_check, subgroup_hull_check, CfConfig,
    SubgroupSpec, TranslateSearch,
};
use crate::pointsets::{
    approx_subgroup_certificate, coset_split, delone_parameters, modelset_product, to_rationals, union_density_locator,
    write_patch, CertConfig, DeloneConfig, FinitePatch, LatticeSet, ModelSet, ModelSetOp, PointSet, PointSetFile, Window,
};
use crate::unimod::{b2_density, example3_report, right_translation_check, DensityConfig};
use crate::zariski::{coset_cover_verifier, density_certificate, vanishing_basis, DENSITY_CAVEAT};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Everything a scenario produced. `scale` records the windows, degrees
/// and precisions behind every verdict.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub scenario: &'static str,
    pub passed: bool,
    pub scale: BTreeMap<&'static str, String>,
    pub checks: Vec<Check>,
    pub caveats: Vec<String>,
    pub details: BTreeMap<&'static str, serde_json::Value>,
    #[serde(skip)]
    pub csv: Option<String>,
    /// Extra output files, by name.
    #[serde(skip)]
    pub files: Vec<(String, String)>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn checks_csv(&self) -> String {
        let mut out = String::from("check,passed,detail\n");
        for c in &self.checks {
            out.push_str(&format!("{},{},\"{}\"\n", c.name, c.passed, c.detail.replace('"', "\"\"")));
        }
        out
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

struct Builder(Report);

impl Builder {
    fn scale(&mut self, key: &'static str, v: impl Display) {
        self.0.scale.insert(key, v.to_string());
    }

    fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.0.checks.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    fn detail<T: Serialize>(&mut self, key: &'static str, v: &T) {
        let v = serde_json::to_value(v).unwrap_or(serde_json::Value::Null);
        self.0.details.insert(key, v);
    }

    fn caveat(&mut self, c: &str) {
        if !self.0.caveats.iter().any(|x| x == c) {
            self.0.caveats.push(c.into());
        }
    }
}

pub fn run_scenario(s: Scenario, opts: &Options) -> Report {
    let mut b = Builder(Report {
        scenario: s.name(),
        passed: false,
        scale: BTreeMap::new(),
        checks: Vec::new(),
        caveats: Vec::new(),
        details: BTreeMap::new(),
        csv: None,
        files: Vec::new(),
    });
    let r = match s {
        Scenario::Meyer => meyer(opts, &mut b),
        Scenario::Thin => thin(opts, &mut b),
        Scenario::Example3 => example3(opts, &mut b),
        Scenario::Rosenlicht => rosenlicht(opts, &mut b),
        Scenario::BorelShape => borel_shape(opts, &mut b),
        Scenario::Unimod => unimod(opts, &mut b),
        Scenario::HullSuite => hull_suite(opts, &mut b),
        Scenario::Zariski => zariski(opts, &mut b),
    };
    if let Err(e) = r {
        b.check("error", false, e.to_string());
    }
    let mut report = b.0;
    report.passed = !report.checks.is_empty() && report.checks.iter().all(|c| c.passed);
    report
}

fn pt(v: &[i64]) -> Coords {
    v.iter().map(|&x| ExactScalar::from(x)).collect()
}

fn fmt_points(v: &[Coords]) -> String {
    let s: Vec<String> = v.iter().map(|p| crate::pointsets::fmt_point(p)).collect();
    format!("[{}]", s.join(", "))
}

fn line() -> GroupModel {
    GroupModel::rn(1, ScalarDomain::Rational)
}

fn plane() -> GroupModel {
    GroupModel::rn(2, ScalarDomain::Rational)
}

fn meyer(o: &Options, b: &mut Builder) -> Result<()> {
    let d = o.d.unwrap_or(2);
    let w = o.window.unwrap_or(20);
    let deg = o.degree.unwrap_or(2);
    b.scale("d", d);
    b.scale("window", w);
    b.scale("degree", deg);
    b.scale("internal_window", "[-1,1]");
    let l = ModelSet::symmetric(d, int(1))?;
    let set = PointSet::Model(l.clone());
    let bx = Window::cube(2, int(w))?;
    let sym = set.check_symmetric_with_identity(&bx);
    b.check("symmetric-with-identity", sym.is_ok(), sym.err().map_or("ok".into(), |e| e.to_string()));

    let cert = approx_subgroup_certificate(&set, &CertConfig::new(12, 3))?;
    b.check(
        "product-cover",
        cert.reverified == cert.product_points && cert.cube_points_checked > 0,
        format!("|F| = {}, F = {}, {} products re-verified", cert.witness.len(), fmt_points(&cert.witness.points), cert.reverified),
    );
    b.detail("certificate", &cert);

    let (sum, checks) = modelset_product(&l, &l, ModelSetOp::Product, &ExactScalar::from(w.min(12)))?;
    let two = crate::pointsets::Interval::symmetric(int(2))?;
    b.check(
        "window-arithmetic",
        sum.window() == &two && checks.iter().all(|c| c.products_checked > 0),
        format!("Λ·Λ has window {}; {:?}", sum.window(), checks.iter().map(|c| c.products_checked).collect::<Vec<_>>()),
    );

    let phys = l.points_in_physical(&ExactScalar::from(w))?;
    let m1 = GroupModel::rn(1, ScalarDomain::Quadratic(d));
    let proj = FinitePatch::collect(m1, phys.iter().map(|p| vec![p[0].clone()]), Window::cube(1, int(w))?, true)?;
    let cfg = DeloneConfig::default().cap(ExactScalar::from(4));
    let dp = delone_parameters(&PointSet::Patch(proj), &Window::cube(1, int(w))?, &cfg)?;
    b.check(
        "projection-delone",
        dp.packing.as_ref().is_some_and(|r| r > &ExactScalar::zero()) && dp.covering.is_finite(),
        format!(
            "packing {}, covering {}",
            dp.packing.as_ref().map_or("-".into(), |r| r.to_string()),
            dp.covering.radius().map_or("∞".into(), |r| r.to_string())
        ),
    );
    b.detail("projection", &dp);

    let pts = l.points_in_index_window(w);
    let c = density_certificate(&pts, deg, None)?;
    if c.is_granted() {
        b.caveat(DENSITY_CAVEAT);
    }
    b.check("zariski-dense", c.is_granted(), format!("degree {deg} on {} points: {:?}", pts.len(), c.verdict));

    let mut csv = String::from("x,y\n");
    for p in &phys {
        csv.push_str(&format!("{},{}\n", p[0].to_f64(), p[1].to_f64()));
    }
    b.0.csv = Some(csv);
    let patch = set.patch(&Window::Box(vec![crate::pointsets::Interval::symmetric(int(w))?, crate::pointsets::Interval::symmetric(int(1))?]))?;
    b.0.files.push(("meyer.pts".into(), write_patch(&patch)));
    Ok(())
}

fn thin(o: &Options, b: &mut Builder) -> Result<()> {
    let bx = o.window.unwrap_or(50);
    let deg = o.degree.unwrap_or(3);
    let index = 30;
    b.scale("box", bx);
    b.scale("index_window", index);
    b.scale("degree", deg);
    b.scale("emptiness_radius", 5);
    let l = ModelSet::symmetric(2, int(1))?;
    let set = PointSet::Model(l.clone());
    let sym = set.check_symmetric_with_identity(&Window::cube(2, int(bx))?);
    b.check("symmetric-with-identity", sym.is_ok(), sym.err().map_or("ok".into(), |e| e.to_string()));
    let big = l.points_in(&Window::cube(2, int(bx))?)?.len();
    let half = l.points_in(&Window::cube(2, int(bx / 2))?)?.len();
    b.check("infinite", big > half && half >= 10, format!("|Λ ∩ box({bx})| = {big}, |Λ ∩ box({})| = {half}", bx / 2));

    let cert = approx_subgroup_certificate(&set, &CertConfig::new(12, 3))?;
    b.check(
        "approximate-subgroup",
        cert.witness.len() <= 3 && cert.reverified == cert.product_points,
        format!("|F| = {}, F = {}, {} products re-verified", cert.witness.len(), fmt_points(&cert.witness.points), cert.reverified),
    );
    b.detail("certificate", &cert);

    let search = TranslateSearch::Powers {
        base: pt(&[0, 1]),
        steps: 64,
    };
    let e = emptiness_witness(&set, &ExactScalar::from(5), &search)?;
    let ok = e.witness.as_ref().is_some_and(|g| g[0].is_zero());
    b.check(
        "not-relatively-dense",
        ok,
        e.witness.as_ref().map_or("no translate found".into(), |g| format!("g = {} empties B(0, 5)", crate::pointsets::fmt_point(g))),
    );
    b.detail("emptiness", &e);

    let pts = l.points_in_index_window(index);
    for d in 1..=deg {
        let c = density_certificate(&pts, d, None)?;
        if c.is_granted() {
            b.caveat(DENSITY_CAVEAT);
        }
        b.check(&format!("zariski-dense-{d}"), c.is_granted(), format!("{} points over {}: {:?}", pts.len(), c.field, c.verdict));
    }
    // Λ ⊂ Λ², so density passes to the product set.
    let sq = ModelSet::symmetric(2, int(2))?.points_in_index_window(index);
    let c = density_certificate(&sq, deg, None)?;
    b.check("zariski-dense-square", c.is_granted(), format!("{} points of Λ²", sq.len()));

    let ts: Vec<Coords> = (0..12).map(|k| pt(&[0, k])).collect();
    b.0.csv = Some(hull_sample(&set, &ts, &Window::cube(2, int(8))?)?.to_csv());
    Ok(())
}

fn example3(o: &Options, b: &mut Builder) -> Result<()> {
    let w = o.window.unwrap_or(10);
    let deg = o.degree.unwrap_or(1);
    b.scale("window", w);
    b.scale("degree", deg);
    b.scale("emptiness_radius", 2);
    let search = TranslateSearch::Grid {
        radius: int(8),
        step: rat(1, 2),
    };
    b.scale("translate_grid", &search);
    let r = example3_report(w, &search, &ExactScalar::from(2), deg)?;
    b.check(
        "packing-radius-one",
        r.uniformly_discrete,
        format!("packing {}", r.delone.packing.as_ref().map_or("-".into(), |x| x.to_string())),
    );
    b.check(
        "not-relatively-dense",
        r.not_relatively_dense,
        r.emptiness.witness.as_ref().map_or("no translate found".into(), |g| format!("g = {}", crate::pointsets::fmt_point(g))),
    );
    b.check(
        "refuted-by-a-minus-one",
        r.refuted_by_a_minus_one,
        r.certificate.witness().map_or(format!("{:?}", r.certificate.verdict), |p| p.text.clone()),
    );
    b.detail("report", &r);
    Ok(())
}

fn rosenlicht(o: &Options, b: &mut Builder) -> Result<()> {
    let p = o.p.unwrap_or(2);
    let n = o.n.unwrap_or(8);
    let v = o.laurent.unwrap_or(3);
    let oracle_limit = 1u64 << 20;
    b.scale("p", p);
    b.scale("N", n);
    b.scale("laurent_bound", v);
    b.scale("oracle_limit", oracle_limit);
    let precisions: Vec<usize> = (1..=n).collect();
    let g = rosenlicht_growth(p, &precisions, v, oracle_limit)?;
    let run: Vec<usize> = g.rows.iter().filter(|r| r.oracle_agrees.is_some()).map(|r| r.precision).collect();
    let agree = g.rows.iter().all(|r| r.oracle_agrees != Some(false));
    b.check("oracle-equality", agree && !run.is_empty(), format!("enumeration run for N in {run:?}"));
    let dims: Vec<usize> = g.rows.iter().map(|r| r.dimension).collect();
    let inc = g.rows.iter().filter(|r| r.precision >= 2).collect::<Vec<_>>().windows(2).all(|w| w[0].dimension < w[1].dimension);
    b.check("dimension-increasing", inc, format!("dimensions {dims:?}"));

    let space = rosenlicht_solve(p, n)?;
    let mut pairs = 0;
    let mut closed = true;
    for u in &space.basis {
        for w in &space.basis {
            let x = u.x.try_add(&w.x)?;
            let y = u.y.try_add(&w.y)?;
            closed &= is_solution(&x, &y)? && is_solution(&x.neg(), &y.neg())?;
            pairs += 1;
        }
    }
    b.check("closed-under-addition", closed, format!("{pairs} basis pairs at N = {n}"));

    let found: Vec<String> = g.laurent.solutions.iter().map(|s| format!("({}, {})", s.x.terms(), s.y.terms())).collect();
    b.check(
        "no-laurent-solutions",
        g.laurent.none_found(),
        if found.is_empty() {
            format!("{} principal parts with valuation in [-{v}, -1] examined", g.laurent.examined)
        } else {
            format!("{} of {} principal parts solve the equation, e.g. {}", found.len(), g.laurent.examined, found[0])
        },
    );
    let fs = finite_subset_certificate(&space)?;
    b.check("finite-subset-approximate-subgroup", fs.covered == fs.certificate.product_points, format!("|S| = {}", fs.size));
    b.detail("growth", &g);
    b.detail("basis", &space.basis);
    let mut csv = String::from("N,dimension,oracle\n");
    for r in &g.rows {
        let o = r.oracle_agrees.map_or("skipped".to_string(), |x| x.to_string());
        csv.push_str(&format!("{},{},{o}\n", r.precision, r.dimension));
    }
    b.0.csv = Some(csv);
    Ok(())
}

fn two_rows(w: i64) -> Result<FinitePatch> {
    let pts: Vec<Coords> = (-w..=w).flat_map(|x| [pt(&[x, 0]), pt(&[x, 1])]).collect();
    FinitePatch::new(plane(), pts, Window::Box(vec![crate::pointsets::Interval::symmetric(int(w))?, crate::pointsets::Interval::symmetric(int(2))?]), true)
}

fn borel_shape(o: &Options, b: &mut Builder) -> Result<()> {
    let w = o.window.unwrap_or(10);
    let deg = o.degree.unwrap_or(3);
    b.scale("window", w);
    b.scale("degree", deg);
    let lambda = two_rows(w)?;
    let c = coset_cover_verifier(&lambda, deg)?;
    b.check("h-is-horizontal", c.h_basis == vec![pt(&[1, 0])], format!("H spanned by {}", fmt_points(&c.h_basis)));
    b.check("two-cosets", c.f.len() == 2, format!("F = {}", fmt_points(&c.f)));
    b.check("g-plus-h-inside", c.h_sample_checked > 0, format!("{} points of g + H checked", c.h_sample_checked));
    b.check("covered-by-f-plus-h", c.points_checked == lambda.len(), format!("{} of {} points checked", c.points_checked, lambda.len()));
    let h: Vec<Vec<Rational>> = c.h_basis.iter().filter_map(|v| to_rationals(v)).collect();
    let split = coset_split(&lambda, &h, &c.f, &ExactScalar::from(w / 2), &DeloneConfig::default().cap(2))?;
    b.check(
        "cosets-relatively-dense",
        split.cosets.iter().all(|s| s.relatively_dense_in_h),
        format!("{} cosets", split.cosets.len()),
    );
    b.detail("cover", &c);
    b.detail("cosets", &split);
    let mut csv = String::from("x,y,coset\n");
    for p in lambda.sorted_points() {
        let i = c.f.iter().position(|r| r[1] == p[1]).map_or(-1, |i| i as i64);
        csv.push_str(&format!("{},{},{i}\n", p[0], p[1]));
    }
    b.0.csv = Some(csv);
    Ok(())
}

fn unimod(o: &Options, b: &mut Builder) -> Result<()> {
    let defaults = DensityConfig::default();
    let cfg = DensityConfig {
        tolerance: o.tolerance.unwrap_or(defaults.tolerance),
        resolution: o.resolution.unwrap_or(defaults.resolution),
        ..defaults
    };
    b.scale("resolution", cfg.resolution);
    b.scale("tolerance", cfg.tolerance);
    b.scale("sequence", format!("{0}x{0}", cfg.side));
    b.scale("test_region", "[0.75,1.5]x[-0.5,0.5]");
    let r = b2_density(&GroupModel::AxPlusB, &cfg)?;
    b.check("positive", r.positive, format!("min on test grid {:e}", r.min_on_test_grid));
    b.check("normalized", r.normalized, format!("∫ρ dm = {:.12}", r.integral));
    b.check(
        "modular-mass-exceeds-one",
        r.exceeds_one && r.integral_delta >= 1.0 + 0.01,
        format!("∫ρΔ dm = {:.9}", r.integral_delta),
    );
    b.check(
        "closed-form",
        r.closed_form_agrees,
        format!("αγ + (1−α)γΔ(s)⁻¹ = {:.9} with γ = {:.9}, α = {:.9}, s = ({}, 0)", r.closed_form, r.gamma, r.alpha, r.shift[0]),
    );
    b.caveat(r.note);
    let gs = [[0.5, 0.0], [2.0, 0.25], [1.5, -1.0], [0.75, 0.5], [3.0, 2.0]];
    let mods = gs.iter().map(|g| right_translation_check(*g, 400)).collect::<Result<Vec<_>>>()?;
    let worst = mods.iter().map(|m| m.relative_error).fold(0.0, f64::max);
    b.check("right-translation", worst < 1e-4, format!("worst relative error {worst:e} over {} translates", mods.len()));
    let m = GroupModel::AxPlusB;
    let exact: Vec<Coords> = vec![
        vec![ExactScalar::Rat(rat(1, 2)), ExactScalar::from(3)],
        vec![ExactScalar::from(3), ExactScalar::Rat(rat(-2, 7))],
        vec![ExactScalar::Rat(rat(5, 4)), ExactScalar::from(0)],
    ];
    let mut hom = true;
    for g in &exact {
        for h in &exact {
            let lhs = m.modular_function(&m.mul(g, h)?)?;
            let rhs = m.modular_function(g)?.try_mul(&m.modular_function(h)?)?;
            hom &= lhs == rhs;
        }
    }
    b.check("modular-homomorphism", hom, format!("{} exact pairs", exact.len() * exact.len()));
    b.detail("density", &r);
    b.detail("right_translation", &mods);
    let mut csv = String::from("n,a,b,weight\n");
    for (i, (s, w)) in r.sequence.iter().zip(&r.weights.a).enumerate() {
        csv.push_str(&format!("{},{},{},{}\n", i + 1, s[0], s[1], w));
    }
    b.0.csv = Some(csv);
    Ok(())
}

fn lattice_patch(m: &GroupModel, offset: Vec<Rational>, gens: Vec<Vec<Rational>>, w: &Window) -> Result<FinitePatch> {
    PointSet::Lattice(LatticeSet::new(*m, offset, gens)?).patch(w)
}

/// Points `i + r/8` (`r ∈ 0..4`, each kept with probability 3/4) on
/// `[−w−1, w+1]`; the patch and its translate by `t` are both complete on
/// `[−w, w]`.
fn random_pair(rng: &mut ChaCha8Rng, w: i64, t: &Rational) -> Result<(FinitePatch, FinitePatch)> {
    let base: Vec<Rational> = (-w - 1..=w + 1)
        .filter_map(|i| rng.gen_bool(0.75).then(|| int(i) + rat(rng.gen_range(0..4), 8)))
        .collect();
    let win = Window::cube(1, int(w))?;
    let p = FinitePatch::collect(line(), base.iter().map(|x| vec![ExactScalar::Rat(x.clone())]), win.clone(), true)?;
    let q = FinitePatch::collect(line(), base.iter().map(|x| vec![ExactScalar::Rat(x + t)]), win, true)?;
    Ok((p, q))
}

fn hull_suite(o: &Options, b: &mut Builder) -> Result<()> {
    let seed = o.seed.unwrap_or(7);
    let w = o.window.unwrap_or(80);
    let cfg = CfConfig::default();
    b.scale("seed", seed);
    b.scale("window", w);
    b.scale("eps_grid", format!("k/64, min {}", cfg.min_eps()));
    let mut csv = String::from("case,value\n");

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut zero, mut sym) = (true, true);
    let mut decided = 0;
    for _ in 0..100 {
        let t = rat(rng.gen_range(0..=16), 64);
        let (p, q) = random_pair(&mut rng, w, &t)?;
        zero &= cf_distance(&p, &p, &cfg)? == int(0);
        let (a, c) = (cf_distance(&p, &q, &cfg), cf_distance(&q, &p, &cfg));
        match (&a, &c) {
            (Ok(x), Ok(y)) => {
                sym &= x == y;
                decided += 1;
            }
            (Err(_), Err(_)) => {}
            _ => sym = false,
        }
    }
    b.check("self-distance-zero", zero, "100 random patches");
    b.check("symmetric", sym, format!("100 random pairs, {decided} decided"));

    let r1 = line();
    let win = Window::cube(1, int(100))?;
    let z = lattice_patch(&r1, vec![int(0)], vec![vec![int(1)]], &win)?;
    let zq = lattice_patch(&r1, vec![rat(1, 4)], vec![vec![int(1)]], &win)?;
    let d = rational_to_f64(&cf_distance(&z, &zq, &cfg)?);
    b.check("quarter-shift", (d - 0.25).abs() <= 1e-9, format!("cf(Z, Z + 1/4) = {d}"));
    csv.push_str(&format!("quarter-shift,{d}\n"));

    let lw = Window::cube(1, int(40))?;
    let seq: Vec<FinitePatch> = (1..=64)
        .map(|k| {
            let a = lattice_patch(&r1, vec![rat(1, k)], vec![vec![int(1)]], &lw)?;
            let c = lattice_patch(&r1, vec![rat(1, 2) + rat(1, k)], vec![vec![int(3)]], &lw)?;
            a.union(&c)
        })
        .collect::<Result<_>>()?;
    let limit = lattice_patch(&r1, vec![int(0)], vec![vec![int(1)]], &lw)?.union(&lattice_patch(&r1, vec![rat(1, 2)], vec![vec![int(3)]], &lw)?)?;
    let rep = cf_limit_check(&seq, &limit, &cfg)?;
    b.check("union-continuity", rep.passed(), format!("(Z + 1/k) ∪ (3Z + 1/2 + 1/k) → Z ∪ (3Z + 1/2): {:?}", rep.failure));

    let qw = Window::cube(1, int(20))?;
    let lat = |k: i64| PointSet::Lattice(LatticeSet::new(r1, vec![int(0)], vec![vec![int(k)]]).expect("lattice"));
    let ts: Vec<Coords> = (-8..=8).map(|k| vec![ExactScalar::Rat(rat(k, 2))]).collect();
    let f0 = vec![pt(&[0])];
    let qm = quasi_monotone_check(&lat(2), &lat(1), &f0, &ts, &qw)?;
    b.check("quasi-monotone-pass", qm.passed, format!("(2Z, Z, {{0}}) on {} translates", ts.len()));
    let fail = quasi_monotone_check(&lat(1), &lat(2), &f0, &ts, &qw);
    let witness = match &fail {
        Err(Error::BaseInclusionFails(x)) => Some(x.clone()),
        _ => None,
    };
    b.check(
        "quasi-monotone-fail",
        witness.as_deref() == Some("(1)"),
        format!("(Z, 2Z, {{0}}): {}", witness.unwrap_or_else(|| format!("{:?}", fail.map(|r| r.passed)))),
    );

    let ts1: Vec<Coords> = (-8..=8).map(|k| vec![ExactScalar::Rat(rat(k, 3))]).collect();
    let ts2: Vec<Coords> = (0..10).map(|k| vec![ExactScalar::Rat(rat(1, 2)), ExactScalar::Rat(rat(k, 2))]).collect();
    let cases = [
        ("Z in R", SubgroupSpec::lattice(vec![vec![int(1)]]), ts1, Window::cube(1, int(5))?),
        ("Z x 0 in R2", SubgroupSpec::lattice(vec![vec![int(1), int(0)]]), ts2.clone(), Window::cube(2, int(4))?),
        ("R x 0 in R2", SubgroupSpec::subspace(vec![vec![int(1), int(0)]]), ts2, Window::cube(2, int(4))?),
    ];
    for (name, spec, ts, win) in &cases {
        let r = subgroup_hull_check(spec, ts, win)?;
        b.check(&format!("subgroup-hull {name}"), r.passed, format!("{} translates, {} empty", r.translates.len(), r.empty));
    }

    let lw = Window::cube(1, int(512))?;
    let lcfg = DeloneConfig::with_delta(rat(1, 2));
    let mut pow2 = Vec::new();
    let mut k = 1;
    while k <= 512 {
        pow2.push(pt(&[k]));
        pow2.push(pt(&[-k]));
        k *= 2;
    }
    let sparse = PointSet::Patch(FinitePatch::collect(r1, pow2, lw.clone(), true)?);
    let mult = |k: i64| -> Result<PointSet> { Ok(PointSet::Patch(lattice_patch(&r1, vec![int(0)], vec![vec![int(k)]], &lw)?)) };
    let a = union_density_locator(&[sparse.clone(), mult(3)?], &lw, &lcfg)?;
    let c = union_density_locator(&[mult(2)?, sparse], &lw, &lcfg)?;
    b.check("locator-second", a.index == 2, format!("(powers of 2, 3Z) → {}", a.index));
    b.check("locator-first", c.index == 1, format!("(2Z, powers of 2) → {}", c.index));
    b.detail("locator", &[&a, &c]);
    b.0.csv = Some(csv);
    Ok(())
}

fn random_points(rng: &mut ChaCha8Rng, count: usize) -> Vec<Coords> {
    let mut set = BTreeSet::new();
    while set.len() < count {
        let c = |rng: &mut ChaCha8Rng| ExactScalar::Rat(rat(rng.gen_range(-6..=6), rng.gen_range(1..=4)));
        set.insert(vec![c(rng), c(rng)]);
    }
    set.into_iter().collect()
}

/// `h(d)` is nondecreasing, at most `min(|P|, C(n+d, d))`, and reaches `|P|` by `d = |P| − 1`; every
/// basis polynomial vanishes on every point.
fn hilbert_profile(pts: &[Coords], max_d: usize) -> Result<(Vec<usize>, bool, bool)> {
    let mut hs = Vec::new();
    let mut vanish = true;
    let mut bounded = true;
    for d in 0..=max_d {
        let vb = vanishing_basis(pts, d, None)?;
        for poly in &vb.basis {
            for p in pts {
                vanish &= poly.eval(p)?.is_zero();
            }
        }
        bounded &= vb.hilbert <= pts.len().min(vb.monomials.len());
        hs.push(vb.hilbert);
    }
    let mono = hs.windows(2).all(|w| w[0] <= w[1]);
    let full = hs.iter().enumerate().all(|(d, &h)| d + 1 < pts.len() || h == pts.len());
    Ok((hs, mono && full && bounded, vanish))
}

fn zariski(o: &Options, b: &mut Builder) -> Result<()> {
    if let Some(path) = &o.input {
        let deg = o.degree.unwrap_or(3);
        let w = o.window.unwrap_or(20);
        b.scale("input", path.display());
        b.scale("degree", deg);
        let pts = match PointSetFile::read(path)? {
            PointSetFile::Patch(p) => p.sorted_points(),
            PointSetFile::Model(m) => {
                b.scale("index_window", w);
                m.points_in_index_window(w)
            }
        };
        let (hs, shape, vanish) = hilbert_profile(&pts, deg)?;
        b.check("hilbert-profile", shape, format!("h = {hs:?}"));
        b.check("basis-vanishes", vanish, format!("{} points", pts.len()));
        let c = density_certificate(&pts, deg, None)?;
        if c.is_granted() {
            b.caveat(DENSITY_CAVEAT);
        }
        b.detail("certificate", &c);
        return Ok(());
    }
    let seed = o.seed.unwrap_or(11);
    let sets = 50;
    b.scale("seed", seed);
    b.scale("sets", sets);
    b.scale("max_points", 12);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut shape, mut vanish, mut monotone) = (true, true, true);
    let mut granted = 0;
    let mut csv = String::from("set,size,degree,hilbert\n");
    for i in 0..sets {
        let n = rng.gen_range(1..=12);
        let pts = random_points(&mut rng, n);
        let (hs, s, v) = hilbert_profile(&pts, n)?;
        shape &= s;
        vanish &= v;
        for (d, h) in hs.iter().enumerate() {
            csv.push_str(&format!("{i},{n},{d},{h}\n"));
        }
        let mut more = pts.clone();
        let extra = loop {
            let q = random_points(&mut rng, 1).remove(0);
            if !pts.contains(&q) {
                break q;
            }
        };
        more.push(extra);
        for d in 0..=3 {
            if density_certificate(&pts, d, None)?.is_granted() {
                granted += 1;
                monotone &= density_certificate(&more, d, None)?.is_granted();
            }
        }
    }
    b.check("hilbert-profile", shape, format!("{sets} random sets: h nondecreasing and bounded, h(d) = |P| for d ≥ |P| − 1"));
    b.check("basis-vanishes", vanish, "every basis polynomial re-evaluated on every point");
    b.check("granted-monotone", monotone, format!("{granted} granted certificates stayed granted after adding a point"));
    if granted > 0 {
        b.caveat(DENSITY_CAVEAT);
    }
    b.0.csv = Some(csv);
    Ok(())
}
