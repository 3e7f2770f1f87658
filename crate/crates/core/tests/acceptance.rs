//! One PASS/FAIL line per acceptance criterion, with the tolerances and
//! runtime limits pinned here. Runs without the test harness so the lines
//! always reach the output, and sequentially so the timings are not
//! distorted by other acceptance work on the same cores.

use std::time::{Duration, Instant};

use approxlat::cli::{run_scenario, Options, Report, Scenario};
use approxlat::exactnum::{int, rat, ExactScalar, ScalarDomain};
use approxlat::groupmodels::{Coords, GroupModel};
use approxlat::pointsets::{union_density_locator, Covering, DeloneConfig, FinitePatch, LatticeSet, PointSet, Window};
use approxlat::unimod::{b2_density, right_translation_check, DensityConfig};

const INTEGRAL_TOL: f64 = 1e-6;
const MODULAR_REL_TOL: f64 = 1e-4;
const CF_TOL: f64 = 1e-9;

struct Outcome {
    id: u32,
    name: &'static str,
    passed: bool,
    elapsed: Duration,
    limit: Duration,
    detail: String,
    /// A failure recorded as expected: the criterion is unattainable as
    /// stated and the implementation reports that faithfully.
    documented: bool,
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed())
}

fn scenario(s: Scenario) -> (Report, Duration) {
    timed(|| run_scenario(s, &Options::default()))
}

fn check(r: &Report, name: &str) -> bool {
    r.check(name).is_some_and(|c| c.passed)
}

fn failed_checks(r: &Report) -> String {
    let f: Vec<String> = r.checks.iter().filter(|c| !c.passed).map(|c| format!("{}: {}", c.name, c.detail)).collect();
    if f.is_empty() {
        format!("{} checks", r.checks.len())
    } else {
        f.join("; ")
    }
}

fn thin() -> Outcome {
    let (r, elapsed) = scenario(Scenario::Thin);
    let witness_vertical = r.check("not-relatively-dense").is_some_and(|c| c.detail.starts_with("g = (0, "));
    let exact_field = (1..=3).all(|d| r.check(&format!("zariski-dense-{d}")).is_some_and(|c| c.detail.contains("sqrt(2)")));
    let passed = ["symmetric-with-identity", "infinite", "approximate-subgroup", "not-relatively-dense"]
        .iter()
        .all(|c| check(&r, c))
        && (1..=3).all(|d| check(&r, &format!("zariski-dense-{d}")))
        && witness_vertical
        && exact_field
        && r.scale.get("index_window").map(String::as_str) == Some("30");
    Outcome {
        id: 1,
        name: "thin",
        passed,
        elapsed,
        limit: Duration::from_secs(60),
        detail: failed_checks(&r),
        documented: false,
    }
}

fn example3() -> Outcome {
    let (r, elapsed) = scenario(Scenario::Example3);
    Outcome {
        id: 2,
        name: "example3",
        passed: r.passed && r.scale.contains_key("translate_grid"),
        elapsed,
        limit: Duration::from_secs(10),
        detail: failed_checks(&r),
        documented: false,
    }
}

/// Every sub-check but the Laurent one must pass. The Laurent one fails
/// for p = 2: `x = t⁻¹, y = 0` solves `y² = t·x² − x` exactly, so the
/// expected outcome is a FAIL naming that solution.
fn rosenlicht() -> Outcome {
    let (r, elapsed) = scenario(Scenario::Rosenlicht);
    let rows = r.details["growth"]["rows"].as_array().cloned().unwrap_or_default();
    let oracle_everywhere =
        rows.len() == 8 && rows.iter().all(|row| row["oracle_agrees"] == serde_json::Value::Bool(true));
    let rest = ["oracle-equality", "dimension-increasing", "closed-under-addition", "finite-subset-approximate-subgroup"]
        .iter()
        .all(|c| check(&r, c))
        && oracle_everywhere;
    let laurent = r.check("no-laurent-solutions").expect("laurent check present");
    let counterexample = !laurent.passed && laurent.detail.contains("(t^-1 + O(t^8), O(t^8))");
    Outcome {
        id: 3,
        name: "rosenlicht",
        passed: rest && laurent.passed,
        elapsed,
        limit: Duration::from_secs(120),
        detail: format!("{}; other sub-checks {}", laurent.detail, if rest { "pass" } else { "FAIL" }),
        documented: rest && counterexample,
    }
}

fn borel_shape() -> Outcome {
    let (r, elapsed) = scenario(Scenario::BorelShape);
    let f2 = r.check("two-cosets").is_some_and(|c| c.detail.matches('(').count() == 2);
    Outcome {
        id: 4,
        name: "borel-shape",
        passed: ["h-is-horizontal", "two-cosets", "g-plus-h-inside", "covered-by-f-plus-h"].iter().all(|c| check(&r, c)) && f2,
        elapsed,
        limit: Duration::from_secs(5),
        detail: failed_checks(&r),
        documented: false,
    }
}

fn unimod() -> Outcome {
    let cfg = DensityConfig::default();
    let (r, elapsed) = timed(|| b2_density(&GroupModel::AxPlusB, &cfg));
    let (passed, detail) = match r {
        Ok(r) => (
            (r.integral - 1.0).abs() <= INTEGRAL_TOL
                && r.integral_delta > 1.0
                && r.integral_delta >= 1.01
                && r.positive
                && (r.integral_delta - r.closed_form).abs() <= 2.0 * cfg.tolerance,
            format!(
                "∫ρ = {:.9}, ∫ρΔ = {:.9}, closed form {:.9}, min ρ on grid {:e}",
                r.integral, r.integral_delta, r.closed_form, r.min_on_test_grid
            ),
        ),
        Err(e) => (false, e.to_string()),
    };
    Outcome {
        id: 5,
        name: "unimod",
        passed,
        elapsed,
        limit: Duration::from_secs(30),
        detail,
        documented: false,
    }
}

fn hull_suite() -> Outcome {
    let (r, elapsed) = scenario(Scenario::HullSuite);
    let quarter = r
        .check("quarter-shift")
        .and_then(|c| c.detail.rsplit(' ').next()?.parse::<f64>().ok())
        .is_some_and(|d| (d - 0.25).abs() <= CF_TOL);
    let names = [
        "self-distance-zero",
        "symmetric",
        "quarter-shift",
        "union-continuity",
        "quasi-monotone-pass",
        "quasi-monotone-fail",
        "subgroup-hull Z in R",
        "subgroup-hull Z x 0 in R2",
        "subgroup-hull R x 0 in R2",
    ];
    Outcome {
        id: 6,
        name: "hull-suite",
        passed: names.iter().all(|c| check(&r, c)) && quarter,
        elapsed,
        limit: Duration::from_secs(30),
        detail: failed_checks(&r),
        documented: false,
    }
}

fn pt(x: i64) -> Coords {
    vec![ExactScalar::from(x)]
}

fn locator() -> Outcome {
    let run = || -> approxlat::Result<(usize, usize, bool)> {
        let m = GroupModel::rn(1, ScalarDomain::Rational);
        let w = Window::cube(1, int(512))?;
        let cfg = DeloneConfig::with_delta(rat(1, 2));
        let mut pow2 = Vec::new();
        let mut k = 1;
        while k <= 512 {
            pow2.extend([pt(k), pt(-k)]);
            k *= 2;
        }
        let sparse = PointSet::Patch(FinitePatch::collect(m, pow2, w.clone(), true)?);
        let mult = |k: i64| -> approxlat::Result<PointSet> {
            Ok(PointSet::Patch(PointSet::Lattice(LatticeSet::new(m, vec![int(0)], vec![vec![int(k)]])?).patch(&w)?))
        };
        let a = union_density_locator(&[sparse.clone(), mult(3)?], &w, &cfg)?;
        let b = union_density_locator(&[mult(2)?, sparse], &w, &cfg)?;
        let witnessed = [&a, &b].iter().all(|r| {
            matches!(r.witness.covering, Covering::Finite { .. })
                && r.witness.packing.is_some()
                && matches!(r.union.covering, Covering::Finite { .. })
        });
        Ok((a.index, b.index, witnessed))
    };
    let (r, elapsed) = timed(run);
    let (passed, detail) = match r {
        Ok((a, b, w)) => (a == 2 && b == 1 && w, format!("(powers of 2, 3Z) → {a}, (2Z, powers of 2) → {b}")),
        Err(e) => (false, e.to_string()),
    };
    Outcome {
        id: 7,
        name: "locator",
        passed,
        elapsed,
        limit: Duration::from_secs(10),
        detail,
        documented: false,
    }
}

fn zariski() -> Outcome {
    let (r, elapsed) = scenario(Scenario::Zariski);
    Outcome {
        id: 8,
        name: "zariski",
        passed: r.passed && r.scale.get("sets").map(String::as_str) == Some("50"),
        elapsed,
        limit: Duration::from_secs(60),
        detail: failed_checks(&r),
        documented: false,
    }
}

fn modular() -> Outcome {
    let run = || -> approxlat::Result<(f64, bool)> {
        let gs = [[0.5, 0.0], [2.0, 0.25], [1.5, -1.0], [0.75, 0.5], [3.0, 2.0]];
        let mut worst = 0.0f64;
        for g in gs {
            worst = worst.max(right_translation_check(g, 400)?.relative_error);
        }
        let m = GroupModel::AxPlusB;
        let els: Vec<Coords> = vec![
            vec![ExactScalar::Rat(rat(1, 2)), ExactScalar::from(3)],
            vec![ExactScalar::from(3), ExactScalar::Rat(rat(-2, 7))],
            vec![ExactScalar::Rat(rat(5, 4)), ExactScalar::from(0)],
        ];
        let mut hom = true;
        for g in &els {
            for h in &els {
                let lhs = m.modular_function(&m.mul(g, h)?)?;
                let rhs = m.modular_function(g)?.try_mul(&m.modular_function(h)?)?;
                hom &= lhs == rhs;
            }
        }
        Ok((worst, hom))
    };
    let (r, elapsed) = timed(run);
    let (passed, detail) = match r {
        Ok((worst, hom)) => (worst < MODULAR_REL_TOL && hom, format!("worst relative error {worst:e}, Δ multiplicative: {hom}")),
        Err(e) => (false, e.to_string()),
    };
    Outcome {
        id: 9,
        name: "modular",
        passed,
        elapsed,
        limit: Duration::from_secs(10),
        detail,
        documented: false,
    }
}

fn main() {
    let outcomes = vec![thin(), example3(), rosenlicht(), borel_shape(), unimod(), hull_suite(), locator(), zariski(), modular()];
    let mut unexpected = Vec::new();
    for o in &outcomes {
        let in_time = o.elapsed <= o.limit;
        let ok = o.passed && in_time;
        println!(
            "{} criterion {} ({}) in {:.2?} (limit {:?}): {}",
            if ok { "PASS" } else { "FAIL" },
            o.id,
            o.name,
            o.elapsed,
            o.limit,
            if in_time { o.detail.clone() } else { format!("over the time limit; {}", o.detail) }
        );
        if !ok && o.documented && in_time {
            println!("     expected failure: the statement does not hold as given, see the detail above");
        } else if !ok {
            unexpected.push(o.id);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
