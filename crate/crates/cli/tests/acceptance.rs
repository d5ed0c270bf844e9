#![allow(clippy::needless_range_loop)]

//! Acceptance suite: one PASS/FAIL line per criterion; exits nonzero if any fails.

use std::f64::consts::PI;
use std::process::Command;
use std::time::{Duration, Instant};

use gralg_core::algebra::run_suite;
use gralg_core::dsl::{compiled, lookup, CompiledMetric, CATALOG};
use gralg_core::mass::{mass_extrapolated, MassKind, MassOptions};
use gralg_core::superpotential::{s_density, s_explicit};
use gralg_core::testing::jet_finite_difference_check;
use gralg_core::verifier::{
    conservation_residual, evaluate_points, freud_residual, missing_term_residuals, pauli_residual, sample_points,
    shrink_box, sparling_residual, sparling_scalar_residual, PointData, Residual,
};

const ALGEBRA_REL_TOL: f64 = 1e-11;
const RICCI_TOL: f64 = 1e-8;
const IDENTITY_TOL: f64 = 1e-8;
const MISSING_TERM_MIN: f64 = 1e-5;
const TRIPLE_TOL: f64 = 1e-10;
const MASS_TOL: f64 = 1e-6;
const CONSERVATION_TOL: f64 = 1e-5;
const CONSERVATION_STEP: f64 = 1e-3;
const THETA_MIN: f64 = 1e-3;
const JET_GRADIENT_TOL: f64 = 1e-6;
const JET_HESSIAN_TOL: f64 = 1e-4;

type Criterion = (&'static str, fn() -> Outcome, Option<Duration>);

struct Outcome {
    pass: bool,
    detail: String,
}

fn metric(name: &str) -> (CompiledMetric, [(f64, f64); 4]) {
    (compiled(name).unwrap(), lookup(name).unwrap().default_box)
}

fn points(name: &str, n: usize, seed: u64) -> Vec<PointData> {
    let (m, b) = metric(name);
    let (data, skipped) = evaluate_points(&m, &sample_points(&b, n, seed));
    assert_eq!(skipped, 0, "{name}: sampled points left the chart domain");
    data
}

fn max_residual(data: &[PointData], f: impl Fn(&PointData) -> Residual) -> f64 {
    data.iter().map(|p| f(p).abs).fold(0.0, f64::max)
}

fn algebra() -> Outcome {
    let r = run_suite(0, 1000, 20);
    let worst = r.iter().map(|e| e.max_relative).fold(0.0, f64::max);
    Outcome { pass: worst <= ALGEBRA_REL_TOL, detail: format!("{} identities, worst relative {worst:.3e}", r.len()) }
}

fn vacuum() -> Outcome {
    let mut worst = 0.0f64;
    for name in ["schwarzschild_isotropic", "schwarzschild_standard"] {
        for p in points(name, 100, 1) {
            worst = p.gp.ricci.iter().flatten().fold(worst, |a, v| a.max(v.abs()));
        }
    }
    Outcome { pass: worst <= RICCI_TOL, detail: format!("max |R_ab| {worst:.3e}") }
}

fn freud() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for name in ["schwarzschild_standard", "schwarzschild_isotropic", "flrw"] {
        let r = max_residual(&points(name, 100, 2), freud_residual);
        pass &= r < IDENTITY_TOL;
        parts.push(format!("{name} {r:.3e}"));
    }
    Outcome { pass, detail: parts.join(", ") }
}

fn missing_term() -> Outcome {
    let data = points("schwarzschild_standard", 100, 3);
    let (mut with, mut without) = (0.0f64, 0.0f64);
    for p in &data {
        let (a, b) = missing_term_residuals(p);
        with = with.max(a.abs);
        without = without.max(b.abs);
    }
    Outcome {
        pass: with < IDENTITY_TOL && without > MISSING_TERM_MIN,
        detail: format!("with term {with:.3e}, without term {without:.3e}"),
    }
}

fn sparling() -> Outcome {
    let mut pass = true;
    let (mut forms, mut scalar) = (0.0f64, 0.0f64);
    for e in CATALOG.iter() {
        let data = points(e.name, 50, 4);
        forms = forms.max(max_residual(&data, sparling_residual));
        scalar = scalar.max(max_residual(&data, sparling_scalar_residual));
    }
    pass &= forms < IDENTITY_TOL && scalar < IDENTITY_TOL;
    Outcome { pass, detail: format!("3-form residual {forms:.3e}, component residual {scalar:.3e}") }
}

fn triple() -> Outcome {
    let mut worst = 0.0f64;
    for e in CATALOG.iter() {
        for p in points(e.name, 100, 5) {
            let f1 = p.mj.level1();
            let (a, b, c) = (p.sp.s, s_explicit(&f1), s_density(&f1));
            for i in 0..4 {
                for j in 0..4 {
                    for k in 0..4 {
                        let (x, y, z) = (a[i][j][k], b[i][j][k], c[i][j][k]);
                        worst = worst.max((x - y).abs()).max((x - z).abs()).max((y - z).abs());
                    }
                }
            }
        }
    }
    Outcome { pass: worst < TRIPLE_TOL, detail: format!("max pairwise {worst:.3e}") }
}

fn mass() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    let opts = MassOptions { n_theta: 64, n_phi: 128, ..MassOptions::default() };
    for m in [1.0, 2.0] {
        let mut c = compiled("schwarzschild_isotropic").unwrap();
        c.spec.set_param("m", m).unwrap();
        let c = CompiledMetric::new(c.spec);
        for kind in [MassKind::Einstein, MassKind::LandauLifshitz] {
            let r = mass_extrapolated(&c, kind, &[1e2, 1e3, 1e4], &opts).unwrap();
            let err = (r.extrapolated - m).abs();
            pass &= err < MASS_TOL;
            parts.push(format!("m={m} {} err {err:.2e}", kind.name()));
        }
    }
    Outcome { pass, detail: parts.join(", ") }
}

fn conservation() -> Outcome {
    let mut worst = 0.0f64;
    for name in ["schwarzschild_isotropic", "schwarzschild_standard"] {
        let (m, b) = metric(name);
        for x in sample_points(&shrink_box(&b, 4.0 * CONSERVATION_STEP), 20, 6) {
            worst = worst.max(conservation_residual(&m, x, CONSERVATION_STEP).unwrap().abs);
        }
    }
    Outcome { pass: worst < CONSERVATION_TOL, detail: format!("max 4-form residual {worst:.3e}") }
}

fn pauli() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for name in ["minkowski_spherical", "schwarzschild_standard", "flrw"] {
        let r = max_residual(&points(name, 20, 7), pauli_residual);
        pass &= r < IDENTITY_TOL;
        parts.push(format!("{name} {r:.3e}"));
    }
    Outcome { pass, detail: parts.join(", ") }
}

fn theta() -> Outcome {
    let cart = points("minkowski_cartesian", 20, 8);
    let zero = cart.iter().all(|p| p.sp.theta == 0.0);
    let (m, _) = metric("minkowski_spherical");
    let t = PointData::new(&m, [0.0, 2.0, PI / 3.0, 0.0]).unwrap().sp.theta;
    Outcome { pass: zero && t.abs() > THETA_MIN, detail: format!("cartesian exactly zero: {zero}, spherical {t:.6}") }
}

fn jets() -> Outcome {
    let c = jet_finite_difference_check(0, 50);
    Outcome {
        pass: c.max_gradient_error < JET_GRADIENT_TOL && c.max_hessian_error < JET_HESSIAN_TOL && c.nesting_exact,
        detail: format!(
            "{} expressions, gradient {:.2e}, hessian {:.2e}",
            c.expressions, c.max_gradient_error, c.max_hessian_error
        ),
    }
}

fn cli_determinism() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_gralg"))
            .args(["verify", "schwarzschild_isotropic", "--seed", "7"])
            .output()
            .expect("gralg runs")
    };
    let (a, b) = (run(), run());
    let same = a.stdout == b.stdout && !a.stdout.is_empty();
    Outcome {
        pass: same && a.status.success(),
        detail: format!("{} bytes, identical: {same}, exit {:?}", a.stdout.len(), a.status.code()),
    }
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("clifford identity suite", algebra, Some(Duration::from_secs(5))),
        ("vacuum ricci", vacuum, Some(Duration::from_secs(2))),
        ("freud identity", freud, Some(Duration::from_secs(5))),
        ("missing term exhibit", missing_term, Some(Duration::from_secs(2))),
        ("sparling decomposition", sparling, Some(Duration::from_secs(5))),
        ("superpotential triple equivalence", triple, Some(Duration::from_secs(2))),
        ("mass reproduction", mass, Some(Duration::from_secs(10))),
        ("conservation closedness", conservation, Some(Duration::from_secs(10))),
        ("pauli identity", pauli, Some(Duration::from_secs(2))),
        ("theta chart dependence", theta, Some(Duration::from_secs(1))),
        ("jet correctness", jets, Some(Duration::from_secs(2))),
        ("cli determinism", cli_determinism, None),
    ];
    let mut failures = 0;
    for (i, (name, f, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = f();
        let took = start.elapsed();
        let in_time = limit.is_none_or(|l| took <= l);
        let pass = o.pass && in_time;
        if !pass {
            failures += 1;
        }
        let budget = limit.map(|l| format!(" / {:.0} s", l.as_secs_f64())).unwrap_or_default();
        println!(
            "criterion {:>2} {:<34} {}  ({}; {:.3} s{budget})",
            i + 1,
            name,
            if pass { "PASS" } else { "FAIL" },
            o.detail,
            took.as_secs_f64()
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
