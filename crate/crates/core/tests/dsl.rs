#![allow(clippy::needless_range_loop)]

use gralg_core::dsl::*;
use gralg_core::linalg::{identity, mat_mul};
use gralg_core::testing::random_expr;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const MINK: &str = "metric \"m\" {\n  coords: t, x, y, z;\n  g[0,0] = 1;\n  g[1,1] = \u{2212}1;\n  g[2,2] = -1;\n  g[3,3] = -1;\n}\n";

#[test]
fn minimal_minkowski_parses() {
    let s = parse_metric(MINK).unwrap();
    assert_eq!(s.components.len(), 4);
    assert_eq!(s.coords, ["t", "x", "y", "z"].map(String::from));
    assert!(s.components.iter().all(|((a, b), _)| a == b));
}

#[test]
fn unbalanced_paren_reports_line() {
    let text = "metric \"m\" {\n coords: t, x, y, z;\n g[0,0] = (1 + x;\n g[1,1] = -1;\n}";
    match parse_metric(text) {
        Err(e @ DslError::Syntax { line: 3, .. }) => assert!(e.to_string().starts_with("3:")),
        other => panic!("{other:?}"),
    }
}

#[test]
fn distinct_diagnostics() {
    let base = |body: &str| format!("metric \"m\" {{\n coords: t, x, y, z;\n{body}\n}}");
    assert!(matches!(
        parse_metric(&base(" g[0,0] = 1 $ 2;")),
        Err(DslError::Lexical { line: 3, col: 13, .. })
    ));
    assert!(matches!(
        parse_metric(&base(" g[0,0] = w;")),
        Err(DslError::UnknownIdentifier { line: 3, col: 11, ref name }) if name == "w"
    ));
    assert!(matches!(
        parse_metric(&base(" g[0,4] = 1;")),
        Err(DslError::IndexOutOfRange { index: 4, .. })
    ));
    assert!(matches!(
        parse_metric(&base(" g[0,1] = 1;\n g[1,0] = 2;")),
        Err(DslError::DuplicateComponent { line: 4, mu: 0, nu: 1, .. })
    ));
    assert!(matches!(parse_metric(&base(" g[0,0] = foo(t);")), Err(DslError::UnknownIdentifier { .. })));
    assert!(matches!(parse_metric(&base(" let x = 1;\n g[0,0] = 1;")), Err(DslError::DuplicateName { .. })));
    assert!(matches!(parse_metric(&base(" g[0,0] = t^x;")), Err(DslError::Syntax { .. })));
    assert!(matches!(parse_metric("metric \"m\" { g[0,0] = 1; }"), Err(DslError::Syntax { .. })));
    assert!(matches!(parse_metric("metric \"m\" { coords: a, b, c; g[0,0] = 1; }"), Err(DslError::Syntax { .. })));
}

#[test]
fn comments_and_exponents() {
    let text = "# header\nmetric \"c\" { # trailing\n coords: t, x, y, z;\n g[0,0] = t^(2/3) * x^-2; # note\n g[1,1] = -1; g[2,2] = -1; g[3,3] = -1;\n}";
    let s = parse_metric(text).unwrap();
    let m = CompiledMetric::new(s);
    let g = m.eval_components([8.0, 2.0, 0.0, 0.0]).unwrap();
    assert!((g[0][0] - 1.0).abs() < 1e-14);
    let err = m.eval_components([-8.0, 2.0, 0.0, 0.0]).unwrap_err();
    assert_eq!(err.point, [-8.0, 2.0, 0.0, 0.0]);
}

#[test]
fn isotropic_schwarzschild_parses_with_nested_g00() {
    let s = parse_metric(lookup("schwarzschild_isotropic").unwrap().source).unwrap();
    assert!(s.component(0, 0).unwrap().depth() > 1);
    assert_eq!(s.param("r_g"), Some(1.0));
}

#[test]
fn catalog_round_trips() {
    let names: Vec<String> = builtin_catalog().iter().map(|s| s.name.clone()).collect();
    for want in ["minkowski_cartesian", "minkowski_spherical", "schwarzschild_standard", "schwarzschild_isotropic", "flrw"] {
        assert!(names.iter().any(|n| n == want), "{want}");
    }
    for spec in builtin_catalog() {
        let text = print_metric(&spec);
        assert_eq!(parse_metric(&text).unwrap(), spec);
        assert_eq!(print_metric(&parse_metric(&text).unwrap()), text);
    }
}

#[test]
fn minkowski_cartesian_is_constant() {
    let mj = eval_metric_jet2(&builtin_catalog()[0], [0.3, -1.0, 2.0, 0.5]).unwrap();
    assert_eq!(mj.det(), -1.0);
    assert!(mj.dg().iter().flatten().flatten().all(|&x| x == 0.0));
    assert!(mj.ddg().iter().flatten().flatten().flatten().all(|&x| x == 0.0));
}

#[test]
fn minkowski_spherical_values() {
    let spec = parse_metric(lookup("minkowski_spherical").unwrap().source).unwrap();
    let th = std::f64::consts::PI / 3.0;
    let mj = eval_metric_jet2(&spec, [0.0, 2.0, th, 0.0]).unwrap();
    let g = mj.values().g;
    assert_eq!(g[2][2], -4.0);
    assert_eq!(mj.dg()[1][2][2], -4.0);
    assert!((g[3][3] + 4.0 * th.sin().powi(2)).abs() < 1e-14);
}

#[test]
fn isotropic_g00_at_r10() {
    let spec = parse_metric(lookup("schwarzschild_isotropic").unwrap().source).unwrap();
    let mj = eval_metric_jet2(&spec, [0.0, 10.0, 0.0, 0.0]).unwrap();
    let want = (39.0f64 / 41.0).powi(2);
    assert!((mj.values().g[0][0] - want).abs() < 1e-15);
}

#[test]
fn signature_and_domain_errors() {
    let bad = parse_metric("metric \"b\" { coords: t,x,y,z; g[0,0] = -1; g[1,1] = -1; g[2,2] = -1; g[3,3] = 1 + x^2; }").unwrap();
    assert!(eval_metric_jet2(&bad, [0.0; 4]).is_ok());
    let bad = parse_metric("metric \"b\" { coords: t,x,y,z; g[0,0] = -1; g[1,1] = -1; g[2,2] = -1; g[3,3] = -1; }").unwrap();
    assert!(matches!(eval_metric_jet2(&bad, [0.0; 4]), Err(MetricEvalError::Signature { .. })));
    let spec = parse_metric(lookup("schwarzschild_standard").unwrap().source).unwrap();
    let e = eval_metric_jet2(&spec, [0.0, 0.0, 1.0, 0.0]).unwrap_err();
    assert_eq!(e.point(), [0.0, 0.0, 1.0, 0.0]);
    assert!(e.to_string().contains("division by zero"));
}

#[test]
fn mass_parameter_alias() {
    let mut spec = parse_metric(lookup("schwarzschild_isotropic").unwrap().source).unwrap();
    spec.set_param("m", 2.0).unwrap();
    assert_eq!(spec.param("r_g"), Some(4.0));
    assert!(spec.set_param("nope", 1.0).is_err());
}

fn sample(b: &CoordBox, rng: &mut impl Rng) -> [f64; 4] {
    std::array::from_fn(|i| if b[i].0 == b[i].1 { b[i].0 } else { rng.gen_range(b[i].0..b[i].1) })
}

#[test]
fn catalog_derivatives_match_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for entry in CATALOG.iter() {
        let m = CompiledMetric::new(parse_metric(entry.source).unwrap());
        for _ in 0..10 {
            let x = sample(&entry.default_box, &mut rng);
            let mj = m.eval_jet2(x).unwrap();
            let dg = mj.dg();
            let f = mj.values();
            let p = mat_mul(&f.g, &f.g_inv);
            for i in 0..4 {
                for j in 0..4 {
                    assert!((p[i][j] - identity()[i][j]).abs() < 1e-12);
                }
            }
            let h = 1e-6;
            for r in 0..4 {
                let (mut xp, mut xm) = (x, x);
                xp[r] += h;
                xm[r] -= h;
                let (gp, gm) = (m.eval_components(xp).unwrap(), m.eval_components(xm).unwrap());
                for i in 0..4 {
                    for j in 0..4 {
                        let fd = (gp[i][j] - gm[i][j]) / (2.0 * h);
                        assert!((fd - dg[r][i][j]).abs() < 1e-6, "{} d{r} g{i}{j}", entry.name);
                    }
                }
            }
        }
    }
}

proptest! {
    #[test]
    fn print_parse_fixpoint(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = MetricSpec {
            name: "random".into(),
            coords: ["t", "x", "y", "z"].map(String::from),
            params: vec![("k".into(), rng.gen_range(-3.0..3.0))],
            lets: vec![("u".into(), random_expr(&mut rng, 3))],
            components: vec![((0, 0), random_expr(&mut rng, 4)), ((1, 2), random_expr(&mut rng, 4))],
        };
        let first = parse_metric(&print_metric(&spec)).unwrap();
        let text = print_metric(&first);
        let second = parse_metric(&text).unwrap();
        prop_assert_eq!(&first, &second);
        prop_assert_eq!(print_metric(&second), text);
    }
}
