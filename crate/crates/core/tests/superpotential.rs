#![allow(clippy::needless_range_loop)]

use gralg_core::dsl::{compiled, parse_metric, CompiledMetric, CATALOG};
use gralg_core::geometry::{einstein_three_forms_upper, GeometryPoint};
use gralg_core::linalg::Mat4;
use gralg_core::multivector::Multivector;
use gralg_core::superpotential::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

const GENERIC: &str = r#"
metric "generic" {
  coords: t, x, y, z;
  g[0,0] = 1 + 0.1*sin(x)*cos(t);
  g[0,1] = 0.05*y*z;
  g[1,1] = -(1 + 0.2*x^2);
  g[1,2] = 0.1*sin(t + z);
  g[2,2] = -(1 + 0.1*cos(y));
  g[3,3] = -exp(0.1*x*t);
  g[2,3] = 0.03*t;
}
"#;

struct At {
    mj: gralg_core::metric::MetricJet2,
    gp: GeometryPoint,
    sp: SuperpotentialPoint,
}

fn at(m: &CompiledMetric, x: [f64; 4]) -> At {
    let mj = m.eval_jet2(x).unwrap();
    let gp = GeometryPoint::new(&mj);
    let sp = SuperpotentialPoint::new(&mj, &gp);
    At { mj, gp, sp }
}

fn all_metrics() -> Vec<(CompiledMetric, [(f64, f64); 4])> {
    let mut v: Vec<_> = CATALOG.iter().map(|e| (compiled(e.name).unwrap(), e.default_box)).collect();
    v.push((CompiledMetric::new(parse_metric(GENERIC).unwrap()), [(-0.5, 0.5); 4]));
    v
}

fn max_diff3(a: &[[[f64; 4]; 4]; 4], b: &[[[f64; 4]; 4]; 4]) -> f64 {
    let mut m = 0.0f64;
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                m = m.max((a[i][j][k] - b[i][j][k]).abs());
            }
        }
    }
    m
}

fn max_diff2(a: &Mat4<f64>, b: &Mat4<f64>) -> f64 {
    let mut m = 0.0f64;
    for i in 0..4 {
        for j in 0..4 {
            m = m.max((a[i][j] - b[i][j]).abs());
        }
    }
    m
}

#[test]
fn three_superpotential_forms_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (m, b) in all_metrics() {
        for _ in 0..30 {
            let x = std::array::from_fn(|i| rng.gen_range(b[i].0..b[i].1));
            let a = at(&m, x);
            let f1 = a.mj.level1();
            let e = s_explicit(&f1);
            let d = s_density(&f1);
            assert!(max_diff3(&a.sp.s, &e) < 1e-10, "{}", m.name());
            assert!(max_diff3(&a.sp.s, &d) < 1e-10, "{}", m.name());
            for i in 0..4 {
                for j in 0..4 {
                    for k in 0..4 {
                        assert_eq!(a.sp.s[i][j][k], -a.sp.s[i][k][j]);
                    }
                }
            }
        }
    }
}

#[test]
fn minkowski_cartesian_objects_vanish() {
    let m = compiled("minkowski_cartesian").unwrap();
    let a = at(&m, [0.1, 0.2, 0.3, 0.4]);
    assert!(a.sp.s.iter().flatten().flatten().all(|v| *v == 0.0));
    assert!(a.sp.t_upper.iter().flatten().all(|v| *v == 0.0));
    assert!(a.sp.einstein.iter().flatten().all(|v| *v == 0.0));
    assert!(a.sp.ll.iter().flatten().all(|v| *v == 0.0));
    assert_eq!(a.sp.theta, 0.0);
}

#[test]
fn explicit_form_matches_finite_difference_oracle() {
    // S_λ^{νρ} with the ∂_β term taken by central differences of plain metric values.
    let m = compiled("schwarzschild_standard").unwrap();
    let x = [0.0, 4.0, PI / 2.0, 0.0];
    let a = at(&m, x);
    let h = 1e-5;
    let f0 = m.eval_field(x).unwrap();
    let mut inner = [[[0.0; 4]; 4]; 4];
    for b in 0..4 {
        let mut p = x;
        let mut q = x;
        p[b] += h;
        q[b] -= h;
        let fp = m.eval_field(p).unwrap();
        let fq = m.eval_field(q).unwrap();
        for s in 0..4 {
            for n in 0..4 {
                for r in 0..4 {
                    let val = |f: &gralg_core::metric::MetricField<f64>| {
                        -f.det * (f.g_inv[r][s] * f.g_inv[n][b] - f.g_inv[s][n] * f.g_inv[r][b])
                    };
                    inner[s][n][r] += (val(&fp) - val(&fq)) / (2.0 * h);
                }
            }
        }
    }
    for l in 0..4 {
        for n in 0..4 {
            for r in 0..4 {
                let v: f64 = (0..4).map(|s| f0.g[l][s] * inner[s][n][r]).sum::<f64>() / (-2.0 * f0.det);
                assert!((v - a.sp.s[l][n][r]).abs() < 1e-8, "{l}{n}{r}: {v} vs {}", a.sp.s[l][n][r]);
            }
        }
    }
}

#[test]
fn star_s_matches_connection_form_expression() {
    for (m, b) in all_metrics() {
        let x = std::array::from_fn(|i| 0.5 * (b[i].0 + b[i].1) + 0.1);
        let a = at(&m, x);
        let cm = a.mj.cotangent();
        let other = star_s_from_connection(&cm, &a.gp.connection_one_forms);
        for mu in 0..4 {
            assert!((a.sp.s_forms[mu] - other[mu]).max_abs() < 1e-10, "{} {mu}", m.name());
        }
    }
}

#[test]
fn freud_density_and_divergence() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (m, b) in all_metrics() {
        for _ in 0..10 {
            let x = std::array::from_fn(|i| rng.gen_range(b[i].0..b[i].1));
            let a = at(&m, x);
            let root = a.gp.metric.sqrt_minus_g();
            for i in 0..4 {
                for j in 0..4 {
                    for k in 0..4 {
                        assert_eq!(a.sp.u[i][j][k], root * a.sp.s[i][j][k]);
                    }
                }
            }
            assert!(max_diff2(&a.sp.u_div, &a.sp.u_div_split) < 1e-9, "{}", m.name());
        }
    }
}

#[test]
fn freud_current_is_divergence_free() {
    let m = compiled("schwarzschild_isotropic").unwrap();
    let x = [0.3, 4.0, 5.0, 6.0];
    let h = 1e-3;
    let mut div = [0.0; 4];
    for nu in 0..4 {
        let mut p = x;
        let mut q = x;
        p[nu] += h;
        q[nu] -= h;
        let up = at(&m, p).sp.u_div;
        let uq = at(&m, q).sp.u_div;
        for mu in 0..4 {
            div[mu] += (up[mu][nu] - uq[mu][nu]) / (2.0 * h);
        }
    }
    for v in div {
        assert!(v.abs() < 1e-6, "{v}");
    }
}

#[test]
fn pseudo_t_depends_on_chart_and_is_asymmetric() {
    let sph = at(&compiled("minkowski_spherical").unwrap(), [0.0, 2.0, PI / 3.0, 0.0]);
    assert!(sph.sp.t_upper.iter().flatten().any(|v| v.abs() > 1e-6));
    let s = at(&compiled("schwarzschild_standard").unwrap(), [0.0, 5.0, 1.0, 0.5]);
    let mut asym = 0.0f64;
    for i in 0..4 {
        for j in 0..4 {
            asym = asym.max((s.sp.t_upper[i][j] - s.sp.t_upper[j][i]).abs());
        }
    }
    assert!(asym > 1e-6, "{asym}");
}

#[test]
fn component_extraction_matches_scalar_products() {
    let m = CompiledMetric::new(parse_metric(GENERIC).unwrap());
    let a = at(&m, [0.1, 0.2, -0.1, 0.3]);
    let cm = a.mj.cotangent();
    // ★X = X^ν ★γ_ν, and γ^σ ∧ ★γ_ν = δ^σ_ν τ, so the τ coefficient of γ^σ ∧ ★X is X^σ.
    let tau = cm.volume().c[15];
    for r in 0..4 {
        for s in 0..4 {
            let w = Multivector::gamma(s).wedge(&a.sp.t_forms[r]).c[15] / tau;
            assert!((w - a.sp.t_upper[r][s]).abs() < 1e-12);
        }
    }
}

#[test]
fn sparling_decomposition_holds() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for (m, b) in all_metrics() {
        for _ in 0..10 {
            let x = std::array::from_fn(|i| rng.gen_range(b[i].0..b[i].1));
            let a = at(&m, x);
            let cm = a.mj.cotangent();
            let ds = d_star_s_upper(&a.mj, &a.gp).unwrap();
            let g = einstein_three_forms_upper(&a.gp, &cm);
            for r in 0..4 {
                let res = (ds[r] - g[r] + a.sp.t_forms[r]).max_abs();
                assert!(res < 1e-9, "{} {r}: {res}", m.name());
            }
            let div = covariant_divergence_upper(&a.mj, &a.gp);
            let want: Mat4<f64> =
                std::array::from_fn(|r| std::array::from_fn(|s| a.sp.t_upper[r][s] - a.gp.einstein_upper[r][s]));
            assert!(max_diff2(&div, &want) < 1e-9, "{}", m.name());
        }
    }
}

#[test]
fn einstein_pseudotensor_forms_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for (m, b) in all_metrics() {
        for _ in 0..10 {
            let x = std::array::from_fn(|i| rng.gen_range(b[i].0..b[i].1));
            let a = at(&m, x);
            assert!(max_diff2(&a.sp.einstein, &a.sp.einstein_canonical) < 1e-10, "{}", m.name());
            let root = a.gp.metric.sqrt_minus_g();
            let mixed_g: Mat4<f64> = std::array::from_fn(|l| {
                std::array::from_fn(|r| (0..4).map(|k| a.gp.metric.g[l][k] * a.gp.einstein_upper[k][r]).sum())
            });
            let rhs: Mat4<f64> =
                std::array::from_fn(|l| std::array::from_fn(|r| a.sp.einstein[l][r] - root * mixed_g[l][r]));
            assert!(max_diff2(&a.sp.u_div, &rhs) < 1e-9, "{}", m.name());
        }
    }
}

#[test]
fn landau_lifshitz_objects() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for name in ["schwarzschild_standard", "schwarzschild_isotropic", "flrw"] {
        let m = compiled(name).unwrap();
        let b = CATALOG.iter().find(|e| e.name == name).unwrap().default_box;
        for _ in 0..50 {
            let x = std::array::from_fn(|i| rng.gen_range(b[i].0..b[i].1));
            let a = at(&m, x);
            for i in 0..4 {
                for j in 0..4 {
                    assert!((a.sp.ll[i][j] - a.sp.ll[j][i]).abs() < 1e-8, "{name}");
                }
            }
            let root = a.gp.metric.sqrt_minus_g();
            let u_up = raise_label(&a.gp.metric.g_inv, &a.sp.u);
            for i in 0..4 {
                for j in 0..4 {
                    for k in 0..4 {
                        let want = -root * u_up[i][j][k];
                        assert!((a.sp.h[i][j][k] - want).abs() < 1e-12 * want.abs().max(1.0));
                    }
                }
            }
            let cm = a.mj.cotangent();
            let comps = three_form_components(&cm, &a.sp.ll_forms);
            assert!(max_diff2(&comps, &a.sp.ll) < 1e-10 * (1.0 + a.sp.ll.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()))));
        }
    }
}

#[test]
fn theta_depends_on_chart() {
    let c = at(&compiled("minkowski_cartesian").unwrap(), [0.0, 2.0, 1.0, 0.0]);
    assert_eq!(c.sp.theta, 0.0);
    let s = at(&compiled("minkowski_spherical").unwrap(), [0.0, 2.0, PI / 3.0, 0.0]);
    assert!(s.sp.theta.abs() > 1e-3, "{}", s.sp.theta);
    let std = at(&compiled("schwarzschild_standard").unwrap(), [0.0, 10.0, PI / 2.0, 0.0]);
    let iso = at(&compiled("schwarzschild_isotropic").unwrap(), [0.0, 9.0, 0.0, 0.0]);
    assert!(std.sp.theta.is_finite() && iso.sp.theta.is_finite());
}

#[test]
fn lagrangian_from_inverse_matches_direct() {
    let m = CompiledMetric::new(parse_metric(GENERIC).unwrap());
    let a = at(&m, [0.2, -0.1, 0.3, 0.1]);
    let l = lagrangian_from_inverse(&a.gp.metric.g_inv, &a.mj.level1().dg_inv());
    assert!((l - a.sp.lagrangian).abs() < 1e-12);
}
