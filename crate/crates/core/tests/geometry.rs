#![allow(clippy::needless_range_loop)]

use gralg_core::dsl::{compiled, parse_metric, CompiledMetric, CATALOG};
use gralg_core::geometry::{
    christoffel, coderivative_of_coframe, einstein_three_forms_from_curvature, einstein_three_forms_upper,
    GeometryPoint,
};
use gralg_core::linalg::Mat4;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn geo(m: &CompiledMetric, x: [f64; 4]) -> GeometryPoint {
    GeometryPoint::new(&m.eval_jet2(x).unwrap())
}

fn sample(m: &str, rng: &mut ChaCha8Rng) -> [f64; 4] {
    let b = CATALOG.iter().find(|e| e.name == m).unwrap().default_box;
    std::array::from_fn(|i| rng.gen_range(b[i].0..b[i].1))
}

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

fn generic() -> CompiledMetric {
    CompiledMetric::new(parse_metric(GENERIC).unwrap())
}

#[test]
fn spherical_christoffel_examples() {
    let m = compiled("minkowski_spherical").unwrap();
    let g = geo(&m, [0.0, 2.0, PI / 2.0, 0.0]);
    assert!((g.gamma[1][2][2] + 2.0).abs() < 1e-14);
    assert!((g.gamma[2][1][2] - 0.5).abs() < 1e-14);
    assert!((g.gamma[2][2][1] - 0.5).abs() < 1e-14);
}

#[test]
fn schwarzschild_christoffel_example() {
    let m = compiled("schwarzschild_standard").unwrap();
    let g = geo(&m, [0.0, 4.0, PI / 2.0, 0.0]);
    assert!((g.gamma[1][0][0] - 3.0 / 128.0).abs() < 1e-14);
}

#[test]
fn christoffel_matches_finite_difference_oracle() {
    let m = generic();
    let x = [0.3, 0.4, -0.2, 0.5];
    let g = geo(&m, x);
    let h = 1e-5;
    let dg: [Mat4<f64>; 4] = std::array::from_fn(|s| {
        let mut p = x;
        let mut q = x;
        p[s] += h;
        q[s] -= h;
        let a = m.eval_components(p).unwrap();
        let b = m.eval_components(q).unwrap();
        std::array::from_fn(|i| std::array::from_fn(|j| (a[i][j] - b[i][j]) / (2.0 * h)))
    });
    let oracle = christoffel(&g.metric.g_inv, &dg);
    for r in 0..4 {
        for a in 0..4 {
            for b in 0..4 {
                assert!((oracle[r][a][b] - g.gamma[r][a][b]).abs() < 1e-8);
            }
        }
    }
}

#[test]
fn riemann_symmetries_and_bianchi() {
    let m = generic();
    let g = geo(&m, [0.1, 0.2, 0.3, 0.4]);
    let r = &g.riemann;
    let glow = g.metric.g;
    let lower = |a: usize, b: usize, c: usize, d: usize| (0..4).map(|s| glow[a][s] * r[s][b][c][d]).sum::<f64>();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    assert!((r[a][b][c][d] + r[a][b][d][c]).abs() < 1e-12);
                    assert!((r[a][b][c][d] + r[a][c][d][b] + r[a][d][b][c]).abs() < 1e-12);
                    assert!((lower(a, b, c, d) + lower(b, a, c, d)).abs() < 1e-12);
                    assert!((lower(a, b, c, d) - lower(c, d, a, b)).abs() < 1e-12);
                }
            }
        }
    }
}

#[test]
fn einstein_tensor_is_symmetric_with_trace_identity() {
    let m = generic();
    let g = geo(&m, [0.1, -0.2, 0.3, 0.2]);
    let mut trace = 0.0;
    for i in 0..4 {
        trace += g.einstein_mixed[i][i];
        for j in 0..4 {
            assert!((g.einstein_lower[i][j] - g.einstein_lower[j][i]).abs() < 1e-12);
            assert!((g.einstein_upper[i][j] - g.einstein_upper[j][i]).abs() < 1e-12);
        }
    }
    assert!((trace + g.scalar).abs() < 1e-12);
}

#[test]
fn schwarzschild_charts_are_ricci_flat() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for name in ["schwarzschild_standard", "schwarzschild_isotropic"] {
        let m = compiled(name).unwrap();
        for _ in 0..50 {
            let g = geo(&m, sample(name, &mut rng));
            let scale = g.riemann.iter().flatten().flatten().flatten().fold(0.0f64, |a, v| a.max(v.abs()));
            for row in g.ricci {
                for v in row {
                    assert!(v.abs() <= 1e-8 * scale.max(1.0), "{name}: {v}");
                }
            }
        }
    }
}

#[test]
fn flrw_scalar_curvature_matches_closed_form() {
    // a = t^(2/3): standard-signature R = 6(a''/a + a'^2/a^2) = 4/(3t^2); the sign flips
    // twice here (signature and trace), so the value is unchanged.
    let m = compiled("flrw").unwrap();
    for t in [0.6, 1.0, 1.7] {
        let g = geo(&m, [t, 0.1, 0.2, -0.3]);
        let want = 4.0 / (3.0 * t * t);
        assert!((g.scalar - want).abs() < 1e-12 * want.max(1.0), "{} vs {}", g.scalar, want);
    }
}

#[test]
fn scalar_curvature_matches_nested_finite_differences() {
    let m = generic();
    let x = [0.2, 0.1, -0.3, 0.25];
    let h = 1e-4;
    let gamma_at = |p: [f64; 4]| {
        let f = m.eval_jet1(p).unwrap();
        christoffel(&f.value().g_inv, &f.dg())
    };
    let g0 = gamma_at(x);
    let dgamma: Vec<_> = (0..4)
        .map(|s| {
            let mut p = x;
            let mut q = x;
            p[s] += h;
            q[s] -= h;
            (gamma_at(p), gamma_at(q))
        })
        .collect();
    let d = |s: usize, c: usize, a: usize, b: usize| (dgamma[s].0[c][a][b] - dgamma[s].1[c][a][b]) / (2.0 * h);
    let gi = m.eval_field(x).unwrap().g_inv;
    let mut scalar = 0.0;
    for dd in 0..4 {
        for k in 0..4 {
            let mut ric = 0.0;
            for a in 0..4 {
                ric += d(k, a, a, dd) - d(a, a, k, dd);
                for s in 0..4 {
                    ric += g0[a][k][s] * g0[s][a][dd] - g0[a][a][s] * g0[s][k][dd];
                }
            }
            scalar += gi[dd][k] * ric;
        }
    }
    let got = geo(&m, x).scalar;
    assert!((got - scalar).abs() < 1e-6 * scalar.abs().max(1.0), "{got} vs {scalar}");
}

#[test]
fn contracted_bianchi_identity() {
    let m = generic();
    let x = [0.15, -0.1, 0.2, 0.3];
    let h = 1e-2;
    let g_up = |p: [f64; 4]| geo(&m, p).einstein_upper;
    let mut div = [0.0; 4];
    for mu in 0..4 {
        let at = |k: f64| {
            let mut p = x;
            p[mu] += k * h;
            g_up(p)
        };
        let (a, b, c, d) = (at(-2.0), at(-1.0), at(1.0), at(2.0));
        for nu in 0..4 {
            div[nu] += (a[mu][nu] - 8.0 * b[mu][nu] + 8.0 * c[mu][nu] - d[mu][nu]) / (12.0 * h);
        }
    }
    let g0 = geo(&m, x);
    let tr = g0.trace();
    for nu in 0..4 {
        let mut v = div[nu];
        for l in 0..4 {
            v += tr[l] * g0.einstein_upper[l][nu];
            for mu in 0..4 {
                v += g0.gamma[nu][mu][l] * g0.einstein_upper[mu][l];
            }
        }
        assert!(v.abs() < 1e-6, "component {nu}: {v}");
    }
}

#[test]
fn einstein_forms_from_curvature_agree() {
    let m = generic();
    let g = geo(&m, [0.1, 0.3, -0.1, 0.2]);
    let cm = g.metric.cotangent().unwrap();
    let a = einstein_three_forms_upper(&g, &cm);
    let b = einstein_three_forms_from_curvature(&g, &cm);
    for r in 0..4 {
        assert!((a[r] - b[r]).max_abs() < 1e-12, "{r}");
    }
}

#[test]
fn coframe_coderivative_is_contracted_connection() {
    let m = generic();
    let x = [0.1, 0.2, 0.3, -0.2];
    let mj = m.eval_jet2(x).unwrap();
    let g = GeometryPoint::new(&mj);
    let got = coderivative_of_coframe(&mj).unwrap();
    for a in 0..4 {
        let mut want = 0.0;
        for k in 0..4 {
            for r in 0..4 {
                want += g.metric.g_inv[k][r] * g.gamma[a][k][r];
            }
        }
        assert!((got[a] - want).abs() < 1e-12, "{a}: {} vs {}", got[a], want);
    }
}
