//! Levi-Civita connection, curvature and Einstein forms in a coordinate basis.
//!
//! Conventions: R^c_{dkl} = ∂_kΓ^c_{ld} − ∂_lΓ^c_{kd} + Γ^c_{km}Γ^m_{ld} − Γ^c_{lm}Γ^m_{kd}
//! and R_{dk} = R^a_{dka} (trace on the last index).

use crate::jet::Jet1;
use crate::linalg::Mat4;
use crate::metric::{MetricField, MetricJet2};
use crate::multivector::{CotangentMetric, IndexedFormSet, Multivector};
use crate::scalar::Scalar;

pub type Rank3<S> = [[[S; 4]; 4]; 4];
pub type Rank4<S> = [[[[S; 4]; 4]; 4]; 4];

/// Γ^ρ_{μν} = ½ g^{ρσ}(∂_μ g_{σν} + ∂_ν g_{σμ} − ∂_σ g_{μν}), indexed `[ρ][μ][ν]`.
pub fn christoffel<S: Scalar>(g_inv: &Mat4<S>, dg: &[Mat4<S>; 4]) -> Rank3<S> {
    let mut lowered = [[[S::zero(); 4]; 4]; 4];
    for s in 0..4 {
        for m in 0..4 {
            for n in m..4 {
                let v = (dg[m][s][n] + dg[n][s][m] - dg[s][m][n]).scale(0.5);
                lowered[s][m][n] = v;
                lowered[s][n][m] = v;
            }
        }
    }
    let mut out = [[[S::zero(); 4]; 4]; 4];
    for r in 0..4 {
        for m in 0..4 {
            for n in m..4 {
                let mut v = S::zero();
                for s in 0..4 {
                    v += g_inv[r][s] * lowered[s][m][n];
                }
                out[r][m][n] = v;
                out[r][n][m] = v;
            }
        }
    }
    out
}

/// Γ^σ_{ρσ}, indexed by ρ.
pub fn christoffel_trace<S: Scalar>(gamma: &Rank3<S>) -> [S; 4] {
    std::array::from_fn(|r| {
        let mut v = S::zero();
        for s in 0..4 {
            v += gamma[s][r][s];
        }
        v
    })
}

/// The connection 1-forms Γ^α_β = Γ^α_{κβ} γ^κ, indexed `[α][β]`.
pub fn connection_one_forms<S: Scalar>(gamma: &Rank3<S>) -> [[Multivector<S>; 4]; 4] {
    std::array::from_fn(|a| std::array::from_fn(|b| Multivector::vector(std::array::from_fn(|k| gamma[a][k][b]))))
}

/// Γ_{αβ} = g_{αρ} Γ^ρ_β.
pub fn lowered_connection_forms<S: Scalar>(g: &Mat4<S>, forms: &[[Multivector<S>; 4]; 4]) -> [[Multivector<S>; 4]; 4] {
    std::array::from_fn(|a| {
        std::array::from_fn(|b| {
            let mut m = Multivector::zero();
            for r in 0..4 {
                m += forms[r][b].scale(g[a][r]);
            }
            m
        })
    })
}

fn contract_riemann(gamma: &Rank3<f64>, dgamma: &Rank4<f64>) -> Rank4<f64> {
    let mut r = [[[[0.0; 4]; 4]; 4]; 4];
    for c in 0..4 {
        for d in 0..4 {
            for k in 0..4 {
                for l in 0..4 {
                    let mut v = dgamma[k][c][l][d] - dgamma[l][c][k][d];
                    for m in 0..4 {
                        v += gamma[c][k][m] * gamma[m][l][d] - gamma[c][l][m] * gamma[m][k][d];
                    }
                    r[c][d][k][l] = v;
                }
            }
        }
    }
    r
}

/// Connection and curvature at one point.
#[derive(Clone, Debug)]
pub struct GeometryPoint {
    pub point: [f64; 4],
    pub metric: MetricField<f64>,
    /// Γ^ρ_{μν} `[ρ][μ][ν]`.
    pub gamma: Rank3<f64>,
    /// ∂_σ Γ^ρ_{μν} `[σ][ρ][μ][ν]`.
    pub dgamma: Rank4<f64>,
    /// Γ^ρ_{μν} carrying first derivatives.
    pub gamma_jet: Rank3<Jet1>,
    /// R^c_{dkl} `[c][d][k][l]`.
    pub riemann: Rank4<f64>,
    pub ricci: Mat4<f64>,
    pub scalar: f64,
    pub einstein_lower: Mat4<f64>,
    /// G^ι_κ `[ι][κ]`.
    pub einstein_mixed: Mat4<f64>,
    pub einstein_upper: Mat4<f64>,
    pub connection_one_forms: [[Multivector<f64>; 4]; 4],
}

impl GeometryPoint {
    pub fn new(mj: &MetricJet2) -> Self {
        let f1 = mj.level1();
        let gamma_jet = christoffel(&f1.g_inv, &mj.dg1());
        let gamma: Rank3<f64> = gamma_jet.map(|a| a.map(|b| b.map(|x| x.value)));
        let dgamma: Rank4<f64> =
            std::array::from_fn(|s| gamma_jet.map(|a| a.map(|b| b.map(|x| x.partials[s]))));
        let riemann = contract_riemann(&gamma, &dgamma);
        let metric = mj.values();
        let gi = metric.g_inv;
        let ricci: Mat4<f64> = std::array::from_fn(|d| std::array::from_fn(|k| (0..4).map(|a| riemann[a][d][k][a]).sum()));
        let mut scalar = 0.0;
        for d in 0..4 {
            for k in 0..4 {
                scalar += gi[d][k] * ricci[d][k];
            }
        }
        let einstein_lower: Mat4<f64> =
            std::array::from_fn(|m| std::array::from_fn(|n| ricci[m][n] - 0.5 * metric.g[m][n] * scalar));
        let einstein_mixed: Mat4<f64> =
            std::array::from_fn(|i| std::array::from_fn(|k| (0..4).map(|a| gi[i][a] * einstein_lower[a][k]).sum()));
        let einstein_upper: Mat4<f64> =
            std::array::from_fn(|i| std::array::from_fn(|k| (0..4).map(|a| einstein_mixed[i][a] * gi[a][k]).sum()));
        GeometryPoint {
            point: mj.point,
            connection_one_forms: connection_one_forms(&gamma),
            metric,
            gamma,
            dgamma,
            gamma_jet,
            riemann,
            ricci,
            scalar,
            einstein_lower,
            einstein_mixed,
            einstein_upper,
        }
    }

    pub fn trace(&self) -> [f64; 4] {
        christoffel_trace(&self.gamma)
    }

    /// Curvature 2-forms ½ R^a_{bkl} γ^k∧γ^l, indexed `[a][b]`.
    pub fn curvature_forms(&self) -> [[Multivector<f64>; 4]; 4] {
        std::array::from_fn(|a| std::array::from_fn(|b| Multivector::bivector(&self.riemann[a][b])))
    }
}

/// ★G_μ with G_μ = G_{μν}γ^ν.
pub fn einstein_three_forms(gp: &GeometryPoint, m: &CotangentMetric<f64>) -> IndexedFormSet<f64> {
    std::array::from_fn(|mu| m.hodge(&Multivector::vector(gp.einstein_lower[mu])))
}

/// ★G^ρ with G^ρ = G^ρ_ν γ^ν.
pub fn einstein_three_forms_upper(gp: &GeometryPoint, m: &CotangentMetric<f64>) -> IndexedFormSet<f64> {
    std::array::from_fn(|r| m.hodge(&Multivector::vector(gp.einstein_mixed[r])))
}

/// ★G^ρ rebuilt from curvature forms as ½ R_{αβ} ∧ ★(γ^α∧γ^β∧γ^ρ).
pub fn einstein_three_forms_from_curvature(gp: &GeometryPoint, m: &CotangentMetric<f64>) -> IndexedFormSet<f64> {
    let curv = gp.curvature_forms();
    let lowered = lowered_connection_forms(&gp.metric.g, &curv);
    std::array::from_fn(|rho| {
        let mut out = Multivector::zero();
        for a in 0..4 {
            for b in 0..4 {
                let tri = Multivector::gamma(a).wedge(&Multivector::gamma(b)).wedge(&Multivector::gamma(rho));
                out += lowered[a][b].wedge(&m.hodge(&tri)).scale(0.5);
            }
        }
        out
    })
}

/// Hodge coderivative of γ^α computed as −★⁻¹ d★γ^α through one jet level.
pub fn coderivative_of_coframe(mj: &MetricJet2) -> Result<[f64; 4], crate::multivector::MetricError> {
    let m1 = mj.level1().cotangent()?;
    let m0 = mj.cotangent();
    Ok(std::array::from_fn(|a| {
        let star = m1.hodge(&Multivector::gamma(a));
        let d = star.exterior_derivative();
        -m0.hodge_inverse(&d).c[0]
    }))
}
