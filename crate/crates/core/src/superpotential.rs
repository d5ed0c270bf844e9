//! Superpotentials, Freud's densities and the pseudo-tensors built from them.
//!
//! S components are indexed `[μ][λ][σ]` = S_μ^{λσ}. Matter is identified on shell with T = −G.

use crate::geometry::{christoffel, christoffel_trace, lowered_connection_forms, GeometryPoint, Rank3};
use crate::jet::{Jet, Jet1};
use crate::linalg::{inverse_adjugate, Mat4};
use crate::metric::{MetricField, MetricJet2};
use crate::multivector::{CotangentMetric, IndexedFormSet, Multivector};
use crate::scalar::Scalar;

/// Antisymmetrized bracket form of S from Γ and g^{..}.
pub fn s_det<S: Scalar>(g_inv: &Mat4<S>, gamma: &Rank3<S>) -> Rank3<S> {
    let tr = christoffel_trace(gamma);
    let mut gg = [S::zero(); 4];
    for l in 0..4 {
        for a in 0..4 {
            for k in 0..4 {
                gg[l] += g_inv[a][k] * gamma[l][a][k];
            }
        }
    }
    let mut trup = [S::zero(); 4];
    for l in 0..4 {
        for r in 0..4 {
            trup[l] += g_inv[r][l] * tr[r];
        }
    }
    let bracket = |mu: usize, l: usize, s: usize| {
        let mut v = S::zero();
        for r in 0..4 {
            v += gamma[s][mu][r] * g_inv[r][l];
        }
        if s == mu {
            v += gg[l] - trup[l];
        }
        v
    };
    let mut out = [[[S::zero(); 4]; 4]; 4];
    for mu in 0..4 {
        for l in 0..4 {
            for s in (l + 1)..4 {
                let v = (bracket(mu, l, s) - bracket(mu, s, l)).scale(-0.5);
                out[mu][l][s] = v;
                out[mu][s][l] = -v;
            }
        }
    }
    out
}

/// S_λ^{νρ} = 1/(2(−𝐠)) g_{λσ} ∂_β[(−𝐠)(g^{ρσ}g^{νβ} − g^{σν}g^{ρβ})].
pub fn s_explicit<S: Scalar>(f: &MetricField<Jet<S>>) -> Rank3<S> {
    let w = -f.det;
    let gi = &f.g_inv;
    let v = f.value();
    let pref = S::one() / (w.value + w.value);
    let mut out = [[[S::zero(); 4]; 4]; 4];
    for n in 0..4 {
        for r in (n + 1)..4 {
            let mut inner = [S::zero(); 4];
            for s in 0..4 {
                for b in 0..4 {
                    let term = w * (gi[r][s] * gi[n][b] - gi[s][n] * gi[r][b]);
                    inner[s] += term.partials[b];
                }
            }
            for l in 0..4 {
                let mut acc = S::zero();
                for s in 0..4 {
                    acc += v.g[l][s] * inner[s];
                }
                out[l][n][r] = pref * acc;
                out[l][r][n] = -(pref * acc);
            }
        }
    }
    out
}

/// Density form: S_μ^{νρ} = 1/(2√−𝐠) 𝔤_{μσ} ∂_β(𝔤^{νβ}𝔤^{σρ} − 𝔤^{ρβ}𝔤^{σν}),
/// with 𝔤^{ab} = √−𝐠 g^{ab} and 𝔤_{ab} = g_{ab}/√−𝐠.
pub fn s_density<S: Scalar>(f: &MetricField<Jet<S>>) -> Rank3<S> {
    let root = f.sqrt_minus_g();
    let dens: Mat4<Jet<S>> = std::array::from_fn(|a| std::array::from_fn(|b| root * f.g_inv[a][b]));
    let v = f.value();
    let r0 = root.value;
    let pref = S::one() / (r0 + r0);
    let mut out = [[[S::zero(); 4]; 4]; 4];
    for n in 0..4 {
        for r in (n + 1)..4 {
            let mut inner = [S::zero(); 4];
            for s in 0..4 {
                for b in 0..4 {
                    let term = dens[n][b] * dens[s][r] - dens[r][b] * dens[s][n];
                    inner[s] += term.partials[b];
                }
            }
            for m in 0..4 {
                let mut acc = S::zero();
                for s in 0..4 {
                    acc += v.g[m][s] / r0 * inner[s];
                }
                out[m][n][r] = pref * acc;
                out[m][r][n] = -(pref * acc);
            }
        }
    }
    out
}

/// S^{ρλσ} = g^{ρμ} S_μ^{λσ}.
pub fn raise_label<S: Scalar>(g_inv: &Mat4<S>, s: &Rank3<S>) -> Rank3<S> {
    std::array::from_fn(|r| {
        std::array::from_fn(|l| {
            std::array::from_fn(|k| {
                let mut v = S::zero();
                for m in 0..4 {
                    v += g_inv[r][m] * s[m][l][k];
                }
                v
            })
        })
    })
}

/// The 2-forms ½ X^{λσ} γ_λ∧γ_σ for each label, with γ_λ = g_{λa}γ^a.
pub fn two_forms<S: Scalar>(g: &Mat4<S>, x: &Rank3<S>) -> IndexedFormSet<S> {
    std::array::from_fn(|m| {
        let f: Mat4<S> = std::array::from_fn(|a| {
            std::array::from_fn(|b| {
                let mut v = S::zero();
                for l in 0..4 {
                    for s in 0..4 {
                        v += g[a][l] * x[m][l][s] * g[s][b];
                    }
                }
                v
            })
        });
        Multivector::bivector(&f)
    })
}

/// ★S_μ = ½ Γ_{αβ} ∧ ★(γ^α∧γ^β∧γ_μ), built directly from connection forms.
pub fn star_s_from_connection<S: Scalar>(
    m: &CotangentMetric<S>,
    forms: &[[Multivector<S>; 4]; 4],
) -> IndexedFormSet<S> {
    let low = lowered_connection_forms(&m.g_lower, forms);
    std::array::from_fn(|mu| {
        let gm = m.gamma_lower(mu);
        let mut out = Multivector::zero();
        for a in 0..4 {
            for b in 0..4 {
                let tri = Multivector::gamma(a).wedge(&Multivector::gamma(b)).wedge(&gm);
                out += low[a][b].wedge(&m.hodge(&tri)).scale_f64(0.5);
            }
        }
        out
    })
}

/// ★t^ρ = −½ Γ_{αβ} ∧ [Γ^ρ_σ ∧ ★(γ^α∧γ^β∧γ^σ) + Γ^β_σ ∧ ★(γ^α∧γ^σ∧γ^ρ)].
pub fn pseudo_t_forms<S: Scalar>(m: &CotangentMetric<S>, forms: &[[Multivector<S>; 4]; 4]) -> IndexedFormSet<S> {
    let low = lowered_connection_forms(&m.g_lower, forms);
    let g = |i: usize| Multivector::<S>::gamma(i);
    let mut tri = [[[Multivector::zero(); 4]; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                if a != b && b != c && a != c {
                    tri[a][b][c] = m.hodge(&g(a).wedge(&g(b)).wedge(&g(c)));
                }
            }
        }
    }
    std::array::from_fn(|rho| {
        let mut out = Multivector::zero();
        for a in 0..4 {
            for b in 0..4 {
                let mut inner = Multivector::zero();
                for s in 0..4 {
                    inner += forms[rho][s].wedge(&tri[a][b][s]);
                    inner += forms[b][s].wedge(&tri[a][s][rho]);
                }
                out += low[a][b].wedge(&inner);
            }
        }
        out.scale_f64(-0.5)
    })
}

/// Components X^{ρσ} of labelled 3-forms ★X^ρ, via ★⁻¹ and raising.
pub fn three_form_components<S: Scalar>(m: &CotangentMetric<S>, forms: &IndexedFormSet<S>) -> Mat4<S> {
    std::array::from_fn(|r| m.raise(m.hodge_inverse(&forms[r]).vector_part()))
}

/// 𝔏 = 𝔤^{μν}[Γ^σ_{μρ}Γ^ρ_{σν} − Γ^σ_{μν}Γ^ρ_{σρ}].
pub fn lagrangian_density<S: Scalar>(g_inv: &Mat4<S>, sqrt_minus_g: S, gamma: &Rank3<S>) -> S {
    let tr = christoffel_trace(gamma);
    let mut acc = S::zero();
    for m in 0..4 {
        for n in 0..4 {
            let mut b = S::zero();
            for s in 0..4 {
                for r in 0..4 {
                    b += gamma[s][m][r] * gamma[r][s][n];
                }
                b -= gamma[s][m][n] * tr[s];
            }
            acc += g_inv[m][n] * b;
        }
    }
    sqrt_minus_g * acc
}

/// 𝔏 as a function of g^{μν} and ∂_ι g^{μν} (`[ι][μ][ν]`).
pub fn lagrangian_from_inverse<S: Scalar>(g_inv: &Mat4<S>, dg_inv: &[Mat4<S>; 4]) -> S {
    let (g, det_inv) = inverse_adjugate(g_inv);
    let sqrt_minus_g = (-(S::one() / det_inv)).sqrt();
    let dg: [Mat4<S>; 4] = std::array::from_fn(|i| {
        std::array::from_fn(|m| {
            std::array::from_fn(|n| {
                let mut v = S::zero();
                for a in 0..4 {
                    for b in 0..4 {
                        v -= g[m][a] * dg_inv[i][a][b] * g[b][n];
                    }
                }
                v
            })
        })
    });
    let gamma = christoffel(g_inv, &dg);
    lagrangian_density(g_inv, sqrt_minus_g, &gamma)
}

/// ∂𝔏/∂(∂_ι g^{μν}) `[ι][μ][ν]`, with μ≠ν slots tied together so the value is the derivative
/// with respect to the shared symmetric entry.
pub fn lagrangian_slot_derivatives(g_inv: &Mat4<f64>, dg_inv: &[Mat4<f64>; 4]) -> [Mat4<f64>; 4] {
    let mut out = [[[0.0; 4]; 4]; 4];
    let gi: Mat4<Jet1> = std::array::from_fn(|a| std::array::from_fn(|b| Jet::constant(g_inv[a][b])));
    for m in 0..4 {
        for n in m..4 {
            let dj: [Mat4<Jet1>; 4] = std::array::from_fn(|i| {
                std::array::from_fn(|a| {
                    std::array::from_fn(|b| {
                        let mut j = Jet::constant(dg_inv[i][a][b]);
                        if (a, b) == (m, n) || (a, b) == (n, m) {
                            j.partials[i] = 1.0;
                        }
                        j
                    })
                })
            });
            let l = lagrangian_from_inverse(&gi, &dj);
            for i in 0..4 {
                out[i][m][n] = l.partials[i];
                out[i][n][m] = l.partials[i];
            }
        }
    }
    out
}

/// Superpotential and pseudo-tensor data at one point.
#[derive(Clone, Debug)]
pub struct SuperpotentialPoint {
    /// S_μ^{λσ}.
    pub s: Rank3<f64>,
    /// S_μ^{λσ} carrying first derivatives.
    pub s_jet: Rank3<Jet1>,
    /// ★S_μ.
    pub s_forms: IndexedFormSet<f64>,
    /// 𝔘_μ^{νρ} = √−𝐠 S_μ^{νρ}.
    pub u: Rank3<f64>,
    /// 𝔘_κ^ι = ∂_ρ 𝔘_κ^{ρι} `[κ][ι]`.
    pub u_div: Mat4<f64>,
    /// The same divergence through the product-rule split.
    pub u_div_split: Mat4<f64>,
    /// ★U_λ = √−𝐠 ★S_λ.
    pub u_forms: IndexedFormSet<f64>,
    /// H^μ = 𝐠 S^{μλσ}.
    pub h: Rank3<f64>,
    /// ★t^ρ.
    pub t_forms: IndexedFormSet<f64>,
    /// t^{ρσ}.
    pub t_upper: Mat4<f64>,
    /// t_λ^ρ `[λ][ρ]`.
    pub t_mixed: Mat4<f64>,
    /// Einstein pseudo-tensor density 𝔱_λ^ρ `[λ][ρ]`.
    pub einstein: Mat4<f64>,
    /// ½(δ_λ^ρ 𝔏 + Γ^ρ_{μν}∂_λ𝔤^{μν} − Γ^ν_{μν}∂_λ𝔤^{μρ}).
    pub einstein_canonical: Mat4<f64>,
    /// Landau-Lifshitz 𝔩^{μν}.
    pub ll: Mat4<f64>,
    /// ★𝔩^μ.
    pub ll_forms: IndexedFormSet<f64>,
    pub lagrangian: f64,
    pub theta: f64,
}

impl SuperpotentialPoint {
    pub fn new(mj: &MetricJet2, gp: &GeometryPoint) -> Self {
        let f1 = mj.level1();
        let m = mj.cotangent();
        let g = &gp.metric.g;
        let gi = &gp.metric.g_inv;
        let det = gp.metric.det;
        let root = gp.metric.sqrt_minus_g();
        let tr = gp.trace();

        let s_jet = s_det(&f1.g_inv, &gp.gamma_jet);
        let s = s_jet.map(|a| a.map(|b| b.map(|x| x.value)));
        let s_forms: IndexedFormSet<f64> = two_forms(g, &s).map(|f| m.hodge(&f));
        let u = s.map(|a| a.map(|b| b.map(|x| root * x)));
        let root1 = f1.sqrt_minus_g();
        let mut u_div = [[0.0; 4]; 4];
        let mut u_div_split = [[0.0; 4]; 4];
        for k in 0..4 {
            for i in 0..4 {
                for r in 0..4 {
                    u_div[k][i] += (root1 * s_jet[k][r][i]).partials[r];
                    u_div_split[k][i] += root * (tr[r] * s[k][r][i] + s_jet[k][r][i].partials[r]);
                }
            }
        }
        let u_forms = s_forms.map(|f| f.scale(root));
        let s_up = raise_label(gi, &s);
        let h = s_up.map(|a| a.map(|b| b.map(|x| det * x)));

        let t_forms = pseudo_t_forms(&m, &gp.connection_one_forms);
        let t_upper = three_form_components(&m, &t_forms);
        let t_mixed: Mat4<f64> =
            std::array::from_fn(|l| std::array::from_fn(|r| (0..4).map(|a| g[l][a] * t_upper[a][r]).sum()));

        let dg = mj.dg();
        let mut einstein = [[0.0; 4]; 4];
        for l in 0..4 {
            for r in 0..4 {
                let mut v = t_mixed[l][r];
                for k in 0..4 {
                    for mu in 0..4 {
                        v += dg[k][l][mu] * s_up[mu][k][r];
                    }
                }
                einstein[l][r] = root * v;
            }
        }

        let lagrangian = lagrangian_density(gi, root, &gp.gamma);
        let dens_d = density_inverse_derivatives(&f1);
        let mut einstein_canonical = [[0.0; 4]; 4];
        for l in 0..4 {
            for r in 0..4 {
                let mut p = if l == r { lagrangian } else { 0.0 };
                for a in 0..4 {
                    for b in 0..4 {
                        p += gp.gamma[r][a][b] * dens_d[l][a][b] - gp.gamma[b][a][b] * dens_d[l][a][r];
                    }
                }
                einstein_canonical[l][r] = 0.5 * p;
            }
        }

        let ll: Mat4<f64> = std::array::from_fn(|a| {
            std::array::from_fn(|b| {
                let mut v = t_upper[a][b];
                for k in 0..4 {
                    v += tr[k] * s_up[a][k][b];
                }
                -det * v
            })
        });
        let trace_form = Multivector::vector(tr);
        let s_up_forms: IndexedFormSet<f64> = two_forms(g, &s_up).map(|f| m.hodge(&f));
        let ll_forms: IndexedFormSet<f64> =
            std::array::from_fn(|a| (t_forms[a] - trace_form.wedge(&s_up_forms[a])).scale(-det));

        SuperpotentialPoint {
            s,
            s_jet,
            s_forms,
            u,
            u_div,
            u_div_split,
            u_forms,
            h,
            t_forms,
            t_upper,
            t_mixed,
            einstein,
            einstein_canonical,
            ll,
            ll_forms,
            lagrangian,
            theta: lagrangian / root,
        }
    }
}

/// ∂_λ 𝔤^{μν} `[λ][μ][ν]`.
pub fn density_inverse_derivatives(f: &MetricField<Jet1>) -> [Mat4<f64>; 4] {
    let root = f.sqrt_minus_g();
    std::array::from_fn(|l| std::array::from_fn(|a| std::array::from_fn(|b| (root * f.g_inv[a][b]).partials[l])))
}

/// d★S^ρ with the label raised, one 4-form per ρ.
pub fn d_star_s_upper(mj: &MetricJet2, gp: &GeometryPoint) -> Result<IndexedFormSet<f64>, crate::multivector::MetricError> {
    let f1 = mj.level1();
    let m1 = f1.cotangent()?;
    let s_jet = s_det(&f1.g_inv, &gp.gamma_jet);
    let s_up = raise_label(&f1.g_inv, &s_jet);
    Ok(two_forms(&f1.g, &s_up).map(|f| m1.hodge(&f).exterior_derivative()))
}

/// (1/√−𝐠) ∂_κ(√−𝐠 S^{ρκσ}) `[ρ][σ]`.
pub fn covariant_divergence_upper(mj: &MetricJet2, gp: &GeometryPoint) -> Mat4<f64> {
    let f1 = mj.level1();
    let root = f1.sqrt_minus_g();
    let s_up = raise_label(&f1.g_inv, &s_det(&f1.g_inv, &gp.gamma_jet));
    std::array::from_fn(|r| {
        std::array::from_fn(|s| {
            let mut v = 0.0;
            for k in 0..4 {
                v += (root * s_up[r][k][s]).partials[k];
            }
            v / root.value
        })
    })
}
