//! Inertial-mass surface integrals over large coordinate spheres.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::dsl::{CompiledMetric, MetricEvalError};
use crate::geometry::christoffel;
use crate::superpotential::s_det;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MassKind {
    /// √−𝐠 S (Freud).
    Einstein,
    /// (−𝐠) S.
    LandauLifshitz,
    /// Unweighted S.
    RawS,
}

impl MassKind {
    pub fn parse(s: &str) -> Option<MassKind> {
        match s {
            "einstein" | "e" | "freud" => Some(MassKind::Einstein),
            "landau_lifshitz" | "ll" => Some(MassKind::LandauLifshitz),
            "raw_s" | "raw" | "s" => Some(MassKind::RawS),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MassKind::Einstein => "einstein",
            MassKind::LandauLifshitz => "landau_lifshitz",
            MassKind::RawS => "raw_s",
        }
    }
}

/// How the integration sphere sits in the chart.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SphereChart {
    /// x^i = r(sinθ cosφ, sinθ sinφ, cosθ), outward normal x^k/r.
    Cartesian,
    /// Coordinates (t, r, θ, φ); the sphere is r = const.
    Spherical,
}

pub fn sphere_chart(m: &CompiledMetric) -> SphereChart {
    let c = &m.spec.coords;
    let is = |i: usize, names: &[&str]| names.contains(&c[i].as_str());
    if is(1, &["r"]) && is(2, &["theta", "th", "θ"]) && is(3, &["phi", "ph", "φ"]) {
        SphereChart::Spherical
    } else {
        SphereChart::Cartesian
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FitModel {
    /// m∞ + c/r.
    Linear,
    /// m∞ + c₁/r + c₂/r².
    Quadratic,
}

#[derive(Debug, thiserror::Error)]
pub enum MassError {
    #[error("metric '{0}' has off-diagonal spatial components; the surface integral assumes a diagonal spatial metric")]
    NotDiagonal(String),
    #[error("{0}")]
    InvalidInput(String),
    #[error("node (r={r}, theta={theta}, phi={phi}): {source}")]
    Domain { r: f64, theta: f64, phi: f64, source: MetricEvalError },
}

#[derive(Clone, Debug)]
pub struct MassOptions {
    pub n_theta: usize,
    pub n_phi: usize,
    pub time: f64,
    pub fit: FitModel,
    /// Fit residual above this is flagged.
    pub fit_threshold: f64,
}

impl Default for MassOptions {
    fn default() -> Self {
        MassOptions { n_theta: 64, n_phi: 128, time: 0.0, fit: FitModel::Quadratic, fit_threshold: 1e-6 }
    }
}

#[derive(Clone, Debug)]
pub struct MassResult {
    pub metric: String,
    pub kind: MassKind,
    pub radii: Vec<f64>,
    pub masses: Vec<f64>,
    pub extrapolated: f64,
    pub fit_residual: f64,
    pub fit_flagged: bool,
    /// m(r) approaches m∞ monotonically over the sampled radii.
    pub monotone: bool,
}

pub fn check_preconditions(m: &CompiledMetric) -> Result<(), MassError> {
    if m.spec.spatially_diagonal() {
        Ok(())
    } else {
        Err(MassError::NotDiagonal(m.name().to_string()))
    }
}

fn sphere_point(chart: SphereChart, time: f64, r: f64, theta: f64, phi: f64) -> [f64; 4] {
    match chart {
        SphereChart::Cartesian => {
            let (st, ct) = theta.sin_cos();
            let (sp, cp) = phi.sin_cos();
            [time, r * st * cp, r * st * sp, r * ct]
        }
        SphereChart::Spherical => [time, r, theta, phi],
    }
}

/// Flux density per unit d(cosθ) dφ: (1/8π) X^{0k0} n_k r² on a Cartesian sphere,
/// (1/8π) X^{0r0} / sinθ on a coordinate sphere.
fn flux(m: &CompiledMetric, kind: MassKind, time: f64, r: f64, theta: f64, phi: f64) -> Result<f64, MassError> {
    let chart = sphere_chart(m);
    let x = sphere_point(chart, time, r, theta, phi);
    let f = m.eval_jet1(x).map_err(|source| MassError::Domain { r, theta, phi, source })?;
    let v = f.value();
    let gamma = christoffel(&v.g_inv, &f.dg());
    let s = s_det(&v.g_inv, &gamma);
    let weight = match kind {
        MassKind::RawS => 1.0,
        MassKind::Einstein => v.sqrt_minus_g(),
        MassKind::LandauLifshitz => -v.det,
    };
    let s0k0 = |k: usize| (0..4).map(|mu| v.g_inv[0][mu] * s[mu][k][0]).sum::<f64>();
    let value = match chart {
        SphereChart::Cartesian => (1..4).map(|k| s0k0(k) * x[k] / r).sum::<f64>() * r * r,
        SphereChart::Spherical => s0k0(1) / theta.sin(),
    };
    Ok(weight * value / (8.0 * PI))
}

/// The sphere integrand including the sinθ area factor.
pub fn surface_integrand(m: &CompiledMetric, kind: MassKind, time: f64, r: f64, theta: f64, phi: f64) -> Result<f64, MassError> {
    Ok(flux(m, kind, time, r, theta, phi)? * theta.sin())
}

/// Gauss–Legendre nodes and weights on [−1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

fn compensated_sum(values: impl Iterator<Item = f64>) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// m(r): Gauss–Legendre in cosθ times the trapezoid rule in φ.
pub fn sphere_integrate(m: &CompiledMetric, kind: MassKind, r: f64, opts: &MassOptions) -> Result<f64, MassError> {
    if opts.n_theta < 8 || opts.n_phi < 8 {
        return Err(MassError::InvalidInput(format!(
            "need at least 8x8 quadrature nodes, got {}x{}",
            opts.n_theta, opts.n_phi
        )));
    }
    let (u, wu) = gauss_legendre(opts.n_theta);
    let dphi = 2.0 * PI / opts.n_phi as f64;
    let nodes: Vec<(usize, usize)> = (0..opts.n_theta).flat_map(|i| (0..opts.n_phi).map(move |j| (i, j))).collect();
    let values: Vec<Result<f64, MassError>> = nodes
        .par_iter()
        .map(|&(i, j)| flux(m, kind, opts.time, r, u[i].acos(), j as f64 * dphi).map(|v| v * wu[i] * dphi))
        .collect();
    let values: Vec<f64> = values.into_iter().collect::<Result<_, _>>()?;
    Ok(compensated_sum(values.into_iter()))
}

/// Least-squares fit in powers of 1/r; returns the intercept and the RMS residual.
pub fn extrapolate(radii: &[f64], masses: &[f64], model: FitModel) -> (f64, f64) {
    let cols = match model {
        FitModel::Linear => 2,
        FitModel::Quadratic => 3,
    };
    let n = radii.len();
    let scale = radii[0];
    // Columns in (scale/r)^k keep the system well conditioned.
    let a = DMatrix::from_fn(n, cols, |i, k| (scale / radii[i]).powi(k as i32));
    let b = DVector::from_column_slice(masses);
    let svd = a.clone().svd(true, true);
    let coef = svd.solve(&b, 1e-14).expect("SVD computed with U and V");
    let res = &a * &coef - b;
    (coef[0], (res.norm_squared() / n as f64).sqrt())
}

pub fn mass_extrapolated(m: &CompiledMetric, kind: MassKind, radii: &[f64], opts: &MassOptions) -> Result<MassResult, MassError> {
    check_preconditions(m)?;
    let needed = match opts.fit {
        FitModel::Linear => 2,
        FitModel::Quadratic => 3,
    };
    if radii.len() < needed.max(3) {
        return Err(MassError::InvalidInput(format!("need at least 3 radii, got {}", radii.len())));
    }
    if radii.windows(2).any(|w| w[1] <= w[0]) || radii[0] <= 0.0 {
        return Err(MassError::InvalidInput("radii must be positive and strictly increasing".into()));
    }
    let masses = radii.iter().map(|&r| sphere_integrate(m, kind, r, opts)).collect::<Result<Vec<_>, _>>()?;
    let (extrapolated, fit_residual) = extrapolate(radii, &masses, opts.fit);
    let dist: Vec<f64> = masses.iter().map(|v| (v - extrapolated).abs()).collect();
    let monotone = dist.windows(2).all(|w| w[1] <= w[0]);
    Ok(MassResult {
        metric: m.name().to_string(),
        kind,
        radii: radii.to_vec(),
        masses,
        extrapolated,
        fit_residual,
        fit_flagged: !extrapolated.is_finite() || fit_residual > opts.fit_threshold * extrapolated.abs().max(1.0),
        monotone,
    })
}
