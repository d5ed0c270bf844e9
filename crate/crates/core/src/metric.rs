//! Metric values with derivatives carried in jet arithmetic.

use crate::jet::{Jet, Jet1, Jet2};
use crate::linalg::{map_mat, Mat4};
use crate::multivector::{CotangentMetric, MetricError};
use crate::scalar::Scalar;

/// g_{μν}, g^{μν} and 𝐠 at one jet level.
#[derive(Clone, Copy, Debug)]
pub struct MetricField<S> {
    pub g: Mat4<S>,
    pub g_inv: Mat4<S>,
    pub det: S,
}

impl<S: Scalar> MetricField<S> {
    pub fn sqrt_minus_g(&self) -> S {
        (-self.det).sqrt()
    }

    pub fn cotangent(&self) -> Result<CotangentMetric<S>, MetricError> {
        CotangentMetric::from_parts(self.g, self.g_inv, self.det)
    }
}

impl<S: Scalar> MetricField<Jet<S>> {
    pub fn value(&self) -> MetricField<S> {
        MetricField {
            g: map_mat(&self.g, |x| x.value),
            g_inv: map_mat(&self.g_inv, |x| x.value),
            det: self.det.value,
        }
    }

    /// ∂_ρ g_{μν} indexed `[ρ][μ][ν]`.
    pub fn dg(&self) -> [Mat4<S>; 4] {
        std::array::from_fn(|r| map_mat(&self.g, |x| x.partials[r]))
    }

    pub fn dg_inv(&self) -> [Mat4<S>; 4] {
        std::array::from_fn(|r| map_mat(&self.g_inv, |x| x.partials[r]))
    }

    pub fn ddet(&self) -> [S; 4] {
        self.det.partials
    }
}

/// Metric 2-jet at a point: values, first and second derivatives of g, g⁻¹ and 𝐠.
#[derive(Clone, Debug)]
pub struct MetricJet2 {
    pub point: [f64; 4],
    pub field: MetricField<Jet2>,
}

impl MetricJet2 {
    /// Values with their gradients.
    pub fn level1(&self) -> MetricField<Jet1> {
        self.field.value()
    }

    pub fn values(&self) -> MetricField<f64> {
        self.level1().value()
    }

    /// ∂_ρ g_{μν} as jets (carrying ∂_σ∂_ρ g_{μν}).
    pub fn dg1(&self) -> [Mat4<Jet1>; 4] {
        self.field.dg()
    }

    pub fn dg_inv1(&self) -> [Mat4<Jet1>; 4] {
        self.field.dg_inv()
    }

    pub fn dg(&self) -> [Mat4<f64>; 4] {
        self.level1().dg()
    }

    /// ∂_σ∂_ρ g_{μν} indexed `[σ][ρ][μ][ν]`.
    pub fn ddg(&self) -> [[Mat4<f64>; 4]; 4] {
        std::array::from_fn(|s| std::array::from_fn(|r| map_mat(&self.field.g, |x| x.partials[r].partials[s])))
    }

    pub fn ddg_inv(&self) -> [[Mat4<f64>; 4]; 4] {
        std::array::from_fn(|s| std::array::from_fn(|r| map_mat(&self.field.g_inv, |x| x.partials[r].partials[s])))
    }

    pub fn det(&self) -> f64 {
        self.field.det.re()
    }

    pub fn sqrt_minus_g(&self) -> f64 {
        (-self.det()).sqrt()
    }

    pub fn cotangent(&self) -> CotangentMetric<f64> {
        self.values().cotangent().expect("validated at evaluation")
    }
}
