//! Truncated first-order Taylor arithmetic in four variables.
//!
//! `Jet<f64>` carries a value and its gradient. Nesting (`Jet<Jet<f64>>`)
//! carries the Hessian as well: the outer partials are themselves jets.

use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet<S> {
    pub value: S,
    pub partials: [S; 4],
}

pub type Jet1 = Jet<f64>;
pub type Jet2 = Jet<Jet<f64>>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("jet nesting depth must be 1 or 2, got {0}")]
pub struct DepthError(pub usize);

impl<S: Scalar> Jet<S> {
    pub fn constant(value: S) -> Self {
        Jet {
            value,
            partials: [S::zero(); 4],
        }
    }

    pub fn variable(value: S, index: usize) -> Self {
        let mut partials = [S::zero(); 4];
        partials[index] = S::one();
        Jet { value, partials }
    }

    /// Apply a scalar function given its value and derivative at `self.value`.
    fn chain(self, value: S, slope: S) -> Self {
        Jet {
            value,
            partials: self.partials.map(|p| p * slope),
        }
    }
}

/// Seeded coordinate variables at nesting depth 1 or 2.
pub enum Seeded {
    Depth1([Jet1; 4]),
    Depth2([Jet2; 4]),
}

pub fn seed_coordinates(x: [f64; 4], depth: usize) -> Result<Seeded, DepthError> {
    match depth {
        1 => Ok(Seeded::Depth1(seed1(x))),
        2 => Ok(Seeded::Depth2(seed2(x))),
        d => Err(DepthError(d)),
    }
}

pub fn seed1(x: [f64; 4]) -> [Jet1; 4] {
    std::array::from_fn(|i| Jet::variable(x[i], i))
}

pub fn seed2(x: [f64; 4]) -> [Jet2; 4] {
    std::array::from_fn(|i| Jet::variable(Jet::variable(x[i], i), i))
}

impl Jet2 {
    /// Value with gradient.
    pub fn first(&self) -> Jet1 {
        self.value
    }

    pub fn hessian(&self) -> [[f64; 4]; 4] {
        std::array::from_fn(|i| self.partials[i].partials)
    }
}

impl<S: Scalar> Add for Jet<S> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Jet {
            value: self.value + o.value,
            partials: std::array::from_fn(|i| self.partials[i] + o.partials[i]),
        }
    }
}

impl<S: Scalar> Sub for Jet<S> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Jet {
            value: self.value - o.value,
            partials: std::array::from_fn(|i| self.partials[i] - o.partials[i]),
        }
    }
}

impl<S: Scalar> Mul for Jet<S> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Jet {
            value: self.value * o.value,
            partials: std::array::from_fn(|i| self.value * o.partials[i] + o.value * self.partials[i]),
        }
    }
}

impl<S: Scalar> Div for Jet<S> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let q = self.value / o.value;
        Jet {
            value: q,
            partials: std::array::from_fn(|i| (self.partials[i] - q * o.partials[i]) / o.value),
        }
    }
}

impl<S: Scalar> Neg for Jet<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Jet {
            value: -self.value,
            partials: self.partials.map(|p| -p),
        }
    }
}

impl<S: Scalar> AddAssign for Jet<S> {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl<S: Scalar> SubAssign for Jet<S> {
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl<S: Scalar> MulAssign for Jet<S> {
    fn mul_assign(&mut self, o: Self) {
        *self = *self * o;
    }
}

impl<S: Scalar> Scalar for Jet<S> {
    fn from_f64(x: f64) -> Self {
        Jet::constant(S::from_f64(x))
    }
    fn re(&self) -> f64 {
        self.value.re()
    }
    fn sqrt(self) -> Self {
        let s = self.value.sqrt();
        self.chain(s, (s + s).recip())
    }
    fn sin(self) -> Self {
        self.chain(self.value.sin(), self.value.cos())
    }
    fn cos(self) -> Self {
        self.chain(self.value.cos(), -self.value.sin())
    }
    fn tan(self) -> Self {
        let t = self.value.tan();
        self.chain(t, S::one() + t * t)
    }
    fn exp(self) -> Self {
        let e = self.value.exp();
        self.chain(e, e)
    }
    fn ln(self) -> Self {
        self.chain(self.value.ln(), self.value.recip())
    }
    fn powi(self, n: i32) -> Self {
        if n == 0 {
            return Self::one();
        }
        let lower = self.value.powi(n - 1);
        self.chain(lower * self.value, lower.scale(n as f64))
    }
    fn abs(self) -> Self {
        if self.value.re() < 0.0 {
            -self
        } else {
            self
        }
    }
    fn all_finite(&self) -> bool {
        self.value.all_finite() && self.partials.iter().all(|p| p.all_finite())
    }
    fn scale(self, k: f64) -> Self {
        Jet {
            value: self.value.scale(k),
            partials: self.partials.map(|p| p.scale(k)),
        }
    }
}

trait Recip {
    fn recip(self) -> Self;
}

impl<S: Scalar> Recip for S {
    fn recip(self) -> Self {
        S::one() / self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_gradient() {
        let x = seed1([3.0, 0.0, 0.0, 0.0]);
        let f = x[0] * x[0];
        assert_eq!(f.value, 9.0);
        assert_eq!(f.partials[0], 6.0);
    }

    #[test]
    fn sine_at_origin() {
        let x = seed1([0.0; 4]);
        let f = x[0].sin();
        assert_eq!(f.value, 0.0);
        assert_eq!(f.partials[0], 1.0);
    }

    #[test]
    fn cube_second_derivative() {
        let x = seed2([2.0, 0.0, 0.0, 0.0]);
        let f = x[0] * x[0] * x[0];
        assert_eq!(f.hessian()[0][0], 12.0);
        assert_eq!(f.first().partials[0], 12.0);
    }

    #[test]
    fn sqrt_and_reciprocal() {
        let x = seed1([4.0, 2.0, 0.0, 0.0]);
        let s = x[0].sqrt();
        assert_eq!((s.value, s.partials[0]), (2.0, 0.25));
        let r = Jet1::one() / x[1];
        assert_eq!((r.value, r.partials[1]), (0.5, -0.25));
    }

    #[test]
    fn rejects_bad_depth() {
        assert!(seed_coordinates([0.0; 4], 0).is_err());
        assert!(seed_coordinates([0.0; 4], 3).is_err());
        assert!(matches!(seed_coordinates([0.0; 4], 2), Ok(Seeded::Depth2(_))));
    }

    #[test]
    fn powi_matches_repeated_product() {
        let x = seed2([1.3, -0.4, 0.2, 0.9]);
        let a = (x[0] * x[1] + x[2]).powi(3);
        let b = x[0] * x[1] + x[2];
        let c = b * b * b;
        for i in 0..4 {
            for j in 0..4 {
                assert!((a.hessian()[i][j] - c.hessian()[i][j]).abs() < 1e-12);
            }
        }
        assert_eq!(x[0].powi(0), Jet2::one());
    }
}
