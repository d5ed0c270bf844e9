#![allow(clippy::needless_range_loop, clippy::suspicious_arithmetic_impl, clippy::large_enum_variant)]

pub mod algebra;
pub mod dsl;
pub mod geometry;
pub mod jet;
pub mod linalg;
pub mod mass;
pub mod metric;
pub mod multivector;
pub mod scalar;
pub mod superpotential;
pub mod testing;
pub mod verifier;
