//! Scalar abstraction shared by the closed-form analytics.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FromPrimitive, Num, ToPrimitive};

/// A field-like number the closed-form moments can be evaluated in.
///
/// Every moment and the average age are rational functions of `rho` and `mu`,
/// so they only need the four arithmetic operations. Densities involve
/// exponentials and require [`Real`].
pub trait Scalar: Num + Clone + PartialOrd + Debug + FromPrimitive + Send + Sync + 'static {
    /// False for infinities and NaN. Exact types are always finite.
    fn is_finite_value(&self) -> bool;

    /// The value returned when a result legitimately diverges, if the type
    /// can represent one (`+inf` for floats, `None` for exact types).
    fn divergent() -> Option<Self>;

    /// Nearest `f64`, used for messages and comparisons against float data.
    fn to_f64_lossy(&self) -> f64;

    fn lit(v: i32) -> Self {
        Self::from_i32(v).expect("small integer literal is representable")
    }
}

/// Floating-point scalars.
pub trait Real: Scalar + Float {}

impl Scalar for f64 {
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
    fn divergent() -> Option<Self> {
        Some(f64::INFINITY)
    }
    fn to_f64_lossy(&self) -> f64 {
        *self
    }
}

impl Scalar for f32 {
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
    fn divergent() -> Option<Self> {
        Some(f32::INFINITY)
    }
    fn to_f64_lossy(&self) -> f64 {
        f64::from(*self)
    }
}

impl Real for f64 {}
impl Real for f32 {}

impl Scalar for BigRational {
    fn is_finite_value(&self) -> bool {
        true
    }
    fn divergent() -> Option<Self> {
        None
    }
    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

/// Exact rational `numer / denom`.
pub fn ratio(numer: i64, denom: i64) -> BigRational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_literals_are_exact() {
        let third = ratio(1, 3);
        assert_eq!(third.clone() * BigRational::lit(3), BigRational::lit(1));
        assert!((third.to_f64_lossy() - 1.0 / 3.0).abs() < 1e-16);
    }

    #[test]
    fn float_finiteness() {
        assert!(1.0f64.is_finite_value());
        assert!(!f64::NAN.is_finite_value());
        assert!(!f32::INFINITY.is_finite_value());
        assert_eq!(f64::divergent(), Some(f64::INFINITY));
        assert!(BigRational::divergent().is_none());
    }
}
