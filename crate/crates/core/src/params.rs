use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("{field} must be positive and finite, got {value}")]
    InvalidRate { field: &'static str, value: String },
    #[error("{0}")]
    Invalid(String),
}

/// Stage rates of the pipeline.
///
/// `lambda` is the transmission rate (mean transmission time `1/lambda`),
/// `mu` the computing rate. `rho = lambda / mu` is recomputed on every
/// construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemParams<T = f64> {
    lambda: T,
    mu: T,
    rho: T,
}

impl<T: Scalar> SystemParams<T> {
    pub fn new(lambda: T, mu: T) -> Result<Self, ParamError> {
        check_rate("lambda", &lambda)?;
        check_rate("mu", &mu)?;
        let rho = lambda.clone() / mu.clone();
        Ok(Self { lambda, mu, rho })
    }

    /// Parameters with `lambda = rho * mu`.
    pub fn from_rho(rho: T, mu: T) -> Result<Self, ParamError> {
        check_rate("rho", &rho)?;
        check_rate("mu", &mu)?;
        Self::new(rho * mu.clone(), mu)
    }

    pub fn lambda(&self) -> T {
        self.lambda.clone()
    }

    pub fn mu(&self) -> T {
        self.mu.clone()
    }

    pub fn rho(&self) -> T {
        self.rho.clone()
    }
}

impl Copy for SystemParams<f64> {}
impl Copy for SystemParams<f32> {}

fn check_rate<T: Scalar>(field: &'static str, value: &T) -> Result<(), ParamError> {
    if value.is_finite_value() && *value > T::zero() {
        Ok(())
    } else {
        Err(ParamError::InvalidRate {
            field,
            value: format!("{value:?}"),
        })
    }
}
