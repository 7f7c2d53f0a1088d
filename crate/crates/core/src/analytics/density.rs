//! Densities of the waiting time, the transmission time of computed packets
//! and the inter-arrival gap between computed packets.

use thiserror::Error;

use crate::params::SystemParams;
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalyticsError {
    #[error("{what} out of domain: {value}")]
    Domain { what: &'static str, value: String },
}

fn domain<T: Real>(what: &'static str, value: T) -> AnalyticsError {
    AnalyticsError::Domain {
        what,
        value: format!("{value:?}"),
    }
}

/// Mixed distribution of the waiting time: an atom at zero plus the density
/// `lambda * exp(-(lambda + mu) w)` on `w > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaitDistribution<T> {
    pub atom_at_zero: T,
    pub density_rate_coeff: T,
    pub density_decay: T,
}

impl<T: Real> WaitDistribution<T> {
    pub fn of(p: &SystemParams<T>) -> Self {
        Self {
            atom_at_zero: p.mu() / (p.lambda() + p.mu()),
            density_rate_coeff: p.lambda(),
            density_decay: p.lambda() + p.mu(),
        }
    }

    /// Mass carried by the continuous part, `lambda / (lambda + mu)`.
    pub fn continuous_mass(&self) -> T {
        self.density_rate_coeff / self.density_decay
    }

    /// Continuous-part density at `w > 0`.
    pub fn density(&self, w: T) -> T {
        self.density_rate_coeff * (-self.density_decay * w).exp()
    }
}

/// Density of the continuous part of the waiting time. The atom at `w = 0`
/// is [`prob_wait_zero`](super::prob_wait_zero); `w <= 0` is a domain error.
pub fn pdf_wait<T: Real>(w: T, p: &SystemParams<T>) -> Result<T, AnalyticsError> {
    if w <= T::zero() || !w.is_finite() {
        return Err(domain("w", w));
    }
    Ok(WaitDistribution::of(p).density(w))
}

fn check_ws<T: Real>(w: T, s: T) -> Result<(), AnalyticsError> {
    if w < T::zero() || !w.is_finite() {
        return Err(domain("w", w));
    }
    if s <= T::zero() || !s.is_finite() {
        return Err(domain("s", s));
    }
    Ok(())
}

/// Density of a computed packet's transmission time given the predecessor's
/// waiting time `w` and service time `s`.
///
/// Five branches, tested in this order with the first match winning:
/// `x <= min(w, s)`, `w < x <= s`, `max(w, s) < x <= w + s`, `x > w + s`,
/// and zero otherwise (`s < x <= w`).
pub fn pdf_x_given_ws<T: Real>(x: T, w: T, s: T, p: &SystemParams<T>) -> Result<T, AnalyticsError> {
    if x < T::zero() || x.is_nan() {
        return Err(domain("x", x));
    }
    check_ws(w, s)?;
    let lambda = p.lambda();
    let at_s = lambda * (-lambda * s).exp();
    let value = if x <= w.min(s) {
        lambda * (-lambda * x).exp() - at_s
    } else if w < x && x <= s {
        lambda * (-lambda * x).exp()
    } else if w.max(s) < x && x <= w + s {
        at_s
    } else if x > w + s {
        lambda * (-lambda * (x - w)).exp()
    } else {
        T::zero()
    };
    Ok(value)
}

/// Density of the inter-arrival gap between consecutive computed packets
/// given the predecessor's waiting time `w` and service time `s`.
pub fn pdf_y_given_ws<T: Real>(y: T, w: T, s: T, p: &SystemParams<T>) -> Result<T, AnalyticsError> {
    if y < T::zero() || y.is_nan() {
        return Err(domain("y", y));
    }
    check_ws(w, s)?;
    let lambda = p.lambda();
    let value = if y < w {
        T::zero()
    } else if y < w + s {
        lambda * (-lambda * (w + s - y)).exp()
    } else {
        lambda * (-lambda * (y - w)).exp()
    };
    Ok(value)
}

/// Unconditional density of the inter-arrival gap between computed packets.
pub fn pdf_y<T: Real>(y: T, p: &SystemParams<T>) -> Result<T, AnalyticsError> {
    if y < T::zero() || !y.is_finite() {
        return Err(domain("y", y));
    }
    let lambda = p.lambda();
    let mu = p.mu();
    let two = T::lit(2);
    let sum = lambda + mu;
    let l2_over_mu = lambda * lambda / mu;
    let lm_over_sum = lambda * mu / sum;
    let first = (l2_over_mu + lm_over_sum) * (-lambda * y).exp();
    let second = lambda * mu * (lambda + two * mu) / (sum * sum) * (-mu * y).exp();
    let third = (l2_over_mu + two * lm_over_sum + lambda * lambda * y) * (-sum * y).exp();
    Ok(first + second - third)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Params;
    use approx::assert_relative_eq;

    fn make(lambda: f64, mu: f64) -> Params {
        Params::new(lambda, mu).unwrap()
    }

    #[test]
    fn wait_density_values() {
        let q = make(1.0, 1.0);
        assert_relative_eq!(pdf_wait(1e-300, &q).unwrap(), 1.0);
        let q = make(2.0, 1.0);
        assert_relative_eq!(
            pdf_wait(1.0, &q).unwrap(),
            2.0 * (-3.0f64).exp(),
            max_relative = 1e-15
        );
        assert!((pdf_wait(1.0, &q).unwrap() - 0.0996).abs() < 1e-4);
        assert!(pdf_wait(0.0, &q).is_err());
        assert!(pdf_wait(-1.0, &q).is_err());
    }

    #[test]
    fn wait_distribution_mass() {
        let dist = WaitDistribution::of(&make(1.0, 3.0));
        assert_relative_eq!(
            dist.atom_at_zero + dist.continuous_mass(),
            1.0,
            max_relative = 1e-15
        );
        assert_eq!(dist.density_decay, 4.0);
    }

    #[test]
    fn x_density_branches() {
        let q = make(1.0, 1.0);
        // x > w + s
        assert_relative_eq!(
            pdf_x_given_ws(3.0, 1.0, 1.0, &q).unwrap(),
            (-2.0f64).exp(),
            max_relative = 1e-15
        );
        // x <= min(w, s)
        let v = pdf_x_given_ws(0.5, 1.0, 2.0, &q).unwrap();
        assert_relative_eq!(v, (-0.5f64).exp() - (-2.0f64).exp(), max_relative = 1e-15);
        // w < x <= s
        assert_relative_eq!(pdf_x_given_ws(1.5, 1.0, 2.0, &q).unwrap(), (-1.5f64).exp());
        // max(w, s) < x <= w + s
        assert_relative_eq!(pdf_x_given_ws(2.5, 1.0, 2.0, &q).unwrap(), (-2.0f64).exp());
        // s < x <= w has no mass
        assert_eq!(pdf_x_given_ws(1.5, 2.0, 1.0, &q).unwrap(), 0.0);
    }

    #[test]
    fn x_density_ties_take_earlier_branch() {
        let q = make(1.3, 1.0);
        // x == w == s: first branch.
        let v = pdf_x_given_ws(1.0, 1.0, 1.0, &q).unwrap();
        assert_eq!(v, 0.0);
        // x == w + s: third branch, not the fourth.
        let v = pdf_x_given_ws(2.0, 1.0, 1.0, &q).unwrap();
        assert_relative_eq!(v, 1.3 * (-1.3f64).exp(), max_relative = 1e-15);
    }

    #[test]
    fn x_density_without_wait_is_exponential() {
        let q = make(1.7, 1.0);
        for s in [0.2, 1.0, 4.0] {
            for x in [1e-9, 0.1, 0.2, 0.5, 1.0, 3.0, 10.0] {
                let got = pdf_x_given_ws(x, 0.0, s, &q).unwrap();
                assert_relative_eq!(got, 1.7 * (-1.7 * x).exp(), max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn x_density_domain() {
        let q = make(1.0, 1.0);
        assert!(pdf_x_given_ws(-0.1, 0.0, 1.0, &q).is_err());
        assert!(pdf_x_given_ws(0.1, -0.1, 1.0, &q).is_err());
        assert!(pdf_x_given_ws(0.1, 0.0, 0.0, &q).is_err());
    }

    #[test]
    fn y_conditional_density() {
        let q = make(1.0, 1.0);
        assert_eq!(pdf_y_given_ws(0.5, 1.0, 1.0, &q).unwrap(), 0.0);
        let lambda: f64 = 2.0;
        let q = make(lambda, 1.0);
        let (w, s) = (0.3, 0.9);
        let junction = pdf_y_given_ws(w + s, w, s, &q).unwrap();
        let below = lambda * (-lambda * (w + s - (w + s))).exp();
        assert_relative_eq!(junction, lambda * (-lambda * s).exp(), max_relative = 1e-15);
        // The left branch tends to lambda at the junction; the right one is lambda*e^{-lambda s}.
        assert_eq!(below, lambda);
        assert!(pdf_y_given_ws(-1.0, w, s, &q).is_err());
        assert!(pdf_y_given_ws(1.0, w, -s, &q).is_err());
    }

    #[test]
    fn y_density_at_zero() {
        let q = make(1.0, 1.0);
        let v = pdf_y(0.0, &q).unwrap();
        assert_relative_eq!(v, 0.25, max_relative = 1e-15);
        // Pr(W=0) * integral of lambda e^{-lambda s} mu e^{-mu s} ds.
        assert_relative_eq!(v, 0.5 * 0.5, max_relative = 1e-15);
        assert!(pdf_y(-0.1, &q).is_err());
    }

    #[test]
    fn y_density_nonnegative() {
        for (lambda, mu) in [(0.1, 1.0), (1.0, 1.0), (5.0, 0.5), (40.0, 2.0)] {
            let q = make(lambda, mu);
            for i in 0..400 {
                let y = i as f64 * 0.05 / mu;
                assert!(pdf_y(y, &q).unwrap() >= -1e-15, "negative density at {y}");
            }
        }
    }
}
