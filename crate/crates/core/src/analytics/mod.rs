//! Closed-form stationary analysis of the replacement pipeline.
//!
//! Moments and the average age are rational functions of `rho = lambda/mu`
//! scaled by powers of `1/mu`; they are evaluated exactly in the
//! `rho`-grouped form (`(1+rho)^4` etc.), which stays well conditioned for
//! large `rho`. They are generic over [`Scalar`], so exact rationals give
//! exact values. Densities live in [`density`] and need a [`Real`].
//!
//! [`Real`]: crate::Real

pub mod density;

pub use density::{
    pdf_wait, pdf_x_given_ws, pdf_y, pdf_y_given_ws, AnalyticsError, WaitDistribution,
};

use crate::params::SystemParams;
use crate::scalar::Scalar;

/// Below this utilisation the float closed forms are reported as divergent.
pub const RHO_DIVERGENCE_FLOOR: f64 = 1e-12;

/// Powers of `rho` and `1 + rho` shared by the closed forms.
struct RhoPowers<T> {
    rho: T,
    rho2: T,
    rho3: T,
    r1: T,
    r1_2: T,
    r1_4: T,
}

impl<T: Scalar> RhoPowers<T> {
    fn of(p: &SystemParams<T>) -> Self {
        let rho = p.rho();
        let rho2 = rho.clone() * rho.clone();
        let rho3 = rho2.clone() * rho.clone();
        let r1 = T::one() + rho.clone();
        let r1_2 = r1.clone() * r1.clone();
        let r1_4 = r1_2.clone() * r1_2.clone();
        Self {
            rho,
            rho2,
            rho3,
            r1,
            r1_2,
            r1_4,
        }
    }
}

fn divergent_if_degenerate<T: Scalar>(p: &SystemParams<T>) -> Option<T> {
    let floor = T::from_f64(RHO_DIVERGENCE_FLOOR)?;
    if p.rho() < floor {
        T::divergent()
    } else {
        None
    }
}

/// `Pr(W = 0) = mu / (lambda + mu)`: no arrival during the predecessor's service.
pub fn prob_wait_zero<T: Scalar>(p: &SystemParams<T>) -> T {
    T::one() / (T::one() + p.rho())
}

/// Mean waiting time `lambda / (lambda + mu)^2`, the first moment of the
/// mixed atom-plus-exponential waiting distribution.
pub fn mean_wait<T: Scalar>(p: &SystemParams<T>) -> T {
    let r = RhoPowers::of(p);
    r.rho / r.r1_2 / p.mu()
}

/// Mean transmission time of a computed packet.
pub fn mean_x<T: Scalar>(p: &SystemParams<T>) -> T {
    let r = RhoPowers::of(p);
    (T::one() + T::one() / (r.rho.clone() * r.r1.clone()) - r.rho3 / r.r1_4 - r.rho2 / r.r1_2)
        / p.mu()
}

/// Mean gap between transmission completions of consecutive computed packets.
pub fn mean_y<T: Scalar>(p: &SystemParams<T>) -> T {
    let r = RhoPowers::of(p);
    (T::one() + r.rho.clone() + r.rho2) / (r.rho * r.r1) / p.mu()
}

/// Second moment of the inter-arrival gap.
pub fn mean_y_sq<T: Scalar>(p: &SystemParams<T>) -> T {
    let r = RhoPowers::of(p);
    let mu = p.mu();
    let bracket =
        T::one() + T::one() / r.rho2 - r.rho.clone() * (T::one() + T::lit(2) * r.rho) / r.r1_4;
    T::lit(2) * bracket / (mu.clone() * mu)
}

/// `E[(W_{k-1} + S_{k-1} - Y_k)^+ Y_k]`, the waiting-time part of `E[T_k Y_k]`.
pub fn mean_wplus_times_y<T: Scalar>(p: &SystemParams<T>) -> T {
    let r = RhoPowers::of(p);
    let mu = p.mu();
    (T::one() / r.r1 - (T::one() + T::lit(2) * r.rho) / r.r1_4) / (mu.clone() * mu)
}

/// `E[T_k Y_k]`.
pub fn mean_ty<T: Scalar>(p: &SystemParams<T>) -> T {
    let r = RhoPowers::of(p);
    let mu = p.mu();
    (T::one() + T::one() / r.rho.clone() - (T::one() + T::lit(2) * r.rho) / r.r1_4)
        / (mu.clone() * mu)
}

/// Stationary time-averaged age under the one-packet-buffer replacement queue.
///
/// For float types and `rho < 1e-12` this returns `+inf`: the `2/rho` term
/// diverges and evaluating it would otherwise risk `inf - inf = NaN`.
pub fn avg_age_replacement<T: Scalar>(p: &SystemParams<T>) -> T {
    if let Some(inf) = divergent_if_degenerate(p) {
        return inf;
    }
    let r = RhoPowers::of(p);
    let two = T::lit(2);
    let bracket =
        two.clone() + two.clone() / r.rho.clone() + (T::one() + T::lit(3) * r.rho.clone()) / r.r1_2
            - r.rho3 / r.r1_4
            - two * r.r1.clone() / (r.r1 + r.rho2);
    bracket / p.mu()
}

/// The average age assembled from its components,
/// `(E[X] E[Y] + E[TY] + E[Y^2] / 2) / E[Y]`, using `E[X_{k-1} Z_k] = E[X] E[Z]`
/// and `E[Z] = E[Y]`.
pub fn avg_age_from_components<T: Scalar>(p: &SystemParams<T>) -> T {
    if let Some(inf) = divergent_if_degenerate(p) {
        return inf;
    }
    let ey = mean_y(p);
    (mean_x(p) * ey.clone() + mean_ty(p) + mean_y_sq(p) / T::lit(2)) / ey
}

/// Limit of the average age as `rho -> inf`.
pub fn avg_age_min<T: Scalar>(mu: T) -> T {
    T::lit(2) / mu
}
