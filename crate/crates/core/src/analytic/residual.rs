//! Residuals of the defining equations, used as test probes.

use super::{AnalyticError, MgfCurve, Result};
use crate::scalar::{lit, Scalar};
use crate::specfun::{erfc_fn, hermite_fn, integrate, QuadratureConfig};

/// Offset past t at which the erfc weight of the integral equation drops
/// below 1e−19.
const ERFC_TRUNCATION: f64 = 9.0;

/// M″ − (y−t)M′ − (1−q)M + (1−q), with y-derivatives by central differences
/// of step `h`.
pub fn ode_residual<T: Scalar>(t: T, y: T, q: T, h: T) -> Result<T> {
    if !(h > T::zero()) || !(y >= h) {
        return Err(AnalyticError::InvalidConfig(
            "ode_residual needs y >= h > 0".into(),
        ));
    }
    let curve = MgfCurve::new(t, q)?;
    let lo = curve.value(y - h)?;
    let mid = curve.value(y)?;
    let hi = curve.value(y + h)?;
    let two = lit::<T>(2.0);
    let d1 = (hi - lo) / (two * h);
    let d2 = (hi - two * mid + lo) / (h * h);
    let p = T::one() - q;
    Ok(d2 - (y - t) * d1 - p * mid + p)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralResidual<T> {
    /// M_t(0) minus the right-hand side of the fixed-point relation.
    pub residual: T,
    /// Bound on the part of the u-integral dropped past t + 9, already
    /// multiplied by its prefactor.
    pub tail_bound: T,
    /// Quadrature error estimate, multiplied by the same prefactor.
    pub quadrature_error: T,
}

/// Residual of the integral equation at y = 0:
/// M_t(0) − (1−q)[1 + √(π/2) t e^{t²/2} erfc(−t/√2)]
///        − q e^{t²/2} √(π/2) ∫₀^∞ erfc((u−t)/√2) M_t(u) du.
///
/// The u-integral is truncated at t + 9. Past that point H_{q−1} is positive
/// and decreasing, so |M_t(u)| ≤ 1 + |c| H_{q−1}(9/√2) bounds the tail.
pub fn integral_equation_residual<T: Scalar>(
    t: T,
    q: T,
    quad: &QuadratureConfig<T>,
) -> Result<IntegralResidual<T>> {
    let curve = MgfCurve::new(t, q)?;
    let sqrt2 = T::SQRT_2();
    let root_half_pi = (T::PI() * lit(0.5)).sqrt();
    let growth = (t * t * lit(0.5)).exp();
    let upper = (t + lit(ERFC_TRUNCATION)).max(T::zero());

    let mut failure = None;
    let est = integrate(
        |u: T| {
            let w = erfc_fn((u - t) / sqrt2);
            let m = curve.value(u);
            match (w, m) {
                (Ok(w), Ok(m)) => w * m,
                (Err(e), _) => {
                    failure.get_or_insert(AnalyticError::from(e));
                    T::nan()
                }
                (_, Err(e)) => {
                    failure.get_or_insert(e);
                    T::nan()
                }
            }
        },
        T::zero(),
        upper,
        quad,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let est = est?;

    let p = T::one() - q;
    let prefactor = q * growth * root_half_pi;
    let rhs = p * (T::one() + root_half_pi * t * growth * erfc_fn(-t / sqrt2)?)
        + prefactor * est.value;

    let z_u = (upper - t) / sqrt2;
    let h_bound = T::one() + curve.c().abs() * hermite_fn(q - T::one(), z_u)?;
    let erfc_tail = sqrt2 * ((-z_u * z_u).exp() / T::PI().sqrt() - z_u * erfc_fn(z_u)?);
    Ok(IntegralResidual {
        residual: curve.value(T::zero())? - rhs,
        tail_bound: prefactor * h_bound * erfc_tail.max(T::zero()),
        quadrature_error: prefactor * est.abs_error,
    })
}
