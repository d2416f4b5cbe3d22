use super::{check_finite, Result, SeriesConfig, SpecFunError};
use crate::scalar::{to_f64, Scalar};

/// Ascending series Σ (a)_k z^k / ((b)_k k!), for z ≥ 0.
fn ascending_series<T: Scalar>(a: T, b: T, z: T, cfg: &SeriesConfig<T>) -> Result<T> {
    let mut term = T::one();
    let mut sum = T::one();
    for k in 0..cfg.max_terms {
        let kf = T::from_usize(k).unwrap();
        term = term * (a + kf) / (b + kf) * z / (kf + T::one());
        sum = sum + term;
        if term == T::zero() || term.abs() < cfg.term_rel_tol * sum.abs() {
            return Ok(sum);
        }
    }
    Err(SpecFunError::SeriesNonConvergence {
        a: to_f64(a),
        b: to_f64(b),
        z: to_f64(z),
        terms: cfg.max_terms,
    })
}

/// Kummer's confluent hypergeometric function ₁F₁(a; b; z).
///
/// Negative arguments are mapped through ₁F₁(a;b;z) = e^z ₁F₁(b−a;b;−z) so
/// the series is only ever summed with non-negative z.
pub fn kummer_1f1<T: Scalar>(a: T, b: T, z: T, cfg: &SeriesConfig<T>) -> Result<T> {
    check_finite(a)?;
    check_finite(b)?;
    check_finite(z)?;
    if b <= T::zero() && b == b.round() {
        return Err(SpecFunError::InvalidParameter(format!(
            "1F1 lower parameter b = {} is a non-positive integer",
            to_f64(b)
        )));
    }
    if z == T::zero() {
        return Ok(T::one());
    }
    if z < T::zero() {
        Ok(z.exp() * ascending_series(b - a, b, -z, cfg)?)
    } else {
        ascending_series(a, b, z, cfg)
    }
}
