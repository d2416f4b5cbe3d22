use super::{check_finite, Result, SpecFunError};
use crate::scalar::{lit, to_f64, Scalar};

/// Distance to a non-positive integer below which [`gamma_fn`] reports a pole.
pub const DEFAULT_POLE_TOL: f64 = 1e-9;

// Lanczos approximation, g = 7, n = 9 (Godfrey's coefficients).
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Γ(x) for x ≥ 1/2.
fn lanczos_gamma<T: Scalar>(x: T) -> T {
    let z = x - T::one();
    let mut series = lit::<T>(LANCZOS_COEFFS[0]);
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        series = series + lit::<T>(c) / (z + lit(i as f64));
    }
    let base = z + lit(LANCZOS_G + 0.5);
    // Split the power so that base^(z+1/2) does not overflow before e^{-base}
    // brings it back down for moderately large x.
    let half_pow = base.powf((z + lit(0.5)) * lit(0.5));
    (T::PI() + T::PI()).sqrt() * half_pow * (-base).exp() * half_pow * series
}

/// sin(πx), exactly zero at integers.
pub fn sin_pi<T: Scalar>(x: T) -> T {
    let two = lit::<T>(2.0);
    let mut r = x - two * (x / two).round();
    // r in [-1, 1]; fold onto [-1/2, 1/2] using sin(π(1 - r)) = sin(πr).
    let half = lit::<T>(0.5);
    if r > half {
        r = T::one() - r;
    } else if r < -half {
        r = -T::one() - r;
    }
    (T::PI() * r).sin()
}

fn pole_distance<T: Scalar>(x: T) -> Option<T> {
    if x > lit(0.5) {
        None
    } else {
        Some((x - x.round()).abs())
    }
}

/// Γ(x) with the default pole proximity [`DEFAULT_POLE_TOL`].
///
/// Negative non-integer arguments go through the reflection identity
/// Γ(x)Γ(1−x) = π / sin(πx).
pub fn gamma_fn<T: Scalar>(x: T) -> Result<T> {
    gamma_fn_with_pole_tol(x, lit(DEFAULT_POLE_TOL))
}

pub fn gamma_fn_with_pole_tol<T: Scalar>(x: T, pole_tol: T) -> Result<T> {
    check_finite(x)?;
    if let Some(d) = pole_distance(x) {
        if d < pole_tol {
            return Err(SpecFunError::Pole {
                x: to_f64(x),
                tol: to_f64(pole_tol),
            });
        }
    }
    if x >= lit(0.5) {
        Ok(lanczos_gamma(x))
    } else {
        Ok(T::PI() / (sin_pi(x) * lanczos_gamma(T::one() - x)))
    }
}

/// 1/Γ(x), an entire function: exactly zero at the poles of Γ.
pub fn rgamma<T: Scalar>(x: T) -> T {
    if x >= lit(0.5) {
        lanczos_gamma(x).recip()
    } else {
        sin_pi(x) * lanczos_gamma(T::one() - x) / T::PI()
    }
}
