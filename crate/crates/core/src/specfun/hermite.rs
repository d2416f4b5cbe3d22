//! Hermite function H_v(z) of real, non-integer order.
//!
//! [`hermite_fn`] is the production path:
//!
//! * for z ≤ [`HERMITE_SERIES_MAX_Z`] it uses the two-term Kummer combination
//!   `H_v(z) = 2^v √π [ ₁F₁(−v/2; 1/2; z²)/Γ((1−v)/2) − 2z ₁F₁((1−v)/2; 3/2; z²)/Γ(−v/2) ]`;
//! * for larger z the two terms cancel (each grows like e^{z²} while H_v(z)
//!   behaves like (2z)^v), so it instead evaluates the Laplace-type integral
//!   `H_μ(z) = (1/Γ(−μ)) ∫₀^∞ e^{−s²−2sz} s^{−μ−1} ds` at two orders μ ≤ −1
//!   and recurs upward with `H_{μ+1} = 2z H_μ − 2μ H_{μ−1}`, which has no
//!   cancellation for z > 0 and μ < 0.
//!
//! [`hermite_fn_integral`] evaluates the Fourier-type representation
//! `H_v(z) = 2^{v+1}/√π · e^{z²} ∫₀^∞ e^{−u²} u^v cos(2zu − πv/2) du`
//! and serves as the independent check on the production path.

use super::{
    check_finite, integrate, kummer_1f1, rgamma, sin_pi, QuadratureConfig, Result,
    SeriesConfig, SpecFunError,
};
use crate::scalar::{lit, to_f64, Scalar};

/// Largest z evaluated with the Kummer-series combination.
pub const HERMITE_SERIES_MAX_Z: f64 = 1.0;

fn check_order<T: Scalar>(v: T) -> Result<()> {
    check_finite(v)?;
    if v > -T::one() {
        Ok(())
    } else {
        Err(SpecFunError::HermiteOrder { v: to_f64(v) })
    }
}

/// H_v(z) for v > −1 and finite z.
pub fn hermite_fn<T: Scalar>(v: T, z: T) -> Result<T> {
    check_order(v)?;
    check_finite(z)?;
    if z <= lit(HERMITE_SERIES_MAX_Z) {
        kummer_combination(v, z)
    } else {
        laplace_recurrence(v, z)
    }
}

fn kummer_combination<T: Scalar>(v: T, z: T) -> Result<T> {
    let cfg = SeriesConfig::default();
    let half = lit::<T>(0.5);
    let z2 = z * z;
    let even_coef = rgamma((T::one() - v) * half);
    let odd_coef = rgamma(-v * half);
    let even = if even_coef == T::zero() {
        T::zero()
    } else {
        kummer_1f1(-v * half, half, z2, &cfg)? * even_coef
    };
    let odd = if odd_coef == T::zero() || z == T::zero() {
        T::zero()
    } else {
        kummer_1f1((T::one() - v) * half, lit(1.5), z2, &cfg)? * odd_coef
    };
    let two = lit::<T>(2.0);
    Ok(two.powf(v) * T::PI().sqrt() * (even - two * z * odd))
}

/// (1/Γ(−μ)) ∫₀^∞ e^{−s²−2sz} s^{−μ−1} ds for μ ≤ −1, z > 0.
fn laplace_integral<T: Scalar>(mu: T, z: T) -> Result<T> {
    let power = -mu - T::one();
    // beyond s_max the exponent is below −90
    let s_max = -z + (z * z + lit(90.0)).sqrt();
    let cfg = QuadratureConfig {
        abs_tol: T::min_positive_value(),
        rel_tol: lit::<T>(8.0) * T::epsilon(),
        max_subdivisions: 200,
        tail_cutoff: s_max,
    };
    let integrand = |s: T| {
        let e = (-s * (s + z + z)).exp();
        if power == T::zero() {
            e
        } else {
            e * s.powf(power)
        }
    };
    let est = integrate(integrand, T::zero(), s_max, &cfg)?;
    Ok(rgamma(-mu) * est.value)
}

fn laplace_recurrence<T: Scalar>(v: T, z: T) -> Result<T> {
    let steps = (v + T::one()).ceil().to_usize().unwrap_or(1).max(1);
    let mut mu = v - T::from_usize(steps).unwrap();
    let mut lower = laplace_integral(mu - T::one(), z)?;
    let mut upper = laplace_integral(mu, z)?;
    let two = lit::<T>(2.0);
    for _ in 0..steps {
        let next = two * z * upper - two * mu * lower;
        lower = upper;
        upper = next;
        mu = mu + T::one();
    }
    Ok(upper)
}

/// H_v(z) by adaptive quadrature of its Fourier-type integral representation.
///
/// For v < 0 the substitution u = s^{1/(1+v)} on [0, 1] removes the u^v
/// endpoint singularity. The integral is truncated at `cfg.tail_cutoff` (U), dropping
/// at most e^{−U²}/(2U^{1−v}) before the e^{z²} prefactor is applied.
///
/// The integral is oscillatory and of size ~e^{−z²}|H_v(z)|, so round-off
/// limits the absolute accuracy to roughly ε·e^{z²}: about 1e−9 at |z| = 4
/// in `f64`. Arguments with z² beyond ln(T::MAX) are rejected.
pub fn hermite_fn_integral<T: Scalar>(v: T, z: T, cfg: &QuadratureConfig<T>) -> Result<T> {
    check_order(v)?;
    check_finite(z)?;
    let z2 = z * z;
    if z2 >= T::max_value().ln() {
        return Err(SpecFunError::Overflow { z: to_f64(z) });
    }
    let two = lit::<T>(2.0);
    let prefactor = two.powf(v + T::one()) / T::PI().sqrt() * z2.exp();
    // cos(2zu − πv/2) = cos(2zu)·cos(πv/2) + sin(2zu)·sin(πv/2); taking the
    // phase factors from sin_pi avoids rounding πv/2, which the oscillatory
    // integral amplifies.
    let half = lit::<T>(0.5);
    let cos_phase = sin_pi((T::one() - v) * half);
    let sin_phase = sin_pi(v * half);
    let wave = move |u: T| {
        let (s, c) = (two * z * u).sin_cos();
        c * cos_phase + s * sin_phase
    };
    let inner_cfg = QuadratureConfig {
        abs_tol: cfg.abs_tol / prefactor,
        ..*cfg
    };
    let direct = |u: T| (-u * u).exp() * u.powf(v) * wave(u);
    let value = if v < T::zero() {
        // Substitute only where the singular mass sits (u ≤ 1), so the
        // oscillatory remainder is sampled without the s^k rounding.
        let k = (T::one() + v).recip();
        let split = T::one().min(cfg.tail_cutoff);
        let head = integrate(
            |s: T| {
                let u = s.powf(k);
                k * (-u * u).exp() * wave(u)
            },
            T::zero(),
            split.powf(T::one() + v),
            &inner_cfg,
        )?;
        let tail = integrate(direct, split, cfg.tail_cutoff, &inner_cfg)?;
        head.value + tail.value
    } else {
        integrate(direct, T::zero(), cfg.tail_cutoff, &inner_cfg)?.value
    };
    Ok(prefactor * value)
}
