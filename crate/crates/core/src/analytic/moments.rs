//! Closed-form moments and moments by differentiating M_t(0) at t = 0.

use super::{
    check_q, convergence_abscissa, mgf, AnalyticError, Method, ModelParams, MomentEntry,
    MomentReport, RayDirection, Result, ToleranceConfig,
};
use crate::scalar::{lit, to_f64, Scalar};
use crate::specfun::gamma_fn;

/// Below this convergence abscissa finite-difference stencils no longer fit
/// inside the disc of analyticity, and the moments are already enormous.
pub const MIN_USABLE_ABSCISSA: f64 = 0.02;

/// Fraction of the Taylor radius spanned by the outermost stencil node.
const STENCIL_REACH: f64 = 0.25;

/// G = Γ((1−q)/2) / Γ(1−q/2).
pub fn gamma_ratio<T: Scalar>(q: T) -> Result<T> {
    check_q(q)?;
    let half = lit::<T>(0.5);
    Ok(gamma_fn((T::one() - q) * half)? / gamma_fn(T::one() - q * half)?)
}

/// Moments of order 1–4 at unit intensity.
///
/// The fourth moment is μ₄ = 8[1 + q + q(1+2q)G² + (3q³/4)G⁴]. The variant
/// with (12/q)G⁴ as the last term gives about 1.05e4 at q = 0.4 instead of
/// 65.9721 and tends to ∞ rather than 8 as q → 0; the coefficient 3q³/4 is
/// what high-precision derivatives of M_t(0) give on q ∈ {0.1, …, 0.9}.
fn closed_unit<T: Scalar>(q: T, order: usize) -> Result<T> {
    let g = gamma_ratio(q)?;
    let one = T::one();
    let two = lit::<T>(2.0);
    let g2 = g * g;
    Ok(match order {
        1 => g / T::SQRT_2(),
        2 => q * g2 + two,
        3 => lit::<T>(3.0) / T::SQRT_2() * g * (one + two * q + q * q * g2),
        4 => {
            lit::<T>(8.0)
                * (one
                    + q
                    + q * (one + two * q) * g2
                    + lit::<T>(0.75) * q * q * q * g2 * g2)
        }
        _ => {
            return Err(AnalyticError::OrderOutOfRange {
                order,
                min: 1,
                max: 4,
            })
        }
    })
}

fn scale<T: Scalar>(params: &ModelParams<T>, order: usize) -> T {
    params.length_scale().powi(order as i32)
}

/// Closed-form moments μ_k λ^{−k/2} of an east ray for the requested orders
/// (each in 1..=4).
pub fn closed_moments<T: Scalar>(params: &ModelParams<T>, orders: &[usize]) -> Result<MomentReport<T>> {
    closed_moments_directed(params, RayDirection::East, orders)
}

/// Closed-form moments for a ray travelling in `direction`. A south ray is
/// blocked by east rays, so it sees the east-ray law with q replaced by 1−q.
pub fn closed_moments_directed<T: Scalar>(
    params: &ModelParams<T>,
    direction: RayDirection,
    orders: &[usize],
) -> Result<MomentReport<T>> {
    let q = params.same_direction_probability(direction);
    let entries = orders
        .iter()
        .map(|&k| {
            Ok(MomentEntry {
                order: k,
                value: closed_unit(q, k)? * scale(params, k),
                method: Method::Closed,
                std_error: None,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MomentReport {
        params: *params,
        entries,
    })
}

/// Moments of orders 1..=max_order (at most 6) from Richardson-extrapolated
/// central differences of M_t(0) at t = 0.
///
/// M_t(0) is analytic in |t| < t*(q), the convergence abscissa, so the base
/// step is capped to keep every stencil node within a quarter of that radius.
/// The reported `std_error` is the extrapolation uncertainty.
pub fn mgf_moments<T: Scalar>(
    params: &ModelParams<T>,
    max_order: usize,
    tol: &ToleranceConfig<T>,
) -> Result<MomentReport<T>> {
    if !(1..=6).contains(&max_order) {
        return Err(AnalyticError::OrderOutOfRange {
            order: max_order,
            min: 1,
            max: 6,
        });
    }
    let q = params.q();
    let radius = convergence_abscissa(q)?;
    if let Some(r) = radius {
        if r < lit(MIN_USABLE_ABSCISSA) {
            return Err(AnalyticError::NearBoundary {
                q: to_f64(q),
                abscissa: to_f64(r),
            });
        }
    }
    let mut entries = Vec::with_capacity(max_order);
    for k in 1..=max_order {
        let half_k = lit::<T>(k as f64 / 2.0);
        let h0 = match radius {
            Some(r) => tol.fd_base_step.min(lit::<T>(STENCIL_REACH) * r / half_k),
            None => tol.fd_base_step,
        };
        let d = super::central_derivative(
            |t| mgf(t, T::zero(), q),
            T::zero(),
            k,
            h0,
            tol.richardson_levels,
        )?;
        let s = scale(params, k);
        entries.push(MomentEntry {
            order: k,
            value: d.value * s,
            method: Method::MgfDerivative,
            std_error: Some(d.uncertainty * s),
        });
    }
    Ok(MomentReport {
        params: *params,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    const Q04: [f64; 6] = [
        1.816_959_911_470_171_761_5,
        4.641_074_655_911_755_524_2,
        15.570_055_649_528_772_71,
        65.972_135_856_567_834_362,
        342.242_585_705_418_767_9,
        2_115.518_702_250_820_273_2,
    ];

    #[test]
    fn closed_matches_references() {
        let p = ModelParams::with_q(0.4f64).unwrap();
        let r = closed_moments(&p, &[1, 2, 3, 4]).unwrap();
        for k in 1..=4 {
            assert!(rel(r.value(k).unwrap(), Q04[k - 1]) < 1e-13, "k={k}");
        }
        assert!(r.is_consistent());
    }

    #[test]
    fn closed_rejects_order_five() {
        let p = ModelParams::with_q(0.4f64).unwrap();
        assert!(matches!(
            closed_moments(&p, &[5]),
            Err(AnalyticError::OrderOutOfRange { .. })
        ));
    }

    #[test]
    fn closed_small_q_limit() {
        let p = ModelParams::with_q(1e-8f64).unwrap();
        let r = closed_moments(&p, &[1, 2, 4]).unwrap();
        assert!((r.value(1).unwrap() - (std::f64::consts::PI / 2.0).sqrt()).abs() < 1e-7);
        assert!((r.value(2).unwrap() - 2.0).abs() < 1e-7);
        assert!((r.value(4).unwrap() - 8.0).abs() < 1e-6);
    }

    #[test]
    fn closed_lambda_scaling() {
        let p = ModelParams::new(0.4f64, 4.0).unwrap();
        let r = closed_moments(&p, &[1, 3]).unwrap();
        assert!(rel(r.value(1).unwrap(), Q04[0] / 2.0) < 1e-14);
        assert!(rel(r.value(3).unwrap(), Q04[2] / 8.0) < 1e-14);
    }

    #[test]
    fn derivative_moments_q04() {
        let p = ModelParams::with_q(0.4f64).unwrap();
        let r = mgf_moments(&p, 6, &ToleranceConfig::default()).unwrap();
        let tols = [1e-7, 1e-7, 1e-6, 1e-6, 1e-5, 1e-3];
        for k in 1..=6 {
            let e = r.get(k).unwrap();
            assert_eq!(e.method, Method::MgfDerivative);
            assert!(rel(e.value, Q04[k - 1]) < tols[k - 1], "k={k} got={}", e.value);
            assert!(e.std_error.unwrap() >= 0.0);
        }
    }

    #[test]
    fn derivative_moments_small_q() {
        let p = ModelParams::with_q(1e-6f64).unwrap();
        let r = mgf_moments(&p, 4, &ToleranceConfig::default()).unwrap();
        assert!((r.value(4).unwrap() - 8.000_033_132_826_335_752).abs() < 1e-4);
        assert!((r.value(1).unwrap() - 1.253_315_006_047_477_372_2).abs() < 1e-8);
    }

    #[test]
    fn near_boundary_is_reported() {
        let p = ModelParams::with_q(0.999f64).unwrap();
        assert!(matches!(
            mgf_moments(&p, 2, &ToleranceConfig::default()),
            Err(AnalyticError::NearBoundary { .. })
        ));
    }
}
