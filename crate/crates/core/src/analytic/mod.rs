//! Closed-form layer: the moment generating function of terminal ray length,
//! its building blocks, moments, and residual probes.
//!
//! All internal formulas are written for unit intensity. Lengths scale as
//! λ^{−1/2}, so the λ-aware entry points ([`mgf_scaled`], [`closed_moments`],
//! [`mgf_moments`]) rescale `t`, `y` and the moments at the boundary.
//!
//! The closed form has a simple pole at the convergence abscissa t*(q)
//! (see [`convergence_abscissa`]). For t ≥ t*(q) the formula is an analytic
//! continuation, not an expectation: [`MgfPoint::converges`] records which
//! side of the pole a point lies on.

mod mgf;
mod moments;
mod residual;
mod richardson;

pub use mgf::{
    c_coefficient, convergence_abscissa, j_integral, k_integral, mgf, mgf_point, mgf_scaled,
    mgf_special_half, MgfCurve, T_MAX,
};
pub use moments::{
    closed_moments, closed_moments_directed, gamma_ratio, mgf_moments, MIN_USABLE_ABSCISSA,
};
pub use residual::{integral_equation_residual, ode_residual, IntegralResidual};
pub use richardson::{central_derivative, Derivative};

use serde::Serialize;
use thiserror::Error;

use crate::scalar::{lit, to_f64, Scalar};
use crate::specfun::SpecFunError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalyticError {
    #[error(transparent)]
    Special(#[from] SpecFunError),
    #[error("invalid model parameters: {0}")]
    InvalidParams(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("t = {t} is outside the validated domain |t| <= {t_max}")]
    OutsideValidatedDomain { t: f64, t_max: f64 },
    #[error("live-zone height y = {y} must be non-negative")]
    NegativeHeight { y: f64 },
    #[error("MGF denominator {value:e} vanishes at t = {t}, q = {q}")]
    NearZeroDenominator { t: f64, q: f64, value: f64 },
    #[error("Richardson extrapolation for derivative order {order} did not contract")]
    ExtrapolationDivergence { order: usize },
    #[error("moment order {order} outside the supported range {min}..={max}")]
    OrderOutOfRange { order: usize, min: usize, max: usize },
    #[error(
        "q = {q} is too close to 1: the MGF converges only for t < {abscissa:.3e}, \
         and every moment diverges as q -> 1"
    )]
    NearBoundary { q: f64, abscissa: f64 },
}

pub type Result<T> = std::result::Result<T, AnalyticError>;

/// H-seed probability `q` and Poisson intensity `lambda`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams<T> {
    q: T,
    lambda: T,
}

impl<T: Scalar> ModelParams<T> {
    pub fn new(q: T, lambda: T) -> Result<Self> {
        if !(q > T::zero() && q < T::one()) {
            return Err(AnalyticError::InvalidParams(format!(
                "q = {} must lie in the open interval (0, 1)",
                to_f64(q)
            )));
        }
        if !(lambda > T::zero()) || !lambda.is_finite() {
            return Err(AnalyticError::InvalidParams(format!(
                "lambda = {} must be a positive finite intensity",
                to_f64(lambda)
            )));
        }
        Ok(Self { q, lambda })
    }

    /// Unit-intensity parameters.
    pub fn with_q(q: T) -> Result<Self> {
        Self::new(q, T::one())
    }

    pub fn q(&self) -> T {
        self.q
    }

    pub fn lambda(&self) -> T {
        self.lambda
    }

    /// Probability that a seed grows in the same direction as a test ray
    /// travelling in `direction`.
    pub fn same_direction_probability(&self, direction: RayDirection) -> T {
        match direction {
            RayDirection::East => self.q,
            RayDirection::South => T::one() - self.q,
        }
    }

    /// Multiplier turning a unit-intensity length into a length at `lambda`.
    pub fn length_scale(&self) -> T {
        self.lambda.sqrt().recip()
    }
}

/// Growth direction of the test ray. A south ray sees the same geometry as
/// an east ray with the seed marks swapped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RayDirection {
    East,
    South,
}

/// One evaluation of M_t(y).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MgfPoint<T> {
    pub t: T,
    pub y: T,
    pub value: T,
    /// `t` lies below the convergence abscissa, so `value` is a genuine
    /// expectation E[e^{tX}].
    pub converges: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Method {
    #[serde(rename = "closed")]
    Closed,
    #[serde(rename = "mgf-derivative")]
    MgfDerivative,
    #[serde(rename = "monte-carlo")]
    MonteCarlo,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Closed => "closed",
            Method::MgfDerivative => "mgf-derivative",
            Method::MonteCarlo => "monte-carlo",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentEntry<T> {
    pub order: usize,
    pub value: T,
    pub method: Method,
    pub std_error: Option<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentReport<T> {
    pub params: ModelParams<T>,
    pub entries: Vec<MomentEntry<T>>,
}

impl<T: Scalar> MomentReport<T> {
    pub fn get(&self, order: usize) -> Option<&MomentEntry<T>> {
        self.entries.iter().find(|e| e.order == order)
    }

    pub fn value(&self, order: usize) -> Option<T> {
        self.get(order).map(|e| e.value)
    }

    /// Positive values, and E[X²] ≥ E[X]² for entries of the same method.
    pub fn is_consistent(&self) -> bool {
        if self.entries.iter().any(|e| !(e.value > T::zero())) {
            return false;
        }
        self.entries.iter().all(|second| {
            second.order != 2
                || self
                    .entries
                    .iter()
                    .filter(|first| first.order == 1 && first.method == second.method)
                    .all(|first| second.value >= first.value * first.value)
        })
    }
}

/// Numerical-differentiation and residual tolerances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceConfig<T> {
    /// Largest finite-difference step in t; reduced automatically near the
    /// convergence abscissa.
    pub fd_base_step: T,
    pub richardson_levels: usize,
    /// Bound on the integral-equation residual.
    pub residual_tol: T,
    /// Bound on the differential-equation residual (limited by the h²
    /// truncation of the central differences).
    pub ode_residual_tol: T,
}

impl<T: Scalar> ToleranceConfig<T> {
    pub fn new(
        fd_base_step: T,
        richardson_levels: usize,
        residual_tol: T,
        ode_residual_tol: T,
    ) -> Result<Self> {
        if !(fd_base_step > T::zero() && fd_base_step < lit(0.5)) {
            return Err(AnalyticError::InvalidConfig(
                "fd_base_step must lie in (0, 0.5)".into(),
            ));
        }
        if !(2..=8).contains(&richardson_levels) {
            return Err(AnalyticError::InvalidConfig(
                "richardson_levels must lie in 2..=8".into(),
            ));
        }
        if !(residual_tol > T::zero()) || !(ode_residual_tol > T::zero()) {
            return Err(AnalyticError::InvalidConfig(
                "residual tolerances must be positive".into(),
            ));
        }
        Ok(Self {
            fd_base_step,
            richardson_levels,
            residual_tol,
            ode_residual_tol,
        })
    }
}

impl<T: Scalar> Default for ToleranceConfig<T> {
    fn default() -> Self {
        Self {
            fd_base_step: lit(0.1),
            richardson_levels: 4,
            residual_tol: lit(1e-6),
            ode_residual_tol: lit(1e-5),
        }
    }
}

pub(crate) fn check_q<T: Scalar>(q: T) -> Result<()> {
    ModelParams::with_q(q).map(|_| ())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_validation() {
        assert!(ModelParams::new(0.0, 1.0).is_err());
        assert!(ModelParams::new(1.0, 1.0).is_err());
        assert!(ModelParams::new(1.2, 1.0).is_err());
        assert!(ModelParams::new(0.4, 0.0).is_err());
        assert!(ModelParams::new(0.4, f64::INFINITY).is_err());
        let p = ModelParams::new(0.4, 4.0).unwrap();
        assert_eq!(p.length_scale(), 0.5);
        assert_eq!(p.same_direction_probability(RayDirection::East), 0.4);
        assert_eq!(p.same_direction_probability(RayDirection::South), 0.6);
    }

    #[test]
    fn tolerance_validation() {
        assert!(ToleranceConfig::new(0.5, 4, 1e-6, 1e-5).is_err());
        assert!(ToleranceConfig::new(0.1, 1, 1e-6, 1e-5).is_err());
        assert!(ToleranceConfig::new(0.1, 9, 1e-6, 1e-5).is_err());
        assert!(ToleranceConfig::new(0.1, 4, 0.0, 1e-5).is_err());
        assert!(ToleranceConfig::<f64>::new(0.1, 4, 1e-6, 1e-5).is_ok());
    }

    #[test]
    fn report_consistency() {
        let params = ModelParams::with_q(0.4).unwrap();
        let entry = |order, value| MomentEntry {
            order,
            value,
            method: Method::Closed,
            std_error: None,
        };
        let good = MomentReport {
            params,
            entries: vec![entry(1, 1.8), entry(2, 4.6)],
        };
        assert!(good.is_consistent());
        let bad = MomentReport {
            params,
            entries: vec![entry(1, 1.8), entry(2, 3.0)],
        };
        assert!(!bad.is_consistent());
    }
}
