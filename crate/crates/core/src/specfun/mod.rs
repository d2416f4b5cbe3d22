//! Real-argument special functions used by the moment generating function.
//!
//! Everything here is a pure function of its arguments; configuration
//! structs are plain values.

mod erfc;
mod gamma;
mod hermite;
mod kummer;
mod quadrature;

pub use erfc::erfc_fn;
pub use gamma::{gamma_fn, gamma_fn_with_pole_tol, rgamma, sin_pi, DEFAULT_POLE_TOL};
pub use hermite::{hermite_fn, hermite_fn_integral, HERMITE_SERIES_MAX_Z};
pub use kummer::kummer_1f1;
pub use quadrature::{integrate, QuadEstimate};

use thiserror::Error;

use crate::scalar::{lit, Scalar};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecFunError {
    #[error("gamma pole: argument {x} is within {tol:e} of a non-positive integer")]
    Pole { x: f64, tol: f64 },
    #[error("non-finite argument {x}")]
    NonFinite { x: f64 },
    #[error("1F1({a}; {b}; {z}) series did not converge within {terms} terms")]
    SeriesNonConvergence { a: f64, b: f64, z: f64, terms: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("Hermite order {v} is outside the supported range v > -1")]
    HermiteOrder { v: f64 },
    #[error("quadrature on [{a}, {b}] did not converge: estimate {estimate:e}, error {error:e} after {intervals} subintervals")]
    QuadratureNonConvergence {
        a: f64,
        b: f64,
        estimate: f64,
        error: f64,
        intervals: usize,
    },
    #[error("argument {z} would overflow exp(z^2)")]
    Overflow { z: f64 },
}

pub type Result<T> = std::result::Result<T, SpecFunError>;

/// Knobs for adaptive Gauss–Kronrod quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig<T> {
    pub abs_tol: T,
    pub rel_tol: T,
    pub max_subdivisions: usize,
    /// Upper limit standing in for ∞ in semi-infinite integrals.
    pub tail_cutoff: T,
}

impl<T: Scalar> QuadratureConfig<T> {
    pub fn new(abs_tol: T, rel_tol: T, max_subdivisions: usize, tail_cutoff: T) -> Result<Self> {
        if !(abs_tol > T::zero()) || !(rel_tol > T::zero()) {
            return Err(SpecFunError::InvalidParameter(
                "quadrature tolerances must be positive".into(),
            ));
        }
        if max_subdivisions < 1 {
            return Err(SpecFunError::InvalidParameter(
                "max_subdivisions must be at least 1".into(),
            ));
        }
        if !(tail_cutoff > T::zero()) {
            return Err(SpecFunError::InvalidParameter(
                "tail_cutoff must be positive".into(),
            ));
        }
        Ok(Self {
            abs_tol,
            rel_tol,
            max_subdivisions,
            tail_cutoff,
        })
    }
}

impl<T: Scalar> Default for QuadratureConfig<T> {
    fn default() -> Self {
        Self {
            abs_tol: lit(1e-10),
            rel_tol: lit(1e-12),
            max_subdivisions: 500,
            tail_cutoff: lit(12.0),
        }
    }
}

/// Stopping rule for the ₁F₁ power series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesConfig<T> {
    /// Stop once |term| < term_rel_tol · |partial sum|.
    pub term_rel_tol: T,
    pub max_terms: usize,
}

impl<T: Scalar> SeriesConfig<T> {
    pub fn new(term_rel_tol: T, max_terms: usize) -> Result<Self> {
        if !(term_rel_tol > T::zero()) {
            return Err(SpecFunError::InvalidParameter(
                "term_rel_tol must be positive".into(),
            ));
        }
        if max_terms < 10 {
            return Err(SpecFunError::InvalidParameter(
                "max_terms must be at least 10".into(),
            ));
        }
        Ok(Self {
            term_rel_tol,
            max_terms,
        })
    }
}

impl<T: Scalar> Default for SeriesConfig<T> {
    fn default() -> Self {
        Self {
            term_rel_tol: lit(1e-16),
            max_terms: 500,
        }
    }
}

pub(crate) fn check_finite<T: Scalar>(x: T) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(SpecFunError::NonFinite {
            x: crate::scalar::to_f64(x),
        })
    }
}
