//! Terminal ray lengths in the rectangular half-Gilbert tessellation.
//!
//! Seeds of a planar Poisson process (intensity λ) are marked east-growing
//! with probability `q` and south-growing otherwise; each ray stops when its
//! tip meets another ray. This crate evaluates the exact moment generating
//! function of an east ray's terminal length, its moments, and two Monte
//! Carlo oracles that check it:
//!
//! * [`specfun`]: gamma, erfc, Kummer ₁F₁ and the Hermite function of
//!   non-integer order (series and integral evaluation paths).
//! * [`analytic`]: the closed-form MGF `M_t(y)`, its building blocks, moments
//!   and residual probes against the defining integral and differential
//!   equations.
//! * [`montecarlo`]: an exact stopping-set sampler and a direct plane
//!   simulator of interacting rays.
//! * [`validation`]: the combined report used by the `validate` command.
//!
//! The numerical layers are generic over [`Scalar`] (`f32`/`f64`); the
//! aliases below fix the scalar to `f64`, which is what the Monte Carlo and
//! reporting code use.

// Reference constants are quoted to full published precision, and `!(x > 0)`
// style guards deliberately reject NaN.
#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod montecarlo;
pub mod specfun;
pub mod validation;

mod scalar;

pub use scalar::Scalar;

pub use analytic::{
    AnalyticError, Method, MgfPoint, ModelParams, MomentEntry, MomentReport, RayDirection,
    ToleranceConfig,
};
pub use specfun::{QuadratureConfig, SeriesConfig, SpecFunError};

pub type ModelParamsF64 = ModelParams<f64>;
pub type ModelParamsF32 = ModelParams<f32>;
pub type MomentReportF64 = MomentReport<f64>;
pub type MgfPointF64 = MgfPoint<f64>;
pub type ToleranceConfigF64 = ToleranceConfig<f64>;
pub type QuadratureConfigF64 = QuadratureConfig<f64>;
pub type SeriesConfigF64 = SeriesConfig<f64>;
