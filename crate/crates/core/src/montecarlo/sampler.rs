//! Exact sampler of terminal ray length via the stopping-set recursion.

use rand::Rng;
use rand_distr::Exp1;

use crate::analytic::ModelParams;

/// Live-zone left-boundary height and the distance covered so far.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RecursionState {
    pub y: f64,
    pub x_accum: f64,
}

/// Random inputs consumed by one hop, in this order: area, mark, and (for an
/// H mark) the seed height as a fraction of the stopping set's right edge.
pub trait RecursionDraws {
    /// Exponential(1) area in units of 1/λ.
    fn area(&mut self) -> f64;
    /// True when the stopping seed is H-marked.
    fn is_h(&mut self, q: f64) -> bool;
    /// Uniform(0, 1) position of the seed along the right edge.
    fn height_fraction(&mut self) -> f64;
}

impl<R: Rng + ?Sized> RecursionDraws for R {
    fn area(&mut self) -> f64 {
        self.sample(Exp1)
    }

    fn is_h(&mut self, q: f64) -> bool {
        self.random::<f64>() < q
    }

    fn height_fraction(&mut self) -> f64 {
        self.random::<f64>()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayDraw {
    pub length: f64,
    pub hops: u32,
}

/// Width r of a trapezium with left height y and area a: r²/2 + r·y = a.
#[inline]
fn hop_width(y: f64, a: f64) -> f64 {
    // rationalised form of −y + √(y² + 2a), free of cancellation at large y
    2.0 * a / (y + (y * y + 2.0 * a).sqrt())
}

/// One terminal length and the number of stopping sets used.
pub fn sample_ray<D: RecursionDraws + ?Sized>(params: &ModelParams<f64>, draws: &mut D) -> RayDraw {
    let q = params.q();
    let inv_lambda = params.lambda().recip();
    let mut state = RecursionState::default();
    let mut hops = 0u32;
    loop {
        hops += 1;
        let r = hop_width(state.y, draws.area() * inv_lambda);
        state.x_accum += r;
        if !draws.is_h(q) {
            return RayDraw {
                length: state.x_accum,
                hops,
            };
        }
        state.y = draws.height_fraction() * (r + state.y);
    }
}

/// One exact draw of the terminal length L.
pub fn sample_ray_length<D: RecursionDraws + ?Sized>(params: &ModelParams<f64>, draws: &mut D) -> f64 {
    sample_ray(params, draws).length
}
