//! Moment accumulators and the empirical MGF.

use serde::Serialize;

/// Censored fractions above this raise [`SimStats::censor_warning`].
pub const CENSOR_WARNING_FRACTION: f64 = 0.01;

const ORDERS: usize = 6;

/// Power sums up to order 12, so every reported moment up to order 6 gets a
/// standard error.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub(crate) struct Accumulator {
    pub n: u64,
    pub sums: [f64; 2 * ORDERS],
    pub hops: f64,
    pub hops_sq: f64,
    pub censored: u64,
}

impl Accumulator {
    #[inline]
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let mut p = 1.0;
        for s in self.sums.iter_mut() {
            p *= x;
            *s += p;
        }
    }

    #[inline]
    pub fn push_hops(&mut self, hops: u32) {
        let h = hops as f64;
        self.hops += h;
        self.hops_sq += h * h;
    }

    pub fn merge(&mut self, other: &Accumulator) {
        self.n += other.n;
        for (a, b) in self.sums.iter_mut().zip(other.sums.iter()) {
            *a += b;
        }
        self.hops += other.hops;
        self.hops_sq += other.hops_sq;
        self.censored += other.censored;
    }

    pub fn finish(&self, seed: u64, with_hops: bool) -> SimStats {
        let n = self.n as f64;
        let mut raw = [f64::NAN; ORDERS];
        let mut se = [f64::NAN; ORDERS];
        let mut moment_sums = [0.0; ORDERS];
        moment_sums.copy_from_slice(&self.sums[..ORDERS]);
        if self.n > 0 {
            for (r, s) in raw.iter_mut().zip(&self.sums) {
                *r = s / n;
            }
        }
        if self.n > 1 {
            for (k, e) in se.iter_mut().enumerate() {
                *e = std_error(self.sums[k], self.sums[2 * k + 1], n);
            }
        }
        let (mean_hops, hops_std_error) = if with_hops && self.n > 1 {
            (Some(self.hops / n), Some(std_error(self.hops, self.hops_sq, n)))
        } else {
            (None, None)
        };
        let total = self.n + self.censored;
        let censored_fraction = if total > 0 {
            self.censored as f64 / total as f64
        } else {
            0.0
        };
        SimStats {
            n: self.n,
            seed,
            moment_sums,
            mean: raw[0],
            raw_moments: raw,
            std_errors: se,
            mean_hops,
            hops_std_error,
            censored: self.censored,
            censored_fraction,
            censor_warning: censored_fraction > CENSOR_WARNING_FRACTION,
        }
    }
}

/// Sample standard deviation over √n from a sum and a sum of squares.
fn std_error(sum: f64, sum_sq: f64, n: f64) -> f64 {
    let var = ((sum_sq - sum * sum / n) / (n - 1.0)).max(0.0);
    (var / n).sqrt()
}

/// Summary of a Monte Carlo run. Moments of an empty sample are NaN
/// (serialised as `null`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimStats {
    pub n: u64,
    pub seed: u64,
    /// Σ Xᵢ^k for k = 1..6.
    pub moment_sums: [f64; ORDERS],
    pub mean: f64,
    /// (1/n) Σ Xᵢ^k for k = 1..6.
    pub raw_moments: [f64; ORDERS],
    /// Sample standard deviation of Xᵢ^k over √n.
    pub std_errors: [f64; ORDERS],
    /// Mean number of stopping sets per sample (recursion engine only).
    pub mean_hops: Option<f64>,
    pub hops_std_error: Option<f64>,
    /// Interior rays still growing at the window edge (plane engine only).
    pub censored: u64,
    pub censored_fraction: f64,
    pub censor_warning: bool,
}

impl SimStats {
    /// Raw moment of order k ∈ 1..=6.
    pub fn raw_moment(&self, k: usize) -> f64 {
        self.raw_moments[k - 1]
    }

    pub fn std_error(&self, k: usize) -> f64 {
        self.std_errors[k - 1]
    }
}

/// (1/n) Σ e^{t Xᵢ}; NaN for an empty sample.
///
/// For t > 0 the estimate is meaningful only below the convergence abscissa
/// t*(q), and its variance is finite only for 2t < t*(q).
pub fn empirical_mgf(samples: &[f64], t: f64) -> f64 {
    empirical_mgf_with_error(samples, t).0
}

/// Empirical MGF and its standard error.
pub fn empirical_mgf_with_error(samples: &[f64], t: f64) -> (f64, f64) {
    if samples.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = samples.len() as f64;
    let (sum, sum_sq) = samples.iter().fold((0.0, 0.0), |(s, s2), &x| {
        let e = (t * x).exp();
        (s + e, s2 + e * e)
    });
    let se = if samples.len() > 1 {
        std_error(sum, sum_sq, n)
    } else {
        f64::NAN
    };
    (sum / n, se)
}
