//! Central finite differences of any order with Richardson extrapolation.

use super::{AnalyticError, Result};
use crate::scalar::{lit, Scalar};

/// An extrapolated derivative and its uncertainty (the difference of the
/// last two diagonal extrapolants).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Derivative<T> {
    pub value: T,
    pub uncertainty: T,
}

fn binomial<T: Scalar>(n: usize, k: usize) -> T {
    let mut c = T::one();
    for i in 0..k {
        c = c * T::from_usize(n - i).unwrap() / T::from_usize(i + 1).unwrap();
    }
    c
}

/// d^k f/dx^k at `x0` from the symmetric stencil
/// h^{−k} Σ_j (−1)^j C(k,j) f(x0 + (k/2 − j)h), evaluated on steps
/// h0, h0/2, …, h0/2^{levels−1} and extrapolated in powers of h².
///
/// Fails with [`AnalyticError::ExtrapolationDivergence`] when the last
/// correction is larger than the one before it and also above the
/// round-off floor of the finest stencil.
pub fn central_derivative<T, F>(
    mut f: F,
    x0: T,
    order: usize,
    h0: T,
    levels: usize,
) -> Result<Derivative<T>>
where
    T: Scalar,
    F: FnMut(T) -> Result<T>,
{
    if order == 0 {
        let v = f(x0)?;
        return Ok(Derivative {
            value: v,
            uncertainty: T::zero(),
        });
    }
    let levels = levels.max(2);
    let half_k = lit::<T>(order as f64 / 2.0);
    let mut table: Vec<Vec<T>> = Vec::with_capacity(levels);
    let mut h = h0;
    let mut f_scale = T::zero();
    let mut h_last = h0;
    for level in 0..levels {
        let mut sum = T::zero();
        for j in 0..=order {
            let node = x0 + (half_k - T::from_usize(j).unwrap()) * h;
            let fx = f(node)?;
            f_scale = f_scale.max(fx.abs());
            let w: T = binomial(order, j);
            sum = if j % 2 == 0 { sum + w * fx } else { sum - w * fx };
        }
        let mut row = vec![sum / h.powi(order as i32)];
        let mut factor = T::one();
        for m in 1..=level {
            factor = factor * lit(4.0);
            let prev = &table[level - 1];
            let refined = row[m - 1] + (row[m - 1] - prev[m - 1]) / (factor - T::one());
            row.push(refined);
        }
        table.push(row);
        h_last = h;
        h = h * lit(0.5);
    }
    let diag = |i: usize| table[i][i];
    let value = diag(levels - 1);
    let last = (value - diag(levels - 2)).abs();
    let floor = lit::<T>(2f64.powi(order as i32) * 1e3)
        * T::epsilon()
        * f_scale
        / h_last.powi(order as i32);
    if levels >= 3 {
        let prev = (diag(levels - 2) - diag(levels - 3)).abs();
        if last > prev && last > floor {
            return Err(AnalyticError::ExtrapolationDivergence { order });
        }
    }
    Ok(Derivative {
        value,
        uncertainty: last,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_derivatives() {
        for k in 1..=6 {
            let d = central_derivative(|x: f64| Ok(x.exp()), 0.3, k, 0.4, 4).unwrap();
            let want = 0.3f64.exp();
            // round-off grows like 2^k ε / h^k on the finest step
            let tol = 1e-9 + 100.0 * 2f64.powi(k as i32) * f64::EPSILON / 0.05f64.powi(k as i32);
            assert!(((d.value - want) / want).abs() < tol, "k={k} got={}", d.value);
        }
    }

    #[test]
    fn polynomial_is_exact_on_first_level() {
        let d = central_derivative(|x: f64| Ok(x * x * x), 0.0, 3, 0.2, 2).unwrap();
        assert!((d.value - 6.0).abs() < 1e-10);
    }

    #[test]
    fn divergence_detected() {
        // √|x| has no second derivative at 0: the stencil grows like h^{−3/2}
        let r = central_derivative(|x: f64| Ok(x.abs().sqrt()), 0.0, 2, 0.1, 4);
        assert!(matches!(r, Err(AnalyticError::ExtrapolationDivergence { .. })));
    }
}
