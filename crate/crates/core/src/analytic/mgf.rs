//! K(t,q), J(t,q), c(t) and the moment generating function M_t(y).

use super::{check_q, AnalyticError, MgfPoint, ModelParams, Result};
use crate::scalar::{lit, to_f64, Scalar};
use crate::specfun::{erfc_fn, gamma_fn, hermite_fn, kummer_1f1, sin_pi, SeriesConfig};

/// Largest |t| accepted by the closed form. Factors of size e^{t²/2} cancel
/// inside c(t), costing roughly t²/(2 ln 10) digits: about 5 at |t| = 5.
pub const T_MAX: f64 = 5.0;

/// Denominators of c(t) smaller than this are treated as a pole.
const DENOMINATOR_FLOOR: f64 = 1e-12;

fn check_t<T: Scalar>(t: T) -> Result<()> {
    if t.is_finite() && t.abs() <= lit(T_MAX) {
        Ok(())
    } else {
        Err(AnalyticError::OutsideValidatedDomain {
            t: to_f64(t),
            t_max: T_MAX,
        })
    }
}

fn check_y<T: Scalar>(y: T) -> Result<()> {
    if y >= T::zero() && y.is_finite() {
        Ok(())
    } else {
        Err(AnalyticError::NegativeHeight { y: to_f64(y) })
    }
}

/// K(t,q) = ∫_{−t/√2}^{0} erfc(z) H_{q−1}(z) dz in closed form.
pub fn k_integral<T: Scalar>(t: T, q: T) -> Result<T> {
    check_q(q)?;
    if !t.is_finite() {
        return Err(AnalyticError::OutsideValidatedDomain {
            t: to_f64(t),
            t_max: T_MAX,
        });
    }
    let cfg = SeriesConfig::default();
    let one = T::one();
    let two = lit::<T>(2.0);
    let half = lit::<T>(0.5);
    let pi = T::PI();
    let sqrt2 = T::SQRT_2();
    let z0 = -t / sqrt2;
    let two_q = two.powf(q);

    let boundary = (two_q * pi.sqrt() / gamma_fn((one - q) * half)?
        - erfc_fn(z0)? * hermite_fn(q, z0)?)
        / (two * q);

    let arg = -t * t * half;
    let odd = sqrt2
        * t
        * sin_pi((one - q) * half)
        * gamma_fn((q + one) * half)?
        * kummer_1f1((q + one) * half, lit(1.5), arg, &cfg)?;
    // ₁F₁(a; b; x) − 1 loses digits for small |x|; use the series tail directly.
    let even = sin_pi(q * half) * gamma_fn(q * half)? * kummer_minus_one(q * half, half, arg, &cfg)?;
    let bracket = two_q / (two * q * pi) * (odd + even);
    Ok(boundary + bracket)
}

/// ₁F₁(a; b; x) − 1 without cancellation for small |x|.
fn kummer_minus_one<T: Scalar>(a: T, b: T, x: T, cfg: &SeriesConfig<T>) -> Result<T> {
    if x.abs() > T::one() {
        return Ok(kummer_1f1(a, b, x, cfg)? - T::one());
    }
    let mut term = a / b * x;
    let mut sum = term;
    let mut n = T::one();
    for _ in 0..cfg.max_terms {
        term = term * (a + n) / (b + n) * x / (n + T::one());
        sum = sum + term;
        n = n + T::one();
        if term.abs() <= cfg.term_rel_tol * sum.abs() {
            return Ok(sum);
        }
    }
    Err(crate::specfun::SpecFunError::SeriesNonConvergence {
        a: to_f64(a),
        b: to_f64(b),
        z: to_f64(x),
        terms: cfg.max_terms,
    }
    .into())
}

/// The t-independent part of J: ∫₀^∞ erfc(z) H_{q−1}(z) dz.
fn j_constant<T: Scalar>(q: T) -> Result<T> {
    let one = T::one();
    let half_q = q * lit(0.5);
    let g = gamma_fn(-half_q)?;
    Ok(g / (lit::<T>(4.0) * gamma_fn(one - q)?) - lit::<T>(2.0).powf(q) / (q * q * g))
}

/// J(t,q) = ∫₀^∞ erfc((u−t)/√2) H_{q−1}((u−t)/√2) du
/// = √2 [K(t,q) + Γ(−q/2)/(4Γ(1−q)) − 2^q/(q²Γ(−q/2))].
pub fn j_integral<T: Scalar>(t: T, q: T) -> Result<T> {
    Ok(T::SQRT_2() * (k_integral(t, q)? + j_constant(q)?))
}

/// Denominator of c(t): √(2/π) e^{−t²/2} H_{q−1}(−t/√2) − q J(t,q).
fn denominator<T: Scalar>(t: T, q: T) -> Result<T> {
    let lead = (lit::<T>(2.0) / T::PI()).sqrt()
        * (-t * t * lit(0.5)).exp()
        * hermite_fn(q - T::one(), -t / T::SQRT_2())?;
    Ok(lead - q * j_integral(t, q)?)
}

/// c(t) = t erfc(−t/√2) / [√(2/π) e^{−t²/2} H_{q−1}(−t/√2) − q J(t,q)].
pub fn c_coefficient<T: Scalar>(t: T, q: T) -> Result<T> {
    Ok(MgfCurve::new(t, q)?.c)
}

/// M_t(·) at fixed (t, q): c(t) is computed once and reused across heights.
#[derive(Debug, Clone, Copy)]
pub struct MgfCurve<T> {
    t: T,
    q: T,
    c: T,
    converges: bool,
}

impl<T: Scalar> MgfCurve<T> {
    pub fn new(t: T, q: T) -> Result<Self> {
        check_q(q)?;
        check_t(t)?;
        if t == T::zero() {
            return Ok(Self {
                t,
                q,
                c: T::zero(),
                converges: true,
            });
        }
        let den = denominator(t, q)?;
        if !(den.abs() >= lit(DENOMINATOR_FLOOR)) {
            return Err(AnalyticError::NearZeroDenominator {
                t: to_f64(t),
                q: to_f64(q),
                value: to_f64(den),
            });
        }
        let numerator = t * erfc_fn(-t / T::SQRT_2())?;
        Ok(Self {
            t,
            q,
            c: numerator / den,
            // The denominator is positive at t = 0 and decreasing; its zero is
            // the convergence abscissa.
            converges: den > T::zero(),
        })
    }

    pub fn t(&self) -> T {
        self.t
    }

    pub fn c(&self) -> T {
        self.c
    }

    /// True when t lies below the convergence abscissa.
    pub fn converges(&self) -> bool {
        self.converges
    }

    /// M_t(y) = 1 + c(t) H_{q−1}((y−t)/√2).
    pub fn value(&self, y: T) -> Result<T> {
        check_y(y)?;
        if self.c == T::zero() {
            return Ok(T::one());
        }
        let h = hermite_fn(self.q - T::one(), (y - self.t) / T::SQRT_2())?;
        Ok(T::one() + self.c * h)
    }
}

/// M_t(y) at unit intensity. Exactly 1 at t = 0.
///
/// Above the convergence abscissa the value is the analytic continuation of
/// E[e^{tX}], which is infinite there; see [`mgf_point`].
pub fn mgf<T: Scalar>(t: T, y: T, q: T) -> Result<T> {
    check_y(y)?;
    MgfCurve::new(t, q)?.value(y)
}

/// [`mgf`] together with the convergence flag.
pub fn mgf_point<T: Scalar>(t: T, y: T, q: T) -> Result<MgfPoint<T>> {
    check_y(y)?;
    let curve = MgfCurve::new(t, q)?;
    Ok(MgfPoint {
        t,
        y,
        value: curve.value(y)?,
        converges: curve.converges,
    })
}

/// M_t(y) at intensity λ: lengths scale as λ^{−1/2}, so the unit-intensity
/// curve is evaluated at (t/√λ, y√λ).
pub fn mgf_scaled<T: Scalar>(params: &ModelParams<T>, t: T, y: T) -> Result<MgfPoint<T>> {
    check_y(y)?;
    let root = params.lambda().sqrt();
    let t1 = t / root;
    check_t(t1)?;
    let p = mgf_point(t1, y * root, params.q())?;
    Ok(MgfPoint { t, y, ..p })
}

/// Closed form for q = 1/2 and y = 0:
/// 1 − 4√(2π) t H_{−1/2}(−t/√2) / [Γ(−1/4) ₁F₁(−1/4; 1/2; t²/2) + √2 t Γ(1/4) ₁F₁(1/4; 3/2; t²/2)].
pub fn mgf_special_half<T: Scalar>(t: T) -> Result<T> {
    check_t(t)?;
    if t == T::zero() {
        return Ok(T::one());
    }
    let cfg = SeriesConfig::default();
    let quarter = lit::<T>(0.25);
    let half = lit::<T>(0.5);
    let x = t * t * half;
    let den = gamma_fn(-quarter)? * kummer_1f1(-quarter, half, x, &cfg)?
        + T::SQRT_2() * t * gamma_fn(quarter)? * kummer_1f1(quarter, lit(1.5), x, &cfg)?;
    if !(den.abs() >= lit(DENOMINATOR_FLOOR)) {
        return Err(AnalyticError::NearZeroDenominator {
            t: to_f64(t),
            q: 0.5,
            value: to_f64(den),
        });
    }
    let num = lit::<T>(4.0) * (T::TAU()).sqrt() * t * hermite_fn(-half, -t / T::SQRT_2())?;
    Ok(T::one() - num / den)
}

/// Convergence abscissa t*(q): E[e^{tX}] is finite exactly for t < t*(q),
/// where the denominator of c(t) vanishes and M has a simple pole.
///
/// Returns `None` when t*(q) exceeds [`T_MAX`] (small q).
pub fn convergence_abscissa<T: Scalar>(q: T) -> Result<Option<T>> {
    check_q(q)?;
    let step = lit::<T>(0.05);
    let t_max = lit::<T>(T_MAX);
    let mut lo = T::zero();
    let mut hi = step;
    loop {
        if hi > t_max {
            return Ok(None);
        }
        if denominator(hi, q)? <= T::zero() {
            break;
        }
        lo = hi;
        hi = hi + step;
    }
    for _ in 0..200 {
        let mid = (lo + hi) * lit(0.5);
        if mid <= lo || mid >= hi {
            break;
        }
        if denominator(mid, q)? > T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some((lo + hi) * lit(0.5)))
}
