//! Adaptive Gauss–Kronrod (10/21-point) quadrature on finite intervals.

use super::{QuadratureConfig, Result, SpecFunError};
use crate::scalar::{lit, to_f64, Scalar};

// Kronrod abscissae on [0, 1); odd indices are the 10-point Gauss nodes.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_980_876_400,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadEstimate<T> {
    pub value: T,
    pub abs_error: T,
    pub intervals: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment<T> {
    a: T,
    b: T,
    value: T,
    error: T,
    abs_value: T,
}

fn kronrod_21<T: Scalar, F: FnMut(T) -> T>(f: &mut F, a: T, b: T) -> Segment<T> {
    let half = lit::<T>(0.5);
    let center = half * (a + b);
    let half_len = half * (b - a);

    let fc = f(center);
    let mut kronrod = fc * lit(WGK[10]);
    let mut gauss = T::zero();
    let mut abs_sum = fc.abs() * lit(WGK[10]);
    let mut samples = [(T::zero(), T::zero()); 10];
    for (j, sample) in samples.iter_mut().enumerate() {
        let dx = half_len * lit(XGK[j]);
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        let wk = lit::<T>(WGK[j]);
        kronrod = kronrod + wk * (f1 + f2);
        abs_sum = abs_sum + wk * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss = gauss + lit::<T>(WG[j / 2]) * (f1 + f2);
        }
        *sample = (f1, f2);
    }

    // Spread of the integrand about its mean, used to rescale the raw
    // Gauss/Kronrod difference (QUADPACK heuristic).
    let mean = kronrod * half;
    let mut asc = lit::<T>(WGK[10]) * (fc - mean).abs();
    for (j, &(f1, f2)) in samples.iter().enumerate() {
        asc = asc + lit::<T>(WGK[j]) * ((f1 - mean).abs() + (f2 - mean).abs());
    }
    let scale = half_len.abs();
    let value = kronrod * half_len;
    let abs_value = abs_sum * scale;
    let asc = asc * scale;
    let mut error = ((kronrod - gauss) * half_len).abs();
    if asc != T::zero() && error != T::zero() {
        let ratio = (lit::<T>(200.0) * error / asc).powf(lit(1.5));
        error = if ratio < T::one() { asc * ratio } else { asc };
    }
    Segment {
        a,
        b,
        value,
        error,
        abs_value,
    }
}

/// Neumaier summation.
fn compensated_sum<T: Scalar>(terms: impl Iterator<Item = T>) -> T {
    let (mut sum, mut carry) = (T::zero(), T::zero());
    for x in terms {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            carry = carry + ((sum - t) + x);
        } else {
            carry = carry + ((x - t) + sum);
        }
        sum = t;
    }
    sum + carry
}

/// Integrates `f` over `[a, b]` to `max(abs_tol, rel_tol·|I|)`.
///
/// Refinement also stops once the estimated error reaches the round-off
/// floor `2·ε·∫|f|`, since further bisection cannot improve on it.
pub fn integrate<T, F>(mut f: F, a: T, b: T, cfg: &QuadratureConfig<T>) -> Result<QuadEstimate<T>>
where
    T: Scalar,
    F: FnMut(T) -> T,
{
    if a == b {
        return Ok(QuadEstimate {
            value: T::zero(),
            abs_error: T::zero(),
            intervals: 0,
        });
    }
    if b < a {
        let mut est = integrate(f, b, a, cfg)?;
        est.value = -est.value;
        return Ok(est);
    }

    let mut segments = vec![kronrod_21(&mut f, a, b)];
    let roundoff = lit::<T>(2.0) * T::epsilon();
    loop {
        let value = compensated_sum(segments.iter().map(|s| s.value));
        let (error, abs_value) = segments
            .iter()
            .fold((T::zero(), T::zero()), |(e, av), s| (e + s.error, av + s.abs_value));
        let fail = |intervals: usize| SpecFunError::QuadratureNonConvergence {
            a: to_f64(a),
            b: to_f64(b),
            estimate: to_f64(value),
            error: to_f64(error),
            intervals,
        };
        if !value.is_finite() || !error.is_finite() {
            return Err(fail(segments.len()));
        }
        let tol = cfg.abs_tol.max(cfg.rel_tol * value.abs());
        if error <= tol || error <= roundoff * abs_value {
            return Ok(QuadEstimate {
                value,
                abs_error: error,
                intervals: segments.len(),
            });
        }
        if segments.len() >= cfg.max_subdivisions {
            return Err(fail(segments.len()));
        }

        let worst = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.partial_cmp(&y.1.error).unwrap())
            .map(|(i, _)| i)
            .unwrap();
        let seg = segments.swap_remove(worst);
        let mid = lit::<T>(0.5) * (seg.a + seg.b);
        if !(mid > seg.a && mid < seg.b) {
            return Err(fail(segments.len() + 1));
        }
        segments.push(kronrod_21(&mut f, seg.a, mid));
        segments.push(kronrod_21(&mut f, mid, seg.b));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let cfg = QuadratureConfig::default();
        let est = integrate(|x: f64| x.powi(7) - 3.0 * x * x, -1.0, 2.0, &cfg).unwrap();
        let exact = (2f64.powi(8) - 1.0) / 8.0 - (8.0 + 1.0);
        assert!((est.value - exact).abs() < 1e-13);
        assert_eq!(est.intervals, 1);
    }

    #[test]
    fn reversed_and_empty() {
        let cfg = QuadratureConfig::default();
        let fwd = integrate(f64::exp, 0.0, 1.0, &cfg).unwrap().value;
        let rev = integrate(f64::exp, 1.0, 0.0, &cfg).unwrap().value;
        assert_eq!(fwd, -rev);
        assert_eq!(integrate(f64::exp, 1.0, 1.0, &cfg).unwrap().value, 0.0);
    }

    #[test]
    fn endpoint_singularity_adapts() {
        let cfg = QuadratureConfig::new(1e-12, 1e-12, 500, 12.0).unwrap();
        let est = integrate(|x: f64| x.powf(-0.5), 0.0, 1.0, &cfg).unwrap();
        assert!((est.value - 2.0).abs() < 1e-10);
        assert!(est.intervals > 1);
    }

    #[test]
    fn gives_up_after_max_subdivisions() {
        let cfg = QuadratureConfig::new(1e-14, 1e-14, 3, 12.0).unwrap();
        let res = integrate(|x: f64| (1.0 / x).sin(), 1e-4, 1.0, &cfg);
        assert!(matches!(res, Err(SpecFunError::QuadratureNonConvergence { .. })));
    }

    #[test]
    fn gaussian() {
        let cfg = QuadratureConfig::default();
        let est = integrate(|x: f64| (-x * x).exp(), 0.0, 12.0, &cfg).unwrap();
        assert!((est.value - 0.5 * std::f64::consts::PI.sqrt()).abs() < 1e-12);
    }
}
