#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

use halfgilbert::analytic::{
    c_coefficient, central_derivative, closed_moments, closed_moments_directed,
    convergence_abscissa, integral_equation_residual, j_integral, k_integral, mgf, mgf_moments,
    mgf_special_half, ode_residual,
};
use halfgilbert::specfun::{erfc_fn, hermite_fn, integrate};
use halfgilbert::{ModelParams, QuadratureConfig, RayDirection, ToleranceConfig};
use proptest::prelude::*;

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn t_grid() -> impl Iterator<Item = f64> {
    (-30..=30).map(|i| i as f64 / 10.0)
}

#[test]
fn normalization_grid() {
    for i in 0..=10 {
        let y = 0.5 * i as f64;
        for j in 1..=9 {
            let q = j as f64 / 10.0;
            assert_eq!(mgf(0.0, y, q).unwrap(), 1.0);
        }
    }
}

/// Monotonicity, convexity and range hold where E[e^{tX}] is finite, i.e.
/// below the convergence abscissa.
#[test]
fn shape_below_abscissa() {
    for q in [0.2, 0.5, 0.8] {
        let t_star = convergence_abscissa(q).unwrap().unwrap();
        let pts: Vec<(f64, f64)> = t_grid()
            .filter(|&t| t < t_star)
            .map(|t| (t, mgf(t, 0.0, q).unwrap()))
            .collect();
        assert!(pts.len() >= 31);
        for w in pts.windows(2) {
            assert!(w[1].1 > w[0].1, "q={q} not increasing at t={}", w[1].0);
        }
        for w in pts.windows(3) {
            let dd = w[2].1 - 2.0 * w[1].1 + w[0].1;
            assert!(dd >= 0.0, "q={q} not convex at t={}", w[1].0);
        }
        for &(t, m) in &pts {
            if t < 0.0 {
                assert!(m > 0.0 && m < 1.0, "q={q} t={t} m={m}");
            } else {
                assert!(m >= 1.0, "q={q} t={t} m={m}");
            }
        }
    }
}

#[test]
fn beyond_abscissa_is_continuation() {
    // Past the pole the closed form turns negative: it is no longer an expectation.
    let m = mgf(1.0, 0.0, 0.5).unwrap();
    assert!(m < 0.0);
}

#[test]
fn duality_relabeling() {
    for q in [0.2, 0.4] {
        let east = closed_moments_directed(
            &ModelParams::new(q, 1.0).unwrap(),
            RayDirection::East,
            &[1, 2, 3, 4],
        )
        .unwrap();
        let south = closed_moments_directed(
            &ModelParams::new(1.0 - q, 1.0).unwrap(),
            RayDirection::South,
            &[1, 2, 3, 4],
        )
        .unwrap();
        for k in 1..=4 {
            // 1 − (1 − q) differs from q by at most one ulp
            assert!(rel(south.value(k).unwrap(), east.value(k).unwrap()) < 1e-14);
        }
    }
}

#[test]
fn cross_method_agreement() {
    let tol = ToleranceConfig::default();
    for q in [0.2, 0.5, 0.8] {
        let p = ModelParams::with_q(q).unwrap();
        let closed = closed_moments(&p, &[1, 2, 3, 4]).unwrap();
        let fd = mgf_moments(&p, 4, &tol).unwrap();
        for k in 1..=3 {
            let (a, b) = (closed.value(k).unwrap(), fd.value(k).unwrap());
            assert!(rel(b, a) < 1e-5, "q={q} k={k} closed={a} fd={b}");
        }
        // the resolved fourth moment agrees as well
        assert!(rel(fd.value(4).unwrap(), closed.value(4).unwrap()) < 1e-4);
    }
    let p = ModelParams::with_q(0.5).unwrap();
    let a = closed_moments(&p, &[1]).unwrap().value(1).unwrap();
    let b = mgf_moments(&p, 1, &tol).unwrap().value(1).unwrap();
    assert!(rel(b, a) < 1e-6);
}

#[test]
fn derivative_moments_match_references() {
    // 40-digit references for orders 1–6
    let refs: [(f64, [f64; 6]); 3] = [
        (
            0.2,
            [
                1.467_746_142_354_305_969_4,
                2.861_711_495_358_378_641_4,
                6.923_398_031_768_857_482_3,
                20.142_224_789_493_168_401,
                69.211_594_259_904_735_3,
                277.130_408_679_581_808_98,
            ],
        ),
        (
            0.5,
            [
                2.092_099_240_106_203_297_9,
                6.376_879_230_452_953_277_7,
                26.287_894_008_738_090_913,
                139.501_283_081_158_561_9,
                915.339_443_745_282_077_58,
                7_185.840_091_060_068_752_5,
            ],
        ),
        (
            0.8,
            [
                4.517_258_139_076_333_408_6,
                34.648_993_752_082_205_989,
                389.196_052_106_985_085_82,
                5_810.091_676_556_123_915_7,
                108_378.354_401_100_493_81,
                2_425_862.516_096_240_229_8,
            ],
        ),
    ];
    let tols = [1e-6, 1e-6, 1e-5, 1e-5, 1e-4, 1e-2];
    for (q, want) in refs {
        let p = ModelParams::with_q(q).unwrap();
        let r = mgf_moments(&p, 6, &ToleranceConfig::default()).unwrap();
        for k in 1..=6 {
            let got = r.value(k).unwrap();
            assert!(rel(got, want[k - 1]) < tols[k - 1], "q={q} k={k} got={got}");
        }
    }
}

#[test]
fn variance_nonnegative() {
    for i in 0..17 {
        let q = 0.05 + 0.9 * i as f64 / 16.0;
        let r = closed_moments(&ModelParams::with_q(q).unwrap(), &[1, 2]).unwrap();
        let m1 = r.value(1).unwrap();
        assert!(r.value(2).unwrap() - m1 * m1 > 0.0, "q={q}");
        assert!(r.is_consistent());
    }
}

#[test]
fn ode_residual_grid() {
    for t in [-2.0f64, -1.0, 0.0, 1.0, 2.0] {
        for y in [0.5, 1.0, 3.0] {
            for q in [0.3, 0.5, 0.7] {
                let r = ode_residual(t, y, q, 1e-3).unwrap();
                assert!(r.abs() < 1e-5, "t={t} y={y} q={q} r={r}");
            }
        }
    }
}

#[test]
fn integral_equation_grid() {
    let quad = QuadratureConfig::default();
    for t in [-2.0f64, -1.0, 1.0, 2.0] {
        for q in [0.25, 0.4, 0.75] {
            let r = integral_equation_residual(t, q, &quad).unwrap();
            let budget = r.residual.abs() + r.tail_bound + r.quadrature_error;
            assert!(budget < 1e-6, "t={t} q={q} {r:?}");
        }
    }
}

#[test]
fn special_half_grid() {
    for i in 0..=40 {
        let t = -2.0 + 0.1 * i as f64;
        let a = mgf(t, 0.0, 0.5).unwrap();
        let b = mgf_special_half(t).unwrap();
        assert!((a - b).abs() < 1e-9, "t={t} general={a} special={b}");
    }
}

#[test]
fn k_and_j_quadrature_oracles() {
    let cfg = QuadratureConfig::default();
    let s2 = std::f64::consts::SQRT_2;
    for (t, q) in [(1.3, 0.4), (-0.7, 0.6)] {
        let quad = integrate(
            |z| erfc_fn(z).unwrap() * hermite_fn(q - 1.0, z).unwrap(),
            -t / s2,
            0.0,
            &cfg,
        )
        .unwrap();
        assert!((k_integral(t, q).unwrap() - quad.value).abs() < 1e-8);
    }
    for (t, q) in [(0.9, 0.4), (0.0, 0.5)] {
        // erfc((u−t)/√2) < 1e−19 beyond u = t + 9
        let quad = integrate(
            |u: f64| {
                let z = (u - t) / s2;
                erfc_fn(z).unwrap() * hermite_fn(q - 1.0, z).unwrap()
            },
            0.0,
            t + 9.0,
            &cfg,
        )
        .unwrap();
        assert!((j_integral(t, q).unwrap() - quad.value).abs() < 1e-7, "t={t} q={q}");
    }
}

#[test]
fn c_is_smooth_at_origin() {
    let slope = central_derivative(|t| c_coefficient(t, 0.4), 0.0f64, 1, 0.05, 4)
        .unwrap()
        .value;
    let c = c_coefficient(1e-8f64, 0.4).unwrap();
    assert!((c - slope * 1e-8).abs() < 1e-6);
    assert!((c - slope * 1e-8).abs() < 1e-14);
}

#[test]
fn lambda_scaling_of_moments() {
    let tol = ToleranceConfig::default();
    let unit = mgf_moments(&ModelParams::with_q(0.4).unwrap(), 4, &tol).unwrap();
    let dense = mgf_moments(&ModelParams::new(0.4, 4.0).unwrap(), 4, &tol).unwrap();
    for k in 1..=4 {
        let want = unit.value(k).unwrap() * 4f64.powf(-(k as f64) / 2.0);
        assert!(rel(dense.value(k).unwrap(), want) < 1e-12, "k={k}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn negative_t_is_a_probability_transform(t in -5.0f64..-0.01, q in 0.05f64..0.95) {
        let m = mgf(t, 0.0, q).unwrap();
        prop_assert!(m > 0.0 && m < 1.0, "t={} q={} m={}", t, q, m);
    }

    #[test]
    fn mgf_decreases_in_height_for_negative_t(
        t in -3.0f64..-0.1,
        y in 0.0f64..4.0,
        q in 0.1f64..0.9,
    ) {
        // A taller live zone leaves more room for blockers, so X shrinks.
        let lo = mgf(t, y, q).unwrap();
        let hi = mgf(t, y + 0.5, q).unwrap();
        prop_assert!(hi >= lo - 1e-12);
    }

    #[test]
    fn ode_holds_off_grid(t in -3.0f64..3.0, y in 0.2f64..4.0, q in 0.1f64..0.9) {
        // stay clear of the pole, where c(t) is unbounded
        if let Ok(r) = ode_residual(t, y, q, 1e-3) {
            let scale = 1.0 + mgf(t, y, q).unwrap().abs();
            prop_assert!(r.abs() < 1e-5 * scale, "t={} y={} q={} r={}", t, y, q, r);
        }
    }
}
