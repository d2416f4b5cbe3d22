#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

use halfgilbert::analytic::{closed_moments, convergence_abscissa, mgf};
use halfgilbert::montecarlo::{
    empirical_mgf, empirical_mgf_with_error, run_monte_carlo, run_monte_carlo_with_samples,
    simulate_plane, PlaneConfig, SimConfig,
};
use halfgilbert::ModelParams;

const MU1: f64 = 1.81696;
const MU2: f64 = 4.64107;

fn recursion(q: f64, lambda: f64, samples: u64, seed: u64) -> SimConfig {
    SimConfig::new(ModelParams::new(q, lambda).unwrap(), samples, seed, 4).unwrap()
}

fn within(value: f64, target: f64, se: f64, k: f64) -> bool {
    (value - target).abs() <= k * se
}

#[test]
fn table_moments_from_recursion() {
    let s = run_monte_carlo(&recursion(0.4, 1.0, 1_000_000, 42)).unwrap();
    assert!(within(s.mean, MU1, s.std_error(1), 4.0), "mean {} se {}", s.mean, s.std_error(1));
    assert!(within(s.raw_moment(2), MU2, s.std_error(2), 4.0));
    assert!(s.raw_moment(2) >= s.mean * s.mean);
}

#[test]
fn lambda_scaling_by_simulation() {
    let s = run_monte_carlo(&recursion(0.4, 4.0, 100_000, 7)).unwrap();
    assert!(within(s.mean, MU1 / 2.0, s.std_error(1), 4.0));
}

#[test]
fn small_q_is_rayleigh() {
    let s = run_monte_carlo(&recursion(1e-9, 1.0, 100_000, 5)).unwrap();
    let want = (std::f64::consts::PI / 2.0).sqrt();
    assert!(within(s.mean, want, s.std_error(1), 4.0));
}

#[test]
fn recursion_matches_analytic_layer() {
    for (q, seed) in [(0.2, 101), (0.4, 102), (0.7, 103)] {
        let p = ModelParams::with_q(q).unwrap();
        let (s, xs) = run_monte_carlo_with_samples(&SimConfig::new(p, 1_000_000, seed, 4).unwrap())
            .unwrap();
        let closed = closed_moments(&p, &[1, 2, 3]).unwrap();
        for k in 1..=3 {
            let want = closed.value(k).unwrap();
            assert!(
                within(s.raw_moment(k), want, s.std_error(k), 4.0),
                "q={q} k={k} got={} want={want} se={}",
                s.raw_moment(k),
                s.std_error(k)
            );
        }
        let t_star = convergence_abscissa(q).unwrap().unwrap();
        for t in [-2.0, -1.0, -0.5, 0.5] {
            if t >= t_star {
                continue;
            }
            let (m, se) = empirical_mgf_with_error(&xs, t);
            let want = mgf(t, 0.0, q).unwrap();
            assert!(within(m, want, se, 4.0), "q={q} t={t} got={m} want={want} se={se}");
        }
    }
}

/// At q = 0.7 the point t = 0.5 lies beyond the convergence abscissa: E[e^{tX}]
/// is infinite while the closed form continues analytically to a negative
/// value. The empirical mean is positive and keeps growing with n.
#[test]
fn empirical_mgf_beyond_abscissa_diverges() {
    let q = 0.7;
    assert!(convergence_abscissa(q).unwrap().unwrap() < 0.5);
    assert!(mgf(0.5, 0.0, q).unwrap() < 0.0);
    let (_, xs) = run_monte_carlo_with_samples(&recursion(q, 1.0, 1_000_000, 103)).unwrap();
    assert!(empirical_mgf(&xs, 0.5) > 1.0);
}

#[test]
fn hop_count_is_geometric() {
    let q = 0.4;
    let s = run_monte_carlo(&recursion(q, 1.0, 100_000, 17)).unwrap();
    let mean_hops = s.mean_hops.unwrap();
    let spread = s.hops_std_error.unwrap();
    assert!(mean_hops <= 1.0 / (1.0 - q) + 3.0 * spread);
    assert!(mean_hops >= 1.0 / (1.0 - q) - 3.0 * spread);
}

#[test]
fn determinism_across_workers() {
    let p = ModelParams::with_q(0.4).unwrap();
    let a = run_monte_carlo(&SimConfig::new(p, 300_000, 42, 1).unwrap()).unwrap();
    let b = run_monte_carlo(&SimConfig::new(p, 300_000, 42, 4).unwrap()).unwrap();
    let c = run_monte_carlo(&SimConfig::new(p, 300_000, 42, 4).unwrap()).unwrap();
    assert_eq!(a, b);
    assert_eq!(b, c);
}

fn plane(q: f64, size: f64, margin: f64, seed: u64, replicates: u64) -> PlaneConfig {
    PlaneConfig::new(ModelParams::with_q(q).unwrap(), size, size, margin, seed)
        .unwrap()
        .with_replicates(replicates)
        .unwrap()
        .with_workers(4)
        .unwrap()
}

#[test]
fn plane_single_window() {
    let s = simulate_plane(&plane(0.4, 60.0, 15.0, 11, 1)).unwrap();
    assert!(((s.mean - MU1) / MU1).abs() < 0.05);
    assert!(s.censored_fraction < 0.01 && !s.censor_warning);
}

#[test]
fn plane_matches_recursion() {
    let p = simulate_plane(&plane(0.4, 60.0, 15.0, 11, 20)).unwrap();
    let r = run_monte_carlo(&recursion(0.4, 1.0, 1_000_000, 42)).unwrap();
    assert!(((p.mean - r.mean) / r.mean).abs() < 0.05);
    assert!(p.censored_fraction < 0.01);
}

#[test]
fn censoring_shrinks_with_window() {
    let fractions: Vec<f64> = [8.0, 16.0, 32.0]
        .iter()
        .map(|&w| simulate_plane(&plane(0.4, w, w / 4.0, 23, 40)).unwrap().censored_fraction)
        .collect();
    assert!(fractions[0] >= fractions[1] && fractions[1] >= fractions[2]);
}
