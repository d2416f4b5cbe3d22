//! Direct simulation of east and south rays in a finite window.

use rand::Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;

use super::runner::{chunk_rng, with_pool};
use super::stats::{Accumulator, SimStats};
use super::{MonteCarloError, Result};
use crate::analytic::ModelParams;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneConfig {
    pub params: ModelParams<f64>,
    pub window_width: f64,
    pub window_height: f64,
    /// Seeds closer than this to any window edge are not measured.
    pub margin: f64,
    pub seed: u64,
    /// Independent windows pooled into one estimate; window r uses stream r.
    pub replicates: u64,
    pub workers: usize,
}

impl PlaneConfig {
    pub fn new(
        params: ModelParams<f64>,
        window_width: f64,
        window_height: f64,
        margin: f64,
        seed: u64,
    ) -> Result<Self> {
        let cfg = Self {
            params,
            window_width,
            window_height,
            margin,
            seed,
            replicates: 1,
            workers: 1,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_replicates(mut self, replicates: u64) -> Result<Self> {
        self.replicates = replicates;
        self.validate()?;
        Ok(self)
    }

    pub fn with_workers(mut self, workers: usize) -> Result<Self> {
        self.workers = workers;
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(MonteCarloError::InvalidConfig(m.into()));
        if !(self.window_width > 0.0 && self.window_width.is_finite())
            || !(self.window_height > 0.0 && self.window_height.is_finite())
        {
            return bad("window dimensions must be positive and finite");
        }
        if !(self.margin >= 0.0) {
            return bad("margin must be non-negative");
        }
        if self.margin >= self.window_width.min(self.window_height) / 2.0 {
            return bad("margin leaves an empty interior band (need margin < min(width, height)/2)");
        }
        if self.replicates == 0 {
            return bad("replicates must be at least 1");
        }
        if self.workers == 0 {
            return bad("workers must be at least 1");
        }
        Ok(())
    }

    fn interior(&self, (x, y): (f64, f64)) -> bool {
        let m = self.margin;
        x >= m && x <= self.window_width - m && y >= m && y <= self.window_height - m
    }
}

/// Terminal lengths of every ray in a scene; `None` for rays never blocked.
#[derive(Debug, Clone, PartialEq)]
pub struct SceneOutcome {
    pub east: Vec<Option<f64>>,
    pub south: Vec<Option<f64>>,
}

/// Grows east rays from `east_seeds` and south rays from `south_seeds` at
/// unit speed from time 0 and resolves blockings in time order.
///
/// East ray (x₀, y₀) and south ray (a, b) with a > x₀, b > y₀ cross at
/// (a, y₀); the east tip gets there at a − x₀, the south tip at b − y₀.
/// The later tip stops there if it is still growing and the earlier ray had
/// not stopped before reaching the crossing. Simultaneous arrival stops both.
pub fn simulate_scene(east_seeds: &[(f64, f64)], south_seeds: &[(f64, f64)]) -> SceneOutcome {
    let mut events: Vec<(f64, u32, u32)> = Vec::new();
    for (i, &(x0, y0)) in east_seeds.iter().enumerate() {
        for (j, &(a, b)) in south_seeds.iter().enumerate() {
            if a > x0 && b > y0 {
                events.push(((a - x0).max(b - y0), i as u32, j as u32));
            }
        }
    }
    events.sort_unstable_by(|p, q| p.0.total_cmp(&q.0).then(p.1.cmp(&q.1)).then(p.2.cmp(&q.2)));

    let mut east_stop = vec![f64::INFINITY; east_seeds.len()];
    let mut south_stop = vec![f64::INFINITY; south_seeds.len()];
    for &(_, i, j) in &events {
        let (i, j) = (i as usize, j as usize);
        let (x0, y0) = east_seeds[i];
        let (a, b) = south_seeds[j];
        let te = a - x0;
        let ts = b - y0;
        // Every stop earlier than the current event is already recorded, so
        // an infinite stop time means the ray is still growing.
        if te < ts {
            if south_stop[j].is_infinite() && east_stop[i] > te {
                south_stop[j] = ts;
            }
        } else if ts < te {
            if east_stop[i].is_infinite() && south_stop[j] > ts {
                east_stop[i] = te;
            }
        } else if east_stop[i].is_infinite() && south_stop[j].is_infinite() {
            east_stop[i] = te;
            south_stop[j] = ts;
        }
    }
    let finite = |s: f64| s.is_finite().then_some(s);
    SceneOutcome {
        east: east_stop.into_iter().map(finite).collect(),
        south: south_stop.into_iter().map(finite).collect(),
    }
}

fn run_window(config: &PlaneConfig, replicate: u64) -> (Accumulator, Vec<f64>) {
    let mut rng = chunk_rng(config.seed, replicate);
    let params = &config.params;
    let mean = params.lambda() * config.window_width * config.window_height;
    let count = match Poisson::new(mean) {
        Ok(dist) => dist.sample(&mut rng) as u64,
        Err(_) => 0,
    };
    let mut east = Vec::new();
    let mut south = Vec::new();
    for _ in 0..count {
        let x = rng.random::<f64>() * config.window_width;
        let y = rng.random::<f64>() * config.window_height;
        if rng.random::<f64>() < params.q() {
            east.push((x, y));
        } else {
            south.push((x, y));
        }
    }
    let outcome = simulate_scene(&east, &south);
    let mut acc = Accumulator::default();
    let mut lengths = Vec::new();
    for (seed, length) in east.iter().zip(outcome.east) {
        if !config.interior(*seed) {
            continue;
        }
        match length {
            Some(l) => {
                acc.push(l);
                lengths.push(l);
            }
            None => acc.censored += 1,
        }
    }
    (acc, lengths)
}

/// Terminal lengths of east rays seeded in the interior band, pooled over
/// `config.replicates` independent windows. Rays still growing at the window
/// edge are counted in `censored` and left out of the moments.
pub fn simulate_plane(config: &PlaneConfig) -> Result<SimStats> {
    Ok(simulate_plane_with_samples(config)?.0)
}

/// As [`simulate_plane`], also returning the uncensored interior lengths in
/// replicate order.
pub fn simulate_plane_with_samples(config: &PlaneConfig) -> Result<(SimStats, Vec<f64>)> {
    config.validate()?;
    let parts: Vec<(Accumulator, Vec<f64>)> = with_pool(config.workers, || {
        (0..config.replicates)
            .into_par_iter()
            .map(|r| run_window(config, r))
            .collect()
    })?;
    let mut total = Accumulator::default();
    let mut lengths = Vec::new();
    for (acc, xs) in parts {
        total.merge(&acc);
        lengths.extend(xs);
    }
    Ok((total.finish(config.seed, false), lengths))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn east_passes_first() {
        let out = simulate_scene(&[(0.0, 0.0)], &[(1.0, 2.0)]);
        assert_eq!(out.east, vec![None]);
        assert_eq!(out.south, vec![Some(2.0)]);
    }

    #[test]
    fn south_passes_first() {
        let out = simulate_scene(&[(0.0, 0.0)], &[(2.0, 1.0)]);
        assert_eq!(out.east, vec![Some(2.0)]);
        assert_eq!(out.south, vec![None]);
    }

    #[test]
    fn simultaneous_arrival_stops_both() {
        let out = simulate_scene(&[(0.0, 0.0)], &[(1.0, 1.0)]);
        assert_eq!(out.east, vec![Some(1.0)]);
        assert_eq!(out.south, vec![Some(1.0)]);
    }

    #[test]
    fn stopped_ray_cannot_block() {
        // South ray from (1, 4) is stopped by the east ray from (0, 2) at
        // time 2, before reaching y = 0, so the lower east ray runs free.
        let out = simulate_scene(&[(0.0, 2.0), (-5.0, 0.0)], &[(1.0, 4.0)]);
        assert_eq!(out.south, vec![Some(2.0)]);
        assert_eq!(out.east, vec![None, None]);
    }

    #[test]
    fn blocker_stopped_after_crossing_still_blocks() {
        // South ray (1, 1) passes y = 0 at time 1, then is stopped at time 2
        // crossing y = −1; the east ray from (−2, 0) arrives at time 3 and stops.
        let out = simulate_scene(&[(-2.0, 0.0), (0.5, -1.0)], &[(1.0, 1.0)]);
        assert_eq!(out.south, vec![Some(2.0)]);
        assert_eq!(out.east, vec![Some(3.0), None]);
    }

    #[test]
    fn empty_margin_band_rejected() {
        let p = ModelParams::with_q(0.4).unwrap();
        assert!(PlaneConfig::new(p, 60.0, 60.0, 40.0, 1).is_err());
        assert!(PlaneConfig::new(p, 60.0, 60.0, 30.0, 1).is_err());
        assert!(PlaneConfig::new(p, 60.0, 60.0, -1.0, 1).is_err());
        assert!(PlaneConfig::new(p, 60.0, 60.0, 15.0, 1).is_ok());
    }

    #[test]
    fn empty_window() {
        let p = ModelParams::new(0.4, 1e-12).unwrap();
        let cfg = PlaneConfig::new(p, 1.0, 1.0, 0.0, 3).unwrap();
        let s = simulate_plane(&cfg).unwrap();
        assert_eq!(s.n, 0);
        assert_eq!(s.censored, 0);
        assert!(s.mean.is_nan());
    }

    #[test]
    fn worker_count_does_not_change_output() {
        let p = ModelParams::with_q(0.4).unwrap();
        let cfg = PlaneConfig::new(p, 20.0, 20.0, 5.0, 4)
            .unwrap()
            .with_replicates(6)
            .unwrap();
        let a = simulate_plane(&cfg).unwrap();
        let b = simulate_plane(&cfg.with_workers(4).unwrap()).unwrap();
        assert_eq!(a, b);
    }
}
