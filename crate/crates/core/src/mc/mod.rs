//! Monte Carlo volumes, δ estimates and lattice-point counts.
//!
//! Every estimator splits its samples into batches. Batch `b` draws from
//! `ChaCha8Rng::seed_from_u64(seed)` on stream `b`, so results depend only on
//! `(seed, samples, batch)` and not on how rayon schedules the batches.

mod count;
mod delta;
mod key_lemma;

use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

pub use count::{growth_fit, sl2z_count, sl2z_series, CountSeries};
pub use delta::{
    delta_mc, theorem_b_consistency, DeltaBackend, FiniteDeltaBackend, LieDeltaBackend, Neighbourhood, Survival,
    TheoremBReport, MAX_LOG_FAILURE_RATE,
};
pub use key_lemma::{key_lemma_ratio, key_lemma_schedule, tube_volume_mc, KeyLemmaEstimate, KeyLemmaSchedule};

pub const MIN_SAMPLES: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct McConfig {
    pub samples: usize,
    pub seed: u64,
    pub batch: usize,
}

impl Default for McConfig {
    fn default() -> Self {
        Self { samples: 1_000_000, seed: 0, batch: 10_000 }
    }
}

impl McConfig {
    pub fn new(samples: usize, seed: u64) -> Result<Self> {
        let batch = [100_000, 50_000, 25_000, 10_000, 5_000, 1_000]
            .into_iter()
            .find(|b| samples % b == 0 && samples >= *b)
            .unwrap_or(samples);
        let cfg = Self { samples, seed, batch };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples < MIN_SAMPLES {
            return invalid(format!("at least {MIN_SAMPLES} samples required, got {}", self.samples));
        }
        if self.batch == 0 || self.samples % self.batch != 0 {
            return invalid(format!("batch {} must divide samples {}", self.batch, self.samples));
        }
        Ok(())
    }

    pub fn batches(&self) -> usize {
        self.samples / self.batch
    }

    pub(crate) fn batch_rng(&self, b: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(b as u64);
        rng
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: usize,
    pub seed: u64,
    pub hits: usize,
    /// Set when no sample hit; `stderr` is then zero but carries no information.
    pub zero_information: bool,
}

impl McEstimate {
    /// Proportion estimate `hits / samples` scaled by `scale`.
    pub fn from_hits(hits: usize, samples: usize, seed: u64, scale: f64) -> Self {
        let p = hits as f64 / samples as f64;
        Self {
            mean: p * scale,
            stderr: (p * (1.0 - p) / samples as f64).sqrt() * scale,
            samples,
            seed,
            hits,
            zero_information: hits == 0,
        }
    }
}

/// One CSV row `(eps, R, rho, estimate, stderr, samples, seed)`; parameters
/// that do not apply are left empty.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McRow {
    pub eps: Option<f64>,
    #[serde(rename = "R")]
    pub r: Option<f64>,
    pub rho: Option<f64>,
    pub estimate: f64,
    pub stderr: f64,
    pub samples: usize,
    pub seed: u64,
}

impl McRow {
    pub fn new(eps: Option<f64>, r: Option<f64>, rho: Option<f64>, est: &McEstimate) -> Self {
        Self { eps, r, rho, estimate: est.mean, stderr: est.stderr, samples: est.samples, seed: est.seed }
    }
}

pub fn write_mc_csv<W: std::io::Write>(rows: &[McRow], w: W) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    for r in rows {
        wr.serialize(r)?;
    }
    wr.flush()?;
    Ok(())
}

pub fn read_mc_csv<R: std::io::Read>(r: R) -> Result<Vec<McRow>> {
    csv::Reader::from_reader(r).deserialize().map(|row| Ok(row?)).collect()
}

/// Rejection estimate of the volume of `{x ∈ [-w, w]^dim : oracle(x)}`.
pub fn volume_mc(oracle: &(dyn Fn(&[f64]) -> bool + Sync), dim: usize, half_width: f64, cfg: &McConfig) -> Result<McEstimate> {
    cfg.validate()?;
    if dim == 0 || !(half_width > 0.0) {
        return invalid("dimension and box half-width must be positive");
    }
    let hits: usize = (0..cfg.batches())
        .into_par_iter()
        .map(|b| {
            let mut rng = cfg.batch_rng(b);
            let mut x = vec![0.0; dim];
            let mut h = 0usize;
            for _ in 0..cfg.batch {
                for v in x.iter_mut() {
                    *v = half_width * (2.0 * rng.gen::<f64>() - 1.0);
                }
                if oracle(&x) {
                    h += 1;
                }
            }
            h
        })
        .collect::<Vec<_>>()
        .into_iter()
        .sum();
    let volume = (2.0 * half_width).powi(dim as i32);
    Ok(McEstimate::from_hits(hits, cfg.samples, cfg.seed, volume))
}

/// Rejection estimate over the ball `{‖x‖ < radius}` in `R^dim`. Points are
/// a Gaussian direction scaled by `radius · U^{1/dim}`, so estimates with the
/// same seed at different radii use scaled copies of one point cloud.
pub fn volume_mc_ball(oracle: &(dyn Fn(&[f64]) -> bool + Sync), dim: usize, radius: f64, cfg: &McConfig) -> Result<McEstimate> {
    cfg.validate()?;
    if dim == 0 || !(radius > 0.0) {
        return invalid("dimension and radius must be positive");
    }
    let hits: usize = (0..cfg.batches())
        .into_par_iter()
        .map(|b| {
            let mut rng = cfg.batch_rng(b);
            let mut x = vec![0.0; dim];
            let mut h = 0usize;
            for _ in 0..cfg.batch {
                let norm = loop {
                    for v in x.iter_mut() {
                        *v = rng.sample::<f64, _>(StandardNormal);
                    }
                    let n = x.iter().map(|v| v * v).sum::<f64>().sqrt();
                    if n > 0.0 {
                        break n;
                    }
                };
                let scale = radius * rng.gen::<f64>().powf(1.0 / dim as f64) / norm;
                for v in x.iter_mut() {
                    *v *= scale;
                }
                if oracle(&x) {
                    h += 1;
                }
            }
            h
        })
        .collect::<Vec<_>>()
        .into_iter()
        .sum();
    Ok(McEstimate::from_hits(hits, cfg.samples, cfg.seed, ball_volume(dim, radius)))
}

/// `π^{d/2} r^d / Γ(d/2 + 1)`.
pub fn ball_volume(dim: usize, radius: f64) -> f64 {
    // Γ(d/2 + 1) by the recursion from Γ(1) = 1 or Γ(3/2) = √π/2.
    let mut gamma = if dim % 2 == 0 { 1.0 } else { std::f64::consts::PI.sqrt() / 2.0 };
    let mut k = if dim % 2 == 0 { 1.0 } else { 1.5 };
    while k < dim as f64 / 2.0 + 1.0 - 1e-9 {
        gamma *= k;
        k += 1.0;
    }
    std::f64::consts::PI.powf(dim as f64 / 2.0) * radius.powi(dim as i32) / gamma
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_ball_and_empty() {
        let cfg = McConfig::new(1_000_000, 3).unwrap();
        let all = volume_mc(&|_| true, 3, 1.0, &cfg).unwrap();
        assert_eq!((all.mean, all.stderr), (8.0, 0.0));
        let ball = volume_mc(&|x| x.iter().map(|v| v * v).sum::<f64>() < 1.0, 3, 1.0, &cfg).unwrap();
        assert!((ball.mean - 4.0 * std::f64::consts::PI / 3.0).abs() < 3.0 * ball.stderr);
        let none = volume_mc(&|_| false, 3, 1.0, &cfg).unwrap();
        assert!(none.mean == 0.0 && none.zero_information);
        assert_eq!(volume_mc(&|x| x[0] > 0.3, 2, 1.0, &cfg).unwrap(), volume_mc(&|x| x[0] > 0.3, 2, 1.0, &cfg).unwrap());
    }

    #[test]
    fn ball_sampler() {
        assert!((ball_volume(2, 1.0) - std::f64::consts::PI).abs() < 1e-15);
        assert!((ball_volume(3, 2.0) - 32.0 * std::f64::consts::PI / 3.0).abs() < 1e-12);
        let cfg = McConfig::new(1_000_000, 1).unwrap();
        let all = volume_mc_ball(&|_| true, 3, 1.0, &cfg).unwrap();
        assert_eq!(all.mean, ball_volume(3, 1.0));
        let cube = volume_mc_ball(&|x| x.iter().all(|v| v.abs() < 0.5), 3, 1.0, &cfg).unwrap();
        assert!((cube.mean - 1.0).abs() < 3.0 * cube.stderr);
    }

    #[test]
    fn csv_round_trip() {
        let est = McEstimate::from_hits(1234, 10_000, 7, 0.1);
        let rows = vec![McRow::new(Some(0.025), Some(0.5), Some(2.0), &est), McRow::new(None, None, None, &est)];
        let mut buf = Vec::new();
        write_mc_csv(&rows, &mut buf).unwrap();
        assert!(String::from_utf8(buf.clone()).unwrap().starts_with("eps,R,rho,estimate,stderr,samples,seed\n"));
        assert_eq!(read_mc_csv(buf.as_slice()).unwrap(), rows);
    }

    #[test]
    fn config_validation() {
        assert!(McConfig::new(999, 0).is_err());
        assert!(McConfig { samples: 20_000, seed: 0, batch: 3_000 }.validate().is_err());
        assert_eq!(McConfig::new(30_000, 0).unwrap().batch, 10_000);
    }
}
