//! Volume ratios `Λ(V_{ε,ρR}) / Λ(V_{ε,R})` of nilpotent-cone tubes in `sl(2, R)`.

use serde::{Deserialize, Serialize};

use super::{volume_mc_ball, McConfig, McEstimate};
use crate::error::{invalid, Result};
use crate::lie::sl2_tube_orthonormal;

/// Half of `d = 2` for `sl:2`.
const HALF_NILPOTENT_DIM: f64 = 1.0;

/// `Λ(V_{ε,R})` in `B_θ`-orthonormal coordinates, sampled from the ball of
/// radius `R` that contains the tube.
pub fn tube_volume_mc(eps: f64, r: f64, cfg: &McConfig) -> Result<McEstimate> {
    if !(eps > 0.0 && r > 0.0) {
        return invalid("ε and R must be positive");
    }
    volume_mc_ball(&|y| sl2_tube_orthonormal(y, eps, r), 3, r, cfg)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KeyLemmaEstimate {
    pub eps: f64,
    pub r: f64,
    pub rho: f64,
    pub ratio: f64,
    pub stderr: f64,
    pub expected: f64,
    pub numerator: McEstimate,
    pub denominator: McEstimate,
}

/// Both volumes use the same seed. Sample points are scaled copies of each other,
/// so the two hit sets are coupled and the ratio at `ρ = 1` is exactly one.
/// The reported stderr treats the volumes as independent, which overstates it.
pub fn key_lemma_ratio(eps: f64, r: f64, rho: f64, cfg: &McConfig) -> Result<KeyLemmaEstimate> {
    if !(rho >= 1.0) {
        return invalid(format!("ρ must be at least 1, got {rho}"));
    }
    if eps > r / 5.0 {
        log::warn!("ε = {eps} exceeds R/5 = {}; the tube is not thin", r / 5.0);
    }
    let numerator = tube_volume_mc(eps, rho * r, cfg)?;
    let denominator = tube_volume_mc(eps, r, cfg)?;
    let (ratio, stderr) = if denominator.hits == 0 || numerator.hits == 0 {
        (f64::NAN, f64::NAN)
    } else {
        let q = numerator.mean / denominator.mean;
        let rel = ((numerator.stderr / numerator.mean).powi(2) + (denominator.stderr / denominator.mean).powi(2)).sqrt();
        (q, q * rel)
    };
    Ok(KeyLemmaEstimate {
        eps,
        r,
        rho,
        ratio,
        stderr,
        expected: rho.powf(HALF_NILPOTENT_DIM),
        numerator,
        denominator,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KeyLemmaSchedule {
    pub rows: Vec<KeyLemmaEstimate>,
    /// Linear extrapolation to `ε = 0` through the two smallest `ε`.
    pub extrapolated: Option<f64>,
}

impl KeyLemmaSchedule {
    pub fn last(&self) -> &KeyLemmaEstimate {
        self.rows.last().expect("schedules are nonempty")
    }

    /// Final ratio within `rel_tol` of `ρ^{d/2}`.
    pub fn within(&self, rel_tol: f64) -> bool {
        let l = self.last();
        (l.ratio - l.expected).abs() <= rel_tol * l.expected
    }

    /// `|ratio - ρ^{d/2}|` nonincreasing along the schedule.
    pub fn monotone_approach(&self) -> bool {
        self.rows
            .windows(2)
            .all(|w| (w[1].ratio - w[1].expected).abs() <= (w[0].ratio - w[0].expected).abs())
    }
}

/// Ratios along a decreasing `ε` schedule, all with the same seed.
pub fn key_lemma_schedule(eps: &[f64], r: f64, rho: f64, cfg: &McConfig) -> Result<KeyLemmaSchedule> {
    if eps.is_empty() {
        return invalid("empty ε schedule");
    }
    if eps.windows(2).any(|w| w[1] >= w[0]) {
        return invalid("ε schedule must be strictly decreasing");
    }
    let rows = eps.iter().map(|&e| key_lemma_ratio(e, r, rho, cfg)).collect::<Result<Vec<_>>>()?;
    let extrapolated = match rows.as_slice() {
        [.., a, b] => Some(b.ratio - b.eps * (a.ratio - b.ratio) / (a.eps - b.eps)),
        _ => None,
    };
    Ok(KeyLemmaSchedule { rows, extrapolated })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    // Cylindrical coordinates around the v-axis of y0² + u² - v².
    fn exact_volume(eps: f64, r: f64) -> f64 {
        let v1 = ((r * r - eps * eps) / 2.0).sqrt();
        let v2 = ((r * r + eps * eps) / 2.0).sqrt();
        2.0 * PI
            * (4.0 * eps.powi(3) / 3.0 + 2.0 * eps * eps * (v1 - eps) + (4.0 / 3.0) * v2.powi(3) - 2.0 * v2 * v2 * v1
                + (2.0 / 3.0) * v1.powi(3))
    }

    #[test]
    fn volume_matches_closed_form() {
        let cfg = McConfig::new(2_000_000, 5).unwrap();
        for (eps, r) in [(0.2, 1.0), (0.1, 0.5)] {
            let est = tube_volume_mc(eps, r, &cfg).unwrap();
            assert!((est.mean - exact_volume(eps, r)).abs() < 3.0 * est.stderr, "{est:?} vs {}", exact_volume(eps, r));
        }
    }

    #[test]
    fn null_ratio_is_one() {
        let cfg = McConfig::new(100_000, 9).unwrap();
        for eps in [0.1, 0.05] {
            let k = key_lemma_ratio(eps, 0.5, 1.0, &cfg).unwrap();
            assert_eq!(k.ratio, 1.0);
        }
    }

    #[test]
    fn ratio_tracks_exact_ratio() {
        let cfg = McConfig::new(1_000_000, 1).unwrap();
        let s = key_lemma_schedule(&[0.1, 0.05], 0.5, 2.0, &cfg).unwrap();
        for row in &s.rows {
            let exact = exact_volume(row.eps, 1.0) / exact_volume(row.eps, 0.5);
            assert!((row.ratio - exact).abs() < 3.0 * row.stderr, "{} vs {exact}", row.ratio);
        }
        assert!(s.extrapolated.is_some());
        assert!(key_lemma_schedule(&[0.05, 0.1], 0.5, 2.0, &cfg).is_err());
    }
}
