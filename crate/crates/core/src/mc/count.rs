//! Lattice points of `SL(2, Z)` in `B_ρ = {g : ‖Ad_g‖ ≤ ρ}`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

pub const MAX_COUNT_RADIUS: f64 = 1e4;

/// `(g, x, y)` with `a x + b y = g = gcd(a, b) ≥ 0`.
fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a.abs(), a.signum(), 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

/// Number of `[[a, b], [c, d]] ∈ SL(2, Z)` with `‖Ad_g‖ ≤ ρ`.
///
/// On `SL(2)`, `‖Ad_g‖ = σ_1² ` and `σ_1² + σ_1^{-2} = a² + b² + c² + d²`, so
/// the ball is `a² + b² + c² + d² ≤ ρ + 1/ρ`. Rows `(a, b)` are coprime; the
/// second rows form the line `(c_0, d_0) + k (a, b)`.
pub fn sl2z_count(rho: f64) -> Result<u64> {
    if !(rho >= 1.0) {
        return invalid(format!("ρ must be at least 1, got {rho}"));
    }
    if rho > MAX_COUNT_RADIUS {
        return invalid(format!("ρ = {rho} exceeds {MAX_COUNT_RADIUS}"));
    }
    let bound = (rho + 1.0 / rho + 1e-9).floor() as i64;
    let amax = ((bound - 1) as f64).sqrt().floor() as i64 + 1;
    let mut count = 0u64;
    for a in -amax..=amax {
        for b in -amax..=amax {
            let w2 = a * a + b * b;
            if w2 == 0 || w2 > bound - 1 {
                continue;
            }
            let (g, x, y) = ext_gcd(a, b);
            if g != 1 {
                continue;
            }
            // a d0 - b c0 = 1
            let (c0, d0) = (-y, x);
            // |(c0, d0) + k (a, b)|² ≤ bound - w2
            let dot = (c0 * a + d0 * b) as f64;
            let k0 = -dot / w2 as f64;
            let room = (bound - w2) as f64 / w2 as f64;
            let spread = (k0 * k0 - ((c0 * c0 + d0 * d0) as f64 / w2 as f64 - room)).max(0.0).sqrt();
            let lo = (k0 - spread).floor() as i64 - 1;
            let hi = (k0 + spread).ceil() as i64 + 1;
            for k in lo..=hi {
                let (c, d) = (c0 + k * a, d0 + k * b);
                if w2 + c * c + d * d <= bound {
                    count += 1;
                }
            }
        }
    }
    Ok(count)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountSeries {
    pub radii: Vec<f64>,
    pub counts: Vec<u64>,
    pub fitted_exponent: f64,
    pub fit_residual: f64,
}

/// Counts at each radius, fitted with `log_power = 1`.
pub fn sl2z_series(radii: &[f64]) -> Result<CountSeries> {
    let counts = radii.iter().map(|&r| sl2z_count(r)).collect::<Result<Vec<_>>>()?;
    let (fitted_exponent, fit_residual) = growth_fit(radii, &counts, 1)?;
    Ok(CountSeries { radii: radii.to_vec(), counts, fitted_exponent, fit_residual })
}

/// Least-squares slope of `log(count / (log ρ)^log_power)` against `log ρ`
/// and the root-mean-square residual of the fit.
pub fn growth_fit(radii: &[f64], counts: &[u64], log_power: u32) -> Result<(f64, f64)> {
    if radii.len() != counts.len() {
        return Err(Error::Arity { expected: radii.len(), got: counts.len() });
    }
    if radii.len() < 5 {
        return invalid("growth fit needs at least 5 radii");
    }
    if radii.iter().any(|&r| !(r > 1.0)) || counts.iter().any(|&c| c == 0) {
        return invalid("radii must exceed 1 and counts must be positive");
    }
    if radii.windows(2).any(|w| w[1] <= w[0]) || counts.windows(2).any(|w| w[1] < w[0]) {
        return invalid("radii must increase and counts must not decrease");
    }
    if radii[radii.len() - 1] / radii[0] < 10.0 {
        return invalid("radii must span at least a decade");
    }
    let xs: Vec<f64> = radii.iter().map(|r| r.ln()).collect();
    let ys: Vec<f64> = radii
        .iter()
        .zip(counts)
        .map(|(r, &c)| (c as f64).ln() - log_power as f64 * r.ln().ln())
        .collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;
    let rms = (xs.iter().zip(&ys).map(|(x, y)| (y - my - slope * (x - mx)).powi(2)).sum::<f64>() / n).sqrt();
    Ok((slope, rms))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(rho: f64) -> u64 {
        let bound = (rho + 1.0 / rho + 1e-9).floor() as i64;
        let e = (bound as f64).sqrt() as i64;
        let mut n = 0;
        for a in -e..=e {
            for b in -e..=e {
                for c in -e..=e {
                    for d in -e..=e {
                        if a * d - b * c == 1 && a * a + b * b + c * c + d * d <= bound {
                            n += 1;
                        }
                    }
                }
            }
        }
        n
    }

    #[test]
    fn small_radii_match_brute_force() {
        assert_eq!(sl2z_count(1.0 + 1e-6).unwrap(), 4);
        assert_eq!(sl2z_count(2.0).unwrap(), 4);
        for rho in [3.0, 5.5, 10.0, 17.0, 40.0, 90.0] {
            assert_eq!(sl2z_count(rho).unwrap(), brute(rho), "ρ = {rho}");
        }
        assert!(sl2z_count(2e4).is_err());
    }

    #[test]
    fn fit_controls() {
        let radii = [10.0, 30.0, 100.0, 300.0, 1000.0];
        let exact: Vec<u64> = radii.iter().map(|r: &f64| (1e6 * r * r.ln()).round() as u64).collect();
        let (s, res) = growth_fit(&radii, &exact, 1).unwrap();
        assert!((s - 1.0).abs() < 1e-6 && res < 1e-6);
        let sq: Vec<u64> = radii.iter().map(|r| (r * r) as u64).collect();
        let (s, res) = growth_fit(&radii, &sq, 1).unwrap();
        assert!(s < 2.0 && res > 0.0);
        assert!(growth_fit(&radii[..4], &sq[..4], 1).is_err());
        assert!(growth_fit(&[2.0, 3.0, 4.0, 5.0, 6.0], &[1, 2, 3, 4, 5], 1).is_err());
    }
}
