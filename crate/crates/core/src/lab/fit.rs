use serde::{Deserialize, Serialize};

use crate::error::{FioError, Result};

/// Fewest points a fit accepts.
pub const MIN_FIT_POINTS: usize = 4;

/// How the abscissa enters the fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Abscissa {
    /// Used as given, e.g. a dyadic level `j`.
    Level,
    /// Replaced by `log₂` of itself, e.g. `1 + |k|`.
    Log,
}

/// Least-squares line through `(abscissa, log₂ quantity)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// The fitted `(x, log₂ quantity)` pairs.
    pub points: Vec<(f64, f64)>,
}

/// Fits `log₂ q = slope·x + intercept` with `x = j` or `x = log₂(abscissa)`.
pub fn fit_decay_exponent(points: &[(f64, f64)], abscissa: Abscissa) -> Result<DecayFit> {
    if points.len() < MIN_FIT_POINTS {
        return Err(FioError::Fit(format!(
            "{} points, need at least {MIN_FIT_POINTS}",
            points.len()
        )));
    }
    let mut xy = Vec::with_capacity(points.len());
    for &(a, q) in points {
        if !(q > 0.0) || !q.is_finite() {
            return Err(FioError::Fit(format!("quantity {q} at {a} is not positive")));
        }
        let x = match abscissa {
            Abscissa::Level => a,
            Abscissa::Log => {
                if !(a > 0.0) {
                    return Err(FioError::Fit(format!("abscissa {a} is not positive")));
                }
                a.log2()
            }
        };
        xy.push((x, q.log2()));
    }
    let n = xy.len() as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / n;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = xy.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(FioError::Fit("all abscissae coincide".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0)
    };
    Ok(DecayFit {
        slope,
        intercept,
        r_squared,
        points: xy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn exact_power_of_two() {
        let pts: Vec<(f64, f64)> = (0..8).map(|j| (j as f64, 2f64.powi(-j))).collect();
        let f = fit_decay_exponent(&pts, Abscissa::Level).unwrap();
        assert!((f.slope + 1.0).abs() < 1e-12);
        assert!((f.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constant_sequence() {
        let pts: Vec<(f64, f64)> = (0..6).map(|j| (j as f64, 3.0)).collect();
        let f = fit_decay_exponent(&pts, Abscissa::Level).unwrap();
        assert_eq!(f.slope, 0.0);
    }

    #[test]
    fn noisy_half_power() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let pts: Vec<(f64, f64)> = (3..12)
            .map(|j| {
                (
                    j as f64,
                    2f64.powf(-0.5 * j as f64) * (1.0 + rng.random_range(-0.01..0.01)),
                )
            })
            .collect();
        let f = fit_decay_exponent(&pts, Abscissa::Level).unwrap();
        assert!((-0.55..=-0.45).contains(&f.slope), "{}", f.slope);
    }

    #[test]
    fn power_law_in_log_abscissa() {
        let pts: Vec<(f64, f64)> = (1..10).map(|k| (1.0 + k as f64, (1.0 + k as f64).powf(-3.0))).collect();
        let f = fit_decay_exponent(&pts, Abscissa::Log).unwrap();
        assert!((f.slope + 3.0).abs() < 1e-12);
    }

    #[test]
    fn bad_inputs() {
        assert!(fit_decay_exponent(&[(0.0, 1.0), (1.0, 1.0), (2.0, 1.0)], Abscissa::Level).is_err());
        assert!(fit_decay_exponent(&[(0.0, 1.0), (1.0, 0.0), (2.0, 1.0), (3.0, 1.0)], Abscissa::Level).is_err());
        assert!(fit_decay_exponent(&[(0.0, 1.0), (1.0, 1.0), (2.0, 1.0), (3.0, 1.0)], Abscissa::Log).is_err());
    }
}
