use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{FioError, Result};
use crate::field::{lp_norm, random_test_function, Field, GridSpec, ProbeFamily};

/// Fewest trials a norm estimate accepts.
pub const MIN_TRIALS: usize = 8;

/// Ratios above this look unbounded and are flagged.
pub const UNBOUNDED_RATIO: f64 = 1e12;

/// The probe that realized the lower bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub trial: usize,
    pub seed: u64,
    pub family: ProbeFamily,
}

/// `max_u ‖T u‖_r / ‖u‖_q` over the trial probes: a lower bound on the
/// discrete operator norm, never the norm itself.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormEstimate {
    pub lower_bound: f64,
    pub witness: Witness,
    pub ratios: Vec<f64>,
    pub flagged: bool,
}

/// Probe seed of trial `t`.
pub fn trial_seed(seed: u64, t: usize) -> u64 {
    seed.wrapping_add(t as u64)
}

pub fn estimate_operator_norm(
    apply: impl Fn(&Field) -> Result<Field> + Sync,
    grid: &GridSpec,
    q: f64,
    r: f64,
    trials: usize,
    seed: u64,
    family: ProbeFamily,
) -> Result<NormEstimate> {
    if trials < MIN_TRIALS {
        return Err(FioError::Config(format!("{trials} trials, need at least {MIN_TRIALS}")));
    }
    let ratios: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let u = random_test_function(grid, family, trial_seed(seed, t))?;
            let out = apply(&u)?;
            Ok(lp_norm(&out, r)? / lp_norm(&u, q)?)
        })
        .collect::<Result<_>>()?;
    let (trial, lower_bound) =
        ratios.iter().enumerate().fold(
            (0, f64::NEG_INFINITY),
            |best, (i, v)| if *v > best.1 { (i, *v) } else { best },
        );
    Ok(NormEstimate {
        lower_bound,
        witness: Witness {
            trial,
            seed: trial_seed(seed, trial),
            family,
        },
        flagged: !(lower_bound <= UNBOUNDED_RATIO),
        ratios,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::LinearFio;
    use crate::symbols::{catalog, japanese, CatalogEntry};

    #[test]
    fn identity_has_norm_one() {
        let g = GridSpec::new(1, 16.0, 256).unwrap();
        let e = estimate_operator_norm(|u| Ok(u.clone()), &g, 2.0, 2.0, 8, 1, ProbeFamily::GaussianPacket).unwrap();
        assert!((e.lower_bound - 1.0).abs() < 1e-10);
        assert!(!e.flagged);
    }

    #[test]
    fn zero_operator() {
        let g = GridSpec::new(1, 16.0, 256).unwrap();
        let e = estimate_operator_norm(
            |u| Ok(Field::zeros(*u.grid())),
            &g,
            2.0,
            2.0,
            8,
            1,
            ProbeFamily::BandLimitedNoise,
        )
        .unwrap();
        assert_eq!(e.lower_bound, 0.0);
    }

    #[test]
    fn multiplier_bounds() {
        let g = GridSpec::new(1, 16.0, 256).unwrap();
        let a = catalog(
            &CatalogEntry::Hormander {
                m: -1.0,
                rho: 1.0,
                localized: false,
            },
            1,
        )
        .unwrap()
        .into_amplitude()
        .unwrap();
        let phi = catalog(&CatalogEntry::LinearPhase, 1).unwrap().into_phase().unwrap();
        let op = LinearFio::new(a, phi, g, false).unwrap();
        let e = estimate_operator_norm(|u| op.apply(u), &g, 2.0, 2.0, 8, 3, ProbeFamily::BandLimitedNoise).unwrap();
        // Plancherel: the multiplier lies between its values at the band edge and at 0.
        let edge = japanese(&[g.nyquist() / 4.0]).recip();
        assert!(e.lower_bound <= 1.0 && e.lower_bound >= edge, "{}", e.lower_bound);
    }

    #[test]
    fn huge_ratios_are_flagged() {
        let g = GridSpec::new(1, 16.0, 256).unwrap();
        let e = estimate_operator_norm(
            |u| Ok(u.scaled(num_complex::Complex64::new(1e13, 0.0))),
            &g,
            2.0,
            2.0,
            8,
            1,
            ProbeFamily::GaussianPacket,
        )
        .unwrap();
        assert!(e.flagged);
        assert!(estimate_operator_norm(|u| Ok(u.clone()), &g, 2.0, 2.0, 7, 1, ProbeFamily::GaussianPacket).is_err());
    }
}
