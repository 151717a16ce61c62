use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{fourier_transform, inverse_fourier_transform, Field, GridSpec, SpectralField};
use crate::decomp::{ConeCover, LittlewoodPaley};
use crate::error::{FioError, Result};

/// Probe families used for operator-norm estimation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum ProbeFamily {
    /// A modulated Gaussian with random centre, width and carrier.
    GaussianPacket,
    /// Random coefficients on `|ξ| ≤ Nyquist/4`, windowed by a Gaussian.
    BandLimitedNoise,
    /// A packet whose spectrum is concentrated inside one `(level, direction)` cone-shell.
    WavePacket { level: u32, direction: usize },
}

impl std::fmt::Display for ProbeFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ProbeFamily::GaussianPacket => write!(f, "gaussian-packet"),
            ProbeFamily::BandLimitedNoise => write!(f, "band-limited-noise"),
            ProbeFamily::WavePacket { level, direction } => write!(f, "wave-packet({level},{direction})"),
        }
    }
}

/// Number of Gaussian widths that must fit below Nyquist.
const SPECTRAL_WIDTHS: f64 = 7.0;

fn normalized(f: Field) -> Result<Field> {
    let norm = f.l2_norm();
    if norm == 0.0 {
        return Err(FioError::InvalidField("probe vanished on the grid".into()));
    }
    Ok(f.scaled(Complex64::new(1.0 / norm, 0.0)))
}

/// `exp(−|x−c|²/(2σ²) + i⟨ω, x⟩)`, normalized in L².
pub fn gaussian_packet(grid: &GridSpec, centre: &[f64], sigma: f64, carrier: &[f64]) -> Result<Field> {
    let dim = grid.dim();
    if centre.len() < dim || carrier.len() < dim {
        return Err(FioError::InvalidField(
            "centre and carrier need one entry per axis".into(),
        ));
    }
    if !(sigma > 0.0) {
        return Err(FioError::InvalidField(format!("width {sigma} must be positive")));
    }
    let reach = carrier[..dim].iter().fold(0.0f64, |m, c| m.max(c.abs())) + SPECTRAL_WIDTHS / sigma;
    if reach > grid.nyquist() {
        return Err(FioError::AboveNyquist(format!(
            "packet reaches |ξ| = {reach:.3}, Nyquist is {:.3}",
            grid.nyquist()
        )));
    }
    let f = Field::from_fn(*grid, |x| {
        let mut r2 = 0.0;
        let mut phase = 0.0;
        for a in 0..dim {
            r2 += (x[a] - centre[a]).powi(2);
            phase += carrier[a] * x[a];
        }
        Complex64::from_polar((-r2 / (2.0 * sigma * sigma)).exp(), phase)
    })?;
    normalized(f)
}

/// A unit-L² probe drawn deterministically from `seed`.
pub fn random_test_function(grid: &GridSpec, family: ProbeFamily, seed: u64) -> Result<Field> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = grid.dim();
    let l = grid.half_extent();
    match family {
        ProbeFamily::GaussianPacket => {
            let sigma = rng.random_range(0.05 * l..=0.0875 * l);
            let room = grid.nyquist() - SPECTRAL_WIDTHS / sigma;
            if room < 0.0 {
                return Err(FioError::AboveNyquist(format!(
                    "a packet of width {sigma:.3} does not fit below Nyquist {:.3}",
                    grid.nyquist()
                )));
            }
            let cap = room.min(grid.nyquist() / 4.0);
            let mut centre = [0.0; 2];
            let mut carrier = [0.0; 2];
            for a in 0..dim {
                centre[a] = rng.random_range(-l / 4.0..=l / 4.0);
                carrier[a] = rng.random_range(-cap..=cap);
            }
            gaussian_packet(grid, &centre, sigma, &carrier)
        }
        ProbeFamily::BandLimitedNoise => {
            let band = grid.nyquist() / 4.0;
            let s = 0.9 * l / 7.5;
            if SPECTRAL_WIDTHS / s + band > grid.nyquist() {
                return Err(FioError::AboveNyquist("grid too coarse for windowed noise".into()));
            }
            let coeffs = grid
                .frequencies()
                .map(|k| {
                    let (re, im) = (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                    if k[0].hypot(k[1]) <= band {
                        Complex64::new(re, im)
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                })
                .collect();
            let raw = inverse_fourier_transform(&SpectralField::new(*grid, coeffs)?);
            let windowed: Vec<Complex64> = raw
                .values()
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    let p = grid.point(i);
                    v * (-(p[0] * p[0] + p[1] * p[1]) / (2.0 * s * s)).exp()
                })
                .collect();
            normalized(Field::new(*grid, windowed)?)
        }
        ProbeFamily::WavePacket { level, direction } => wave_packet(grid, level, direction, &mut rng),
    }
}

fn wave_packet(grid: &GridSpec, level: u32, direction: usize, rng: &mut ChaCha8Rng) -> Result<Field> {
    let dim = grid.dim();
    let lp = LittlewoodPaley::build(grid)?;
    if level == 0 || level > lp.j_max() {
        return Err(FioError::AboveNyquist(format!(
            "level {level} outside 1..={} for this grid",
            lp.j_max()
        )));
    }
    let cover = ConeCover::build(level, dim)?;
    if direction >= cover.len() {
        return Err(FioError::InvalidField(format!(
            "direction {direction} out of range, level {level} has {}",
            cover.len()
        )));
    }
    let scale = 2f64.powi(level as i32);
    let radius = scale * rng.random_range(0.9..=1.1);
    let sigma_r = scale / 16.0;
    let sigma_a = cover.width() / 8.0;
    let dir = cover.directions()[direction];
    let l = grid.half_extent();
    let mut shift = [0.0; 2];
    for s in shift.iter_mut().take(dim) {
        *s = rng.random_range(-l / 8.0..=l / 8.0);
    }
    // Gaussian in polar coordinates, centred on the cone axis inside the shell.
    let spec = SpectralField::from_fn(*grid, |xi| {
        let along: f64 = xi.iter().zip(&dir).map(|(a, b)| a * b).sum();
        let r = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
        let (radial_offset, angle) = if dim == 2 {
            let cos = if r > 0.0 { (along / r).clamp(-1.0, 1.0) } else { 1.0 };
            (r - radius, cos.acos())
        } else {
            (along - radius, 0.0)
        };
        let radial = (-radial_offset.powi(2) / (2.0 * sigma_r * sigma_r)).exp();
        let angular = (-angle * angle / (2.0 * sigma_a * sigma_a)).exp();
        let phase: f64 = -xi.iter().zip(&shift).map(|(a, b)| a * b).sum::<f64>();
        Complex64::from_polar(radial * angular, phase)
    })?;
    normalized(inverse_fourier_transform(&spec))
}

/// Fraction of spectral L² mass of `f` where `keep` is false.
pub fn spectral_mass_outside(f: &Field, keep: impl Fn(&[f64]) -> bool) -> f64 {
    let s = fourier_transform(f);
    let dim = f.grid().dim();
    let mut total = 0.0;
    let mut outside = 0.0;
    for (i, c) in s.coefficients().iter().enumerate() {
        let m = c.norm_sqr();
        total += m;
        if !keep(&f.grid().frequency(i)[..dim]) {
            outside += m;
        }
    }
    if total == 0.0 {
        0.0
    } else {
        outside / total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::BOUNDARY_MASS_TOL;

    #[test]
    fn gaussian_packet_is_normalized_and_deterministic() {
        let g = GridSpec::new(1, 16.0, 256).unwrap();
        let a = random_test_function(&g, ProbeFamily::GaussianPacket, 7).unwrap();
        let b = random_test_function(&g, ProbeFamily::GaussianPacket, 7).unwrap();
        assert_eq!(a, b);
        assert!((a.l2_norm() - 1.0).abs() < 1e-12);
        assert!(a.boundary_mass_fraction() < BOUNDARY_MASS_TOL);
    }

    #[test]
    fn noise_depends_on_seed() {
        let g = GridSpec::new(2, 8.0, 64).unwrap();
        let a = random_test_function(&g, ProbeFamily::BandLimitedNoise, 1).unwrap();
        let b = random_test_function(&g, ProbeFamily::BandLimitedNoise, 2).unwrap();
        assert!(a.sub(&b).unwrap().l2_norm() > 0.1);
        assert!((a.l2_norm() - 1.0).abs() < 1e-12);
        assert!(a.boundary_mass_fraction() < BOUNDARY_MASS_TOL);
    }

    #[test]
    fn wave_packet_stays_in_its_cone_shell() {
        let g = GridSpec::new(2, 16.0, 512).unwrap();
        let lp = LittlewoodPaley::build(&g).unwrap();
        let cover = ConeCover::build(4, 2).unwrap();
        let f = random_test_function(&g, ProbeFamily::WavePacket { level: 4, direction: 0 }, 0).unwrap();
        assert!((f.l2_norm() - 1.0).abs() < 1e-12);
        let outside = spectral_mass_outside(&f, |xi| {
            let r = xi[0].hypot(xi[1]);
            lp.shell(4, r) > 0.0 && cover.weight(0, xi) > 0.0
        });
        assert!(outside <= 1e-10, "outside mass {outside}");
        assert!(f.boundary_mass_fraction() < BOUNDARY_MASS_TOL);
    }

    #[test]
    fn packets_above_nyquist_are_rejected() {
        let g = GridSpec::new(1, 16.0, 64).unwrap();
        assert!(gaussian_packet(&g, &[0.0], 1.0, &[g.nyquist()]).is_err());
        assert!(random_test_function(&g, ProbeFamily::WavePacket { level: 9, direction: 0 }, 0).is_err());
    }
}
