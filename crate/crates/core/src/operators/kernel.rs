use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{FioError, Result};
use crate::field::{inverse_fourier_transform, Field, GridSpec, SpectralField};
use crate::symbols::{norm, Phase};

/// Fewest wavelengths of the top cutoff frequency the z-grid should span.
const MIN_WAVELENGTHS: f64 = 10.0;

/// `K(x, z) = (2π)^{−n} Σ_ξ η(ξ) e^{i⟨ξ,z⟩} e^{iψ(x,ξ)} Δξ^n` at one `x`.
#[derive(Debug, Clone)]
pub struct KernelSamples {
    pub x: Vec<f64>,
    pub values: Field,
    pub warnings: Vec<String>,
}

impl KernelSamples {
    /// `Σ_z |K(x, z)| Δz^n`.
    pub fn l1_mass(&self) -> f64 {
        let m = self.values.grid().cell_measure();
        self.values.values().iter().map(|v| v.norm() * m).sum()
    }

    pub fn peak(&self) -> f64 {
        self.values.values().iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Tail envelope `E(r) = max_{r ≤ |z| ≤ r_max} |K(x, z)|` at each radius.
    pub fn tail_envelope(&self, radii: &[f64], r_max: f64) -> Vec<(f64, f64)> {
        let grid = self.values.grid();
        let dim = grid.dim();
        let mut samples: Vec<(f64, f64)> = grid
            .points()
            .zip(self.values.values())
            .map(|(z, v)| (norm(&z[..dim]), v.norm()))
            .filter(|(r, _)| *r <= r_max)
            .collect();
        // Suffix maxima over radius.
        samples.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut suffix = vec![0.0f64; samples.len() + 1];
        for i in (0..samples.len()).rev() {
            suffix[i] = suffix[i + 1].max(samples[i].1);
        }
        radii
            .iter()
            .map(|&r| {
                let start = samples.partition_point(|s| s.0 < r);
                (r, suffix[start])
            })
            .collect()
    }
}

/// The low-frequency kernel of `η(D) e^{iψ(x, D)}` at `x`, sampled on `grid`.
///
/// `ψ` is taken as `0` at `ξ = 0` when it is not smooth there, its limit for
/// degree-1 homogeneous phases.
pub fn low_freq_kernel(eta: impl Fn(&[f64]) -> f64, psi: &Phase, x: &[f64], grid: &GridSpec) -> Result<KernelSamples> {
    let dim = grid.dim();
    if psi.dim() != dim || x.len() < dim {
        return Err(FioError::GridMismatch);
    }
    let edge = 0.9 * grid.nyquist();
    let mut reach = 0.0f64;
    let mut coeffs = Vec::with_capacity(grid.len());
    for k in grid.frequencies() {
        let xi = &k[..dim];
        let e = eta(xi);
        if e == 0.0 {
            coeffs.push(Complex64::new(0.0, 0.0));
            continue;
        }
        let r = norm(xi);
        if xi.iter().any(|v| v.abs() > edge) {
            return Err(FioError::Decomposition(format!(
                "cutoff is not compactly supported on the dual grid (η ≠ 0 at |ξ| = {r:.3})"
            )));
        }
        reach = reach.max(r);
        let phase = if r == 0.0 && !psi.is_smooth_at_origin() {
            0.0
        } else {
            psi.eval(&x[..dim], xi)
        };
        coeffs.push(Complex64::from_polar(e, phase));
    }
    let values = inverse_fourier_transform(&SpectralField::new(*grid, coeffs)?);
    if let Some(index) = values
        .values()
        .iter()
        .position(|v| !(v.re.is_finite() && v.im.is_finite()))
    {
        return Err(FioError::NonFinite { index });
    }
    let mut warnings = Vec::new();
    if reach > 0.0 {
        let wavelengths = grid.half_extent() * reach / (2.0 * PI);
        if wavelengths < MIN_WAVELENGTHS {
            warnings.push(format!(
                "z-grid spans {wavelengths:.1} wavelengths, fewer than {MIN_WAVELENGTHS} to observe decay"
            ));
        }
    }
    Ok(KernelSamples {
        x: x[..dim].to_vec(),
        values,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::phase_reduce;
    use crate::symbols::{catalog, smooth_step, CatalogEntry};

    #[test]
    fn zero_phase_gives_inverse_transform_of_cutoff() {
        let g = GridSpec::new(1, 32.0, 256).unwrap();
        let zero = Phase::new("zero", 1, |_, _| 0.0);
        let k = low_freq_kernel(|xi| smooth_step(xi[0].abs()), &zero, &[0.3], &g).unwrap();
        // Oracle: direct quadrature of the inverse transform at a few z.
        for idx in [0, 37, 128, 200] {
            let z = g.point(idx)[0];
            let direct: Complex64 = g
                .frequencies()
                .map(|xi| Complex64::from_polar(smooth_step(xi[0].abs()), xi[0] * z))
                .sum::<Complex64>()
                * (g.freq_step() / (2.0 * PI));
            assert!((k.values.values()[idx] - direct).norm() < 1e-12);
        }
        assert!(k.warnings.is_empty());
    }

    #[test]
    fn envelope_is_non_increasing() {
        let g = GridSpec::new(2, 32.0, 128).unwrap();
        let wave = catalog(&CatalogEntry::Wave, 2).unwrap().into_phase().unwrap();
        let red = phase_reduce(&wave, 8).unwrap();
        let k = low_freq_kernel(|xi| smooth_step(norm(xi)), &red.psi_phase(0), &[0.0, 0.0], &g).unwrap();
        let env = k.tail_envelope(&[1.0, 2.0, 4.0, 8.0, 16.0], 16.0);
        for w in env.windows(2) {
            assert!(w[1].1 <= w[0].1);
        }
        assert!(k.l1_mass() > 0.0);
    }

    #[test]
    fn short_grid_warns_and_wide_cutoff_fails() {
        let g = GridSpec::new(1, 4.0, 64).unwrap();
        let zero = Phase::new("zero", 1, |_, _| 0.0);
        let k = low_freq_kernel(|xi| smooth_step(xi[0].abs()), &zero, &[0.0], &g).unwrap();
        assert_eq!(k.warnings.len(), 1);
        assert!(low_freq_kernel(|_| 1.0, &zero, &[0.0], &g).is_err());
    }
}
