use num_complex::Complex64;

use crate::error::{FioError, Result};
use crate::field::{fourier_transform, inverse_fourier_transform, Field, GridSpec, SpectralField};
use crate::symbols::smooth_step;

/// Dyadic shell `Ψ_j(r)` without a top cutoff: `ρ₀(r)` for `j = 0`,
/// `ρ₀(2^{−j} r) − ρ₀(2^{1−j} r)` otherwise.
pub fn radial_shell(j: u32, r: f64) -> f64 {
    if j == 0 {
        return smooth_step(r);
    }
    let s = 2f64.powi(-(j as i32));
    smooth_step(s * r) - smooth_step(2.0 * s * r)
}

/// Smooth radial partition of unity on the dual grid.
///
/// Shells `0..J_max` follow [`radial_shell`]; the top shell is the high-pass
/// remainder `1 − ρ₀(2^{1−J_max} r)`, so the shells sum to one everywhere.
#[derive(Debug, Clone, PartialEq)]
pub struct LittlewoodPaley {
    grid: GridSpec,
    j_max: u32,
}

/// Fewest shells a grid must host.
pub const MIN_SHELLS: u32 = 3;

impl LittlewoodPaley {
    pub fn build(grid: &GridSpec) -> Result<Self> {
        let top = (0.45 * grid.nyquist()).log2().floor();
        if top < MIN_SHELLS as f64 {
            return Err(FioError::Decomposition(format!(
                "Nyquist {:.3} hosts fewer than {MIN_SHELLS} dyadic shells",
                grid.nyquist()
            )));
        }
        Ok(LittlewoodPaley {
            grid: *grid,
            j_max: top as u32,
        })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn j_max(&self) -> u32 {
        self.j_max
    }

    /// `Ψ_j` at radius `r`; zero for `j > J_max`.
    pub fn shell(&self, j: u32, r: f64) -> f64 {
        if j > self.j_max {
            0.0
        } else if j == self.j_max {
            1.0 - smooth_step(2f64.powi(1 - j as i32) * r)
        } else {
            radial_shell(j, r)
        }
    }

    pub fn shell_at(&self, j: u32, xi: &[f64]) -> f64 {
        self.shell(j, crate::symbols::norm(xi))
    }

    /// `Ψ_j` sampled on the dual grid in FFT order.
    pub fn shell_values(&self, j: u32) -> Vec<f64> {
        let dim = self.grid.dim();
        self.grid.frequencies().map(|k| self.shell_at(j, &k[..dim])).collect()
    }

    /// `max |Σ_j Ψ_j − 1|` over dual grid points below `0.9·Nyquist`.
    pub fn partition_defect(&self) -> f64 {
        let dim = self.grid.dim();
        let limit = 0.9 * self.grid.nyquist();
        let mut worst = 0.0f64;
        for k in self.grid.frequencies() {
            let r = crate::symbols::norm(&k[..dim]);
            if r > limit {
                continue;
            }
            let s: f64 = (0..=self.j_max).map(|j| self.shell(j, r)).sum();
            worst = worst.max((s - 1.0).abs());
        }
        worst
    }

    /// `Ψ_j(D) u` for `j = 0..=J_max`.
    pub fn split(&self, u: &Field) -> Result<Vec<Field>> {
        if *u.grid() != self.grid {
            return Err(FioError::GridMismatch);
        }
        let spec = fourier_transform(u);
        (0..=self.j_max)
            .map(|j| {
                let w = self.shell_values(j);
                let c: Vec<Complex64> = spec.coefficients().iter().zip(&w).map(|(c, w)| c * w).collect();
                Ok(inverse_fourier_transform(&SpectralField::new(self.grid, c)?))
            })
            .collect()
    }
}

pub fn littlewood_paley_build(grid: &GridSpec) -> Result<LittlewoodPaley> {
    LittlewoodPaley::build(grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{random_test_function, ProbeFamily};

    #[test]
    fn shells_partition_unity() {
        let g = GridSpec::new(1, 16.0, 1024).unwrap();
        let lp = LittlewoodPaley::build(&g).unwrap();
        assert!(lp.j_max() >= 5);
        assert!(lp.partition_defect() <= 1e-12);
        let g2 = GridSpec::new(2, 8.0, 128).unwrap();
        assert!(LittlewoodPaley::build(&g2).unwrap().partition_defect() <= 1e-12);
    }

    #[test]
    fn shell_supports() {
        let g = GridSpec::new(1, 16.0, 1024).unwrap();
        let lp = LittlewoodPaley::build(&g).unwrap();
        assert_eq!(lp.shell(3, 1.0), 0.0);
        assert_eq!(lp.shell(0, 2.0), 0.0);
        // Direct evaluation: at r = 3 only shells 1 and 2 are active.
        let s: f64 = (0..=2).map(|j| lp.shell(j, 3.0)).sum();
        assert!((s - 1.0).abs() < 1e-12);
        assert_eq!(lp.shell(0, 3.0), 0.0);
        assert_eq!(lp.shell(3, 3.0), 0.0);
        for j in 1..lp.j_max() {
            let lo = 2f64.powi(j as i32 - 1);
            let hi = 2f64.powi(j as i32 + 1);
            assert_eq!(lp.shell(j, lo * 0.999), 0.0);
            assert_eq!(lp.shell(j, hi * 1.001), 0.0);
            assert!(lp.shell(j, 2f64.powi(j as i32)) > 0.99);
        }
    }

    #[test]
    fn coarse_grid_is_rejected() {
        let g = GridSpec::new(1, 16.0, 64).unwrap();
        assert!(LittlewoodPaley::build(&g).is_err());
    }

    #[test]
    fn pieces_reassemble() {
        let g = GridSpec::new(1, 16.0, 512).unwrap();
        let lp = LittlewoodPaley::build(&g).unwrap();
        let u = random_test_function(&g, ProbeFamily::BandLimitedNoise, 4).unwrap();
        let mut sum = Field::zeros(g);
        for piece in lp.split(&u).unwrap() {
            sum = sum
                .combine(Complex64::new(1.0, 0.0), &piece, Complex64::new(1.0, 0.0))
                .unwrap();
        }
        assert!(sum.sub(&u).unwrap().l2_norm() <= 1e-10);
    }
}
