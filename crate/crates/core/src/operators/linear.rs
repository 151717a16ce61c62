use num_complex::Complex64;
use rayon::prelude::*;

use super::{active_set, cell_weight, check_input, finite_field};
use crate::decomp::{LittlewoodPaley, SND_FLOOR};
use crate::error::{FioError, Result};
use crate::field::{fourier_transform, Field, GridSpec};
use crate::symbols::{norm, verify_snd, Amplitude, Phase, PhaseProbes};

/// `T_a u(x) = (2π)^{−n} Σ_ξ e^{iφ(x,ξ)} a(x,ξ) û(ξ) Δξ^n` on one grid.
#[derive(Debug, Clone)]
pub struct LinearFio {
    amplitude: Amplitude,
    phase: Phase,
    grid: GridSpec,
    low_freq_cut: bool,
}

impl LinearFio {
    pub fn new(amplitude: Amplitude, phase: Phase, grid: GridSpec, low_freq_cut: bool) -> Result<Self> {
        if amplitude.arity() != 1 {
            return Err(FioError::InvalidAmplitude(format!(
                "{} has arity {}, a linear operator needs 1",
                amplitude.name(),
                amplitude.arity()
            )));
        }
        if amplitude.dim() != grid.dim() || phase.dim() != grid.dim() {
            return Err(FioError::GridMismatch);
        }
        let snd = verify_snd(&phase, &PhaseProbes::standard(grid.dim()), SND_FLOOR);
        if !snd.ok {
            return Err(FioError::InvalidPhase(format!(
                "{} fails strong non-degeneracy (min |det| = {:e})",
                phase.name(),
                snd.min_det
            )));
        }
        Ok(LinearFio {
            amplitude,
            phase,
            grid,
            low_freq_cut,
        })
    }

    pub fn amplitude(&self) -> &Amplitude {
        &self.amplitude
    }

    pub fn phase(&self) -> &Phase {
        &self.phase
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn low_freq_cut(&self) -> bool {
        self.low_freq_cut
    }

    pub fn apply(&self, u: &Field) -> Result<Field> {
        check_input(&self.grid, u)?;
        self.apply_coefficients(fourier_transform(u).coefficients(), |_| 1.0)
    }

    /// `T_{aΨ_j} u`; level 0 is the low-frequency part.
    pub fn apply_dyadic_piece(&self, lp: &LittlewoodPaley, j: u32, u: &Field) -> Result<Field> {
        if lp.grid() != &self.grid {
            return Err(FioError::GridMismatch);
        }
        if j > lp.j_max() {
            return Err(FioError::Decomposition(format!(
                "level {j} exceeds J_max = {}",
                lp.j_max()
            )));
        }
        check_input(&self.grid, u)?;
        let dim = self.grid.dim();
        self.apply_coefficients(fourier_transform(u).coefficients(), |xi| lp.shell(j, norm(&xi[..dim])))
    }

    /// The operator on raw dual-grid coefficients weighted by `w(ξ)`.
    pub fn apply_coefficients(&self, coeffs: &[Complex64], w: impl Fn(&[f64]) -> f64 + Sync) -> Result<Field> {
        let dim = self.grid.dim();
        let mut weighted = Vec::with_capacity(coeffs.len());
        for (i, c) in coeffs.iter().enumerate() {
            let xi = self.grid.frequency(i);
            let v = w(&xi[..dim]);
            if v == 0.0 || *c == Complex64::new(0.0, 0.0) {
                weighted.push(Complex64::new(0.0, 0.0));
                continue;
            }
            if self.amplitude.singular_at_origin() && norm(&xi[..dim]) == 0.0 {
                if !self.low_freq_cut {
                    return Err(FioError::InvalidAmplitude(format!(
                        "{} is singular at ξ = 0; enable the low-frequency cut",
                        self.amplitude.name()
                    )));
                }
                weighted.push(Complex64::new(0.0, 0.0));
                continue;
            }
            weighted.push(c * v);
        }
        let set = active_set(&self.grid, &self.phase, &weighted, self.low_freq_cut)?;
        let scale = cell_weight(&self.grid);
        let values: Vec<Complex64> = (0..self.grid.len())
            .into_par_iter()
            .map(|i| {
                let x = self.grid.point(i);
                let x = &x[..dim];
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..set.index.len() {
                    let a = self.amplitude.eval1(x, &set.xi[k][..dim]);
                    if a == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    let e = Complex64::from_polar(1.0, self.phase.eval(x, &set.phase_xi[k][..dim]));
                    acc += e * a * set.coeff[k];
                }
                acc * scale
            })
            .collect();
        finite_field(self.grid, values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{gaussian_packet, random_test_function, ProbeFamily};
    use crate::symbols::{catalog, japanese, CatalogEntry, SymbolClass};

    fn one(dim: usize) -> Amplitude {
        Amplitude::linear("1", dim, SymbolClass::linear(f64::INFINITY, 0.0, 1.0), |_, _| {
            Complex64::new(1.0, 0.0)
        })
        .unwrap()
    }

    fn linear_phase(dim: usize) -> Phase {
        catalog(&CatalogEntry::LinearPhase, dim).unwrap().into_phase().unwrap()
    }

    fn shifted_wave() -> Phase {
        Phase::new("wave+x", 1, |x, xi| xi[0].abs() + x[0] * xi[0])
            .homogeneous(true)
            .declared_k(1)
    }

    fn relative(a: &Field, b: &Field) -> f64 {
        a.sub(b).unwrap().l2_norm() / b.l2_norm()
    }

    #[test]
    fn identity_on_band_limited_input() {
        for (dim, n) in [(1, 256), (2, 64)] {
            let g = GridSpec::new(dim, 10.0, n).unwrap();
            let u = gaussian_packet(&g, &[0.5, -0.3], 1.2, &[1.0, -0.5]).unwrap();
            let op = LinearFio::new(one(dim), linear_phase(dim), g, false).unwrap();
            assert!(relative(&op.apply(&u).unwrap(), &u) < 1e-9);
        }
    }

    #[test]
    fn wave_phase_translates_positive_band() {
        let g = GridSpec::new(1, 20.0, 512).unwrap();
        let (sigma, carrier) = (2.0, 6.0);
        let u = gaussian_packet(&g, &[0.0], sigma, &[carrier]).unwrap();
        let op = LinearFio::new(one(1), shifted_wave(), g, true).unwrap();
        let tu = op.apply(&u).unwrap();
        // Oracle: the same packet evaluated at x + 1.
        let c = u.values()[g.index_of_point(&[0.0]).unwrap()].norm();
        let shifted = Field::from_fn(g, |x| {
            let y = x[0] + 1.0;
            Complex64::from_polar(c * (-y * y / (2.0 * sigma * sigma)).exp(), carrier * y)
        })
        .unwrap();
        assert!(relative(&tu, &shifted) < 1e-6, "{}", relative(&tu, &shifted));
    }

    #[test]
    fn singular_phase_needs_the_cut() {
        let g = GridSpec::new(1, 20.0, 128).unwrap();
        let u = gaussian_packet(&g, &[0.0], 2.0, &[0.0]).unwrap();
        let op = LinearFio::new(one(1), shifted_wave(), g, false).unwrap();
        assert!(op.apply(&u).is_err());
    }

    #[test]
    fn degenerate_phase_is_refused() {
        let g = GridSpec::new(1, 20.0, 128).unwrap();
        let flat = Phase::new("flat", 1, |_, xi| xi[0]);
        assert!(LinearFio::new(one(1), flat, g, false).is_err());
    }

    #[test]
    fn multiplier_bound_on_a_shell() {
        let g = GridSpec::new(1, 16.0, 512).unwrap();
        let lp = LittlewoodPaley::build(&g).unwrap();
        let m = -0.5;
        let a = catalog(
            &CatalogEntry::Hormander {
                m,
                rho: 1.0,
                localized: false,
            },
            1,
        )
        .unwrap()
        .into_amplitude()
        .unwrap();
        let op = LinearFio::new(a, linear_phase(1), g, false).unwrap();
        let u = random_test_function(&g, ProbeFamily::BandLimitedNoise, 3).unwrap();
        let j = 3;
        let piece = op.apply_dyadic_piece(&lp, j, &u).unwrap();
        // Discrete Plancherel oracle: the largest multiplier value on the shell.
        let bound = g
            .frequencies()
            .map(|k| japanese(&k[..1]).powf(m) * lp.shell(j, k[0].abs()))
            .fold(0.0f64, f64::max);
        let shell_part = lp.split(&u).unwrap().swap_remove(j as usize);
        assert!(piece.l2_norm() <= bound * shell_part.l2_norm() * (1.0 + 1e-8));
    }

    #[test]
    fn dyadic_pieces_reassemble() {
        let g = GridSpec::new(1, 16.0, 256).unwrap();
        let lp = LittlewoodPaley::build(&g).unwrap();
        let a = catalog(
            &CatalogEntry::Hormander {
                m: -1.0,
                rho: 1.0,
                localized: true,
            },
            1,
        )
        .unwrap()
        .into_amplitude()
        .unwrap();
        let phi = catalog(&CatalogEntry::VariableWave { epsilon: 0.2 }, 1)
            .unwrap()
            .into_phase()
            .unwrap();
        let op = LinearFio::new(a, phi, g, true).unwrap();
        let u = random_test_function(&g, ProbeFamily::GaussianPacket, 11).unwrap();
        let whole = op.apply(&u).unwrap();
        let mut sum = Field::zeros(g);
        for j in 0..=lp.j_max() {
            let p = op.apply_dyadic_piece(&lp, j, &u).unwrap();
            sum = sum
                .combine(Complex64::new(1.0, 0.0), &p, Complex64::new(1.0, 0.0))
                .unwrap();
        }
        assert!(relative(&sum, &whole) < 1e-9);
        assert!(op.apply_dyadic_piece(&lp, lp.j_max() + 1, &u).is_err());
    }

    #[test]
    fn disjoint_shells_give_zero() {
        let g = GridSpec::new(1, 8.0, 1024).unwrap();
        let lp = LittlewoodPaley::build(&g).unwrap();
        let op = LinearFio::new(one(1), linear_phase(1), g, false).unwrap();
        let u = random_test_function(&g, ProbeFamily::WavePacket { level: 4, direction: 0 }, 2).unwrap();
        let shell = lp.split(&u).unwrap().swap_remove(4);
        for j in [0, 1, 2, 6] {
            assert!(op.apply_dyadic_piece(&lp, j, &shell).unwrap().l2_norm() < 1e-12);
        }
    }
}
