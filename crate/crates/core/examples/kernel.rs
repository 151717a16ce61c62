//! Low-frequency kernels of the reduced wave phase and their tail decay.

use fio_lab::decomp::phase_reduce;
use fio_lab::field::GridSpec;
use fio_lab::lab::{fit_decay_exponent, Abscissa};
use fio_lab::operators::low_freq_kernel;
use fio_lab::symbols::{catalog, smooth_step, CatalogEntry};

fn main() -> fio_lab::Result<()> {
    let grid = GridSpec::new(1, 64.0, 1024)?;
    let phi = catalog(&CatalogEntry::Wave, 1)?.into_phase()?;
    let reduced = phase_reduce(&phi, 4)?;
    let radii: Vec<f64> = (0..12).map(|i| 32f64.powf(i as f64 / 11.0)).collect();
    for l in 0..reduced.len() {
        let kernel = low_freq_kernel(|xi| smooth_step(xi[0].abs()), &reduced.psi_phase(l), &[0.5], &grid)?;
        let peak = kernel.peak();
        let pts: Vec<(f64, f64)> = kernel
            .tail_envelope(&radii, 32.0)
            .into_iter()
            .filter(|(_, e)| *e > 1e-12 * peak)
            .map(|(r, e)| (1.0 + r, e))
            .collect();
        let fit = fit_decay_exponent(&pts, Abscissa::Log)?;
        println!(
            "patch {l}: L¹ mass {:.4}, tail slope {:.3} (r² {:.3})",
            kernel.l1_mass(),
            fit.slope,
            fit.r_squared
        );
    }
    Ok(())
}
