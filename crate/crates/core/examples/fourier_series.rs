//! Fourier series in ξ of a frequency-compact amplitude.

use fio_lab::decomp::fourier_series_expand;
use fio_lab::field::GridSpec;
use fio_lab::symbols::{catalog, CatalogEntry};

fn main() -> fio_lab::Result<()> {
    let grid = GridSpec::new(1, 8.0, 64)?;
    let a = catalog(&CatalogEntry::CompactPower { radius: 2.0, power: 3 }, 1)?.into_amplitude()?;
    let series = fourier_series_expand(&a, &grid, 6.0, 16, 2.0)?;
    println!("reconstruction error {:.2e}", series.reconstruction_error);
    for (ring, norm) in series.norms_by_ring() {
        println!("|k| = {ring:>2}: max ‖a_k‖₂ = {norm:.3e}");
    }
    for w in &series.warnings {
        println!("warning: {w}");
    }
    Ok(())
}
