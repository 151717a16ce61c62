//! Probe-based seminorms of catalog amplitudes and of a product.

use fio_lab::field::GridSpec;
use fio_lab::symbols::{catalog, frequency_probes, seminorm_estimate, CatalogEntry};

fn main() -> fio_lab::Result<()> {
    let grid = GridSpec::new(1, 8.0, 64)?;
    let probes = frequency_probes(1, 64.0, true);
    let a = catalog(
        &CatalogEntry::Hormander {
            m: 0.0,
            rho: 0.5,
            localized: true,
        },
        1,
    )?
    .into_amplitude()?;
    let b = catalog(
        &CatalogEntry::Hormander {
            m: -1.0,
            rho: 1.0,
            localized: false,
        },
        1,
    )?
    .into_amplitude()?;
    let rough = catalog(&CatalogEntry::RoughLog { p: 2.0 }, 1)?.into_amplitude()?;
    let ab = a.product_with(&b)?;
    for amp in [&a, &b, &rough, &ab] {
        let values: Vec<String> = (0..=3)
            .map(|s| seminorm_estimate(amp, s, &grid, &probes).map(|e| format!("{:.3}", e.value)))
            .collect::<fio_lab::Result<_>>()?;
        println!("{:<40} s = 0..3: {}", amp.name(), values.join(", "));
    }
    Ok(())
}
