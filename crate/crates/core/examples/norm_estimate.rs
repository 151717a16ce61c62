//! Lower bounds on L^q → L^r operator norms from seeded probes.

use fio_lab::field::{GridSpec, ProbeFamily};
use fio_lab::lab::estimate_operator_norm;
use fio_lab::operators::LinearFio;
use fio_lab::symbols::{catalog, CatalogEntry};

fn main() -> fio_lab::Result<()> {
    let grid = GridSpec::new(1, 16.0, 512)?;
    let phase = catalog(&CatalogEntry::Wave, 1)?.into_phase()?;
    for m in [0.0, -0.5, -1.0] {
        let a = catalog(
            &CatalogEntry::Hormander {
                m,
                rho: 1.0,
                localized: false,
            },
            1,
        )?
        .into_amplitude()?;
        let op = LinearFio::new(a, phase.clone(), grid, true)?;
        for (q, r) in [(2.0, 2.0), (f64::INFINITY, f64::INFINITY)] {
            let est = estimate_operator_norm(|u| op.apply(u), &grid, q, r, 16, 42, ProbeFamily::BandLimitedNoise)?;
            println!(
                "m = {m:>4}: L^{q} → L^{r} ≥ {:.4} (trial {}, seed {})",
                est.lower_bound, est.witness.trial, est.witness.seed
            );
        }
    }
    Ok(())
}
