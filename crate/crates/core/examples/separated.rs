//! Separated evaluation of a bilinear operator against the direct sum.

use fio_lab::field::{random_test_function, GridSpec, ProbeFamily};
use fio_lab::operators::{MultilinearFio, SeparatedOptions};
use fio_lab::symbols::{catalog, CatalogEntry};

fn main() -> fio_lab::Result<()> {
    let grid = GridSpec::new(1, 16.0, 128)?;
    let a = catalog(&CatalogEntry::JointBessel { m: -2.0 }, 1)?.into_amplitude()?;
    let linear = catalog(&CatalogEntry::LinearPhase, 1)?.into_phase()?;
    let op = MultilinearFio::new(a, vec![linear.clone(), linear], grid, false)?;
    let f = random_test_function(&grid, ProbeFamily::BandLimitedNoise, 3)?;
    let g = random_test_function(&grid, ProbeFamily::BandLimitedNoise, 4)?;
    let direct = op.apply_bilinear(&f, &g, None)?;

    for k in [2, 4, 8, 16] {
        let mut opts = SeparatedOptions::new(k);
        opts.khinchin_draws = if k == 16 { 32 } else { 0 };
        let sep = op.apply_multilinear_separated(&[f.clone(), g.clone()], &opts)?;
        let err = sep.result.sub(&direct)?.l2_norm() / direct.l2_norm();
        println!(
            "K = {k:>2}: {} levels, {} terms, relative error {err:.2e}, tail bound {:.2e}",
            sep.levels, sep.terms, sep.tail_bound
        );
        if let Some(kh) = sep.khinchin {
            println!(
                "  random-sign ratio mean {:.3} in [{:.3}, {:.3}]",
                kh.mean_ratio, kh.min_ratio, kh.max_ratio
            );
        }
    }
    Ok(())
}
