//! A bilinear operator evaluated directly and by freezing its first input.

use fio_lab::field::{random_test_function, GridSpec, ProbeFamily};
use fio_lab::operators::MultilinearFio;
use fio_lab::symbols::{catalog, frequency_probes, CatalogEntry};

fn main() -> fio_lab::Result<()> {
    let grid = GridSpec::new(1, 12.0, 128)?;
    let a = catalog(&CatalogEntry::JointBessel { m: -1.0 }, 1)?.into_amplitude()?;
    let phases = vec![
        catalog(&CatalogEntry::VariableWave { epsilon: 0.3 }, 1)?.into_phase()?,
        catalog(&CatalogEntry::LinearPhase, 1)?.into_phase()?,
    ];
    let op = MultilinearFio::new(a, phases, grid, true)?;
    println!("direct work {:.2e} multiply-adds", op.direct_work());

    let f = random_test_function(&grid, ProbeFamily::GaussianPacket, 1)?;
    let g = random_test_function(&grid, ProbeFamily::GaussianPacket, 2)?;
    let direct = op.apply_bilinear(&f, &g, None)?;
    let reduced = op.reduce_bilinear(&f, 2.0, None)?;
    let iterated = reduced.apply(&g)?;
    let dev = iterated.sub(&direct)?.l2_norm() / direct.l2_norm();
    println!("relative deviation between the two evaluations: {dev:.2e}");

    let probes = frequency_probes(1, 8.0, true);
    for s in 0..=2 {
        let est = reduced.seminorm(s, &probes)?;
        println!(
            "reduced amplitude seminorm s = {s}: {:.4} (r₂ = {})",
            est.value,
            reduced.r2()
        );
    }
    Ok(())
}
