//! Littlewood-Paley shells and the per-level size of an operator's pieces.

use fio_lab::decomp::LittlewoodPaley;
use fio_lab::field::{random_test_function, GridSpec, ProbeFamily};
use fio_lab::operators::LinearFio;
use fio_lab::symbols::{catalog, CatalogEntry};

fn main() -> fio_lab::Result<()> {
    let grid = GridSpec::new(1, 16.0, 1024)?;
    let lp = LittlewoodPaley::build(&grid)?;
    println!("J_max = {}, partition defect {:.2e}", lp.j_max(), lp.partition_defect());

    let amplitude = catalog(
        &CatalogEntry::Hormander {
            m: -0.5,
            rho: 1.0,
            localized: false,
        },
        1,
    )?
    .into_amplitude()?;
    let phase = catalog(&CatalogEntry::VariableWave { epsilon: 0.2 }, 1)?.into_phase()?;
    let op = LinearFio::new(amplitude, phase, grid, true)?;
    let u = random_test_function(&grid, ProbeFamily::BandLimitedNoise, 5)?;
    for (j, part) in lp.split(&u)?.iter().enumerate() {
        let piece = op.apply_dyadic_piece(&lp, j as u32, &u)?;
        println!(
            "level {j}: ‖u_j‖ = {:.3e}, ‖T u_j‖ = {:.3e}",
            part.l2_norm(),
            piece.l2_norm()
        );
    }
    Ok(())
}
