//! Applies a wave-type operator to a Gaussian packet and compares with a translate.

use fio_lab::field::{gaussian_packet, lp_norm, GridSpec};
use fio_lab::operators::LinearFio;
use fio_lab::symbols::{catalog, CatalogEntry};

fn main() -> fio_lab::Result<()> {
    let grid = GridSpec::new(1, 20.0, 512)?;
    let u = gaussian_packet(&grid, &[0.0], 2.0, &[6.0])?;
    let amplitude = catalog(
        &CatalogEntry::Hormander {
            m: 0.0,
            rho: 1.0,
            localized: false,
        },
        1,
    )?
    .into_amplitude()?;
    let phase = catalog(&CatalogEntry::Wave, 1)?.into_phase()?;
    let op = LinearFio::new(amplitude, phase, grid, true)?;
    let out = op.apply(&u)?;

    let peak_at = |f: &fio_lab::field::Field| {
        let (i, _) = f
            .values()
            .iter()
            .enumerate()
            .fold((0, 0.0), |b, (i, v)| if v.norm() > b.1 { (i, v.norm()) } else { b });
        grid.coord(i)
    };
    println!(
        "input peak at x = {:.3}, output peak at x = {:.3}",
        peak_at(&u),
        peak_at(&out)
    );
    for r in [1.0, 2.0, 4.0, f64::INFINITY] {
        println!("L^{r}: input {:.4}, output {:.4}", lp_norm(&u, r)?, lp_norm(&out, r)?);
    }
    Ok(())
}
