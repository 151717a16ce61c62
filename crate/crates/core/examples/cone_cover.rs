//! Second dyadic cone covers: counts, spacing and the partition of unity.

use fio_lab::decomp::{cone_partition, ConeCover};
use fio_lab::field::GridSpec;

fn main() -> fio_lab::Result<()> {
    let grid = GridSpec::new(2, 8.0, 256)?;
    for j in (2..=10).step_by(2) {
        let cover = ConeCover::build(j, 2)?;
        println!(
            "j = {j:>2}: {:>3} directions, spacing {:.4}, covering radius {:.4}, aperture {:.4}",
            cover.len(),
            cover.min_spacing(),
            cover.covering_radius(),
            cover.support_aperture()
        );
    }
    let cover = cone_partition(6, &grid)?;
    println!("partition defect at j = 6: {:.2e}", cover.partition_defect(&grid));
    let xi = [3.0, 4.0];
    let active: Vec<(usize, f64)> = (0..cover.len())
        .map(|nu| (nu, cover.weight(nu, &xi)))
        .filter(|(_, w)| *w > 0.0)
        .collect();
    println!("bumps active at ξ = (3, 4): {active:?}");
    Ok(())
}
