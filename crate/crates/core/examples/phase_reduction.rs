//! Splits the wave phase into angular patches and checks the reduction.

use fio_lab::decomp::phase_reduce;
use fio_lab::symbols::{catalog, verify_phase_class, verify_snd, CatalogEntry, PhaseProbes};

fn main() -> fio_lab::Result<()> {
    let phi = catalog(&CatalogEntry::Wave, 2)?.into_phase()?;
    let probes = PhaseProbes::standard(2);
    let class = verify_phase_class(&phi, 2, 3, &probes)?;
    let snd = verify_snd(&phi, &probes, 1e-3);
    println!(
        "phase class ok = {}, worst constant {:.3}",
        class.ok, class.worst_constant
    );
    println!("non-degenerate = {}, min |det| {:.3}", snd.ok, snd.min_det);
    for patches in [4, 8, 16, 32] {
        let report = phase_reduce(&phi, patches)?.check(&probes);
        println!(
            "{patches:>2} patches: identity error {:.1e}, max |∇ψ| {:.4}, ratio to diameter {:.3}",
            report.identity_error, report.max_first_derivative, report.constant
        );
    }
    Ok(())
}
