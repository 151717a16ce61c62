//! Linear, bilinear and multilinear Fourier integral operators by direct
//! quadrature and by the iterated and separated reductions.
//!
//! All operators use `T_a u(x) = (2π)^{−n} Σ_ξ e^{iφ(x,ξ)} a(x,ξ) û(ξ) Δξ^n`
//! over the dual grid, summed in a fixed order so results are bit-stable.

mod bilinear;
mod kernel;
mod linear;
mod separated;

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{FioError, Result};
use crate::field::{Field, GridSpec, BOUNDARY_MASS_TOL};
use crate::symbols::{norm, Phase};

pub use bilinear::{MultilinearFio, ReducedBilinear, DEFAULT_BUDGET};
pub use kernel::{low_freq_kernel, KernelSamples};
pub use linear::LinearFio;
pub use separated::{KhinchinReport, SeparatedOptions, SeparatedResult};

/// `(2π)^{−n} Δξ^n`, the weight of one dual-grid cell.
pub(crate) fn cell_weight(grid: &GridSpec) -> f64 {
    grid.freq_cell_measure() / (2.0 * PI).powi(grid.dim() as i32)
}

/// Frequency at which `φ` is evaluated for dual index `idx`.
///
/// Phases singular at `ξ = 0` are frozen at the first frequency step along
/// `e₁` in the origin cell, which is only allowed with the low-frequency cut.
pub(crate) fn phase_frequency(grid: &GridSpec, phase: &Phase, idx: usize, low_freq_cut: bool) -> Result<[f64; 2]> {
    let xi = grid.frequency(idx);
    if phase.is_smooth_at_origin() || norm(&xi[..grid.dim()]) > 0.0 {
        return Ok(xi);
    }
    if !low_freq_cut {
        return Err(FioError::InvalidPhase(format!(
            "{} is singular at ξ = 0; enable the low-frequency cut",
            phase.name()
        )));
    }
    Ok([grid.freq_step(), 0.0])
}

/// Indices with non-zero coefficients, their frequencies and phase frequencies.
pub(crate) struct ActiveSet {
    pub index: Vec<usize>,
    pub xi: Vec<[f64; 2]>,
    pub phase_xi: Vec<[f64; 2]>,
    pub coeff: Vec<Complex64>,
}

pub(crate) fn active_set(
    grid: &GridSpec,
    phase: &Phase,
    coeffs: &[Complex64],
    low_freq_cut: bool,
) -> Result<ActiveSet> {
    let mut set = ActiveSet {
        index: Vec::new(),
        xi: Vec::new(),
        phase_xi: Vec::new(),
        coeff: Vec::new(),
    };
    for (i, c) in coeffs.iter().enumerate() {
        if *c == Complex64::new(0.0, 0.0) {
            continue;
        }
        set.index.push(i);
        set.xi.push(grid.frequency(i));
        set.phase_xi.push(phase_frequency(grid, phase, i, low_freq_cut)?);
        set.coeff.push(*c);
    }
    Ok(set)
}

pub(crate) fn check_input(grid: &GridSpec, u: &Field) -> Result<()> {
    if u.grid() != grid {
        return Err(FioError::GridMismatch);
    }
    u.check_boundary_decay(BOUNDARY_MASS_TOL)
}

pub(crate) fn finite_field(grid: GridSpec, values: Vec<Complex64>) -> Result<Field> {
    if let Some(index) = values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
        return Err(FioError::NonFinite { index });
    }
    Field::new(grid, values)
}
