//! Grids, sampled functions and the norm layer.
//!
//! `ℝ^n` (n ∈ {1, 2}) is modeled by the periodized cube `[-L, L)^n` sampled
//! with `N` points per axis. Values are stored row-major with axis 0 the
//! slowest index. Spectral coefficients are stored in FFT order, so index `k`
//! along an axis carries the frequency `k·π/L` for `k < N/2` and
//! `(k − N)·π/L` otherwise.

mod norms;
mod probes;
mod transform;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{FioError, Result};

pub use norms::{lorentz_norm, lorentz_norm_values, lp_norm, lp_norm_values};
pub use probes::{gaussian_packet, random_test_function, spectral_mass_outside, ProbeFamily};
pub use transform::{fft_in_place, fourier_transform, inverse_fourier_transform};

/// Relative L² mass allowed in the outer tenth of the box.
pub const BOUNDARY_MASS_TOL: f64 = 1e-10;

/// A validated uniform grid on `[-L, L)^n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GridParams", into = "GridParams")]
pub struct GridSpec {
    dim: usize,
    half_extent: f64,
    points_per_axis: usize,
}

/// Unvalidated grid parameters, the serialized form of [`GridSpec`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridParams {
    pub dim: usize,
    pub half_extent: f64,
    pub points_per_axis: usize,
}

impl TryFrom<GridParams> for GridSpec {
    type Error = FioError;
    fn try_from(p: GridParams) -> Result<Self> {
        GridSpec::new(p.dim, p.half_extent, p.points_per_axis)
    }
}

impl From<GridSpec> for GridParams {
    fn from(g: GridSpec) -> Self {
        GridParams {
            dim: g.dim,
            half_extent: g.half_extent,
            points_per_axis: g.points_per_axis,
        }
    }
}

impl GridSpec {
    pub fn new(dim: usize, half_extent: f64, points_per_axis: usize) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(FioError::InvalidGrid(format!("dimension {dim} not in {{1, 2}}")));
        }
        if !(half_extent.is_finite() && half_extent > 0.0) {
            return Err(FioError::InvalidGrid(format!(
                "half extent {half_extent} must be positive"
            )));
        }
        if points_per_axis < 8 {
            return Err(FioError::InvalidGrid(format!(
                "{points_per_axis} points per axis, need at least 8"
            )));
        }
        if !points_per_axis.is_power_of_two() {
            return Err(FioError::InvalidGrid(format!(
                "{points_per_axis} points per axis is not a power of two"
            )));
        }
        Ok(GridSpec {
            dim,
            half_extent,
            points_per_axis,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn half_extent(&self) -> f64 {
        self.half_extent
    }

    pub fn points_per_axis(&self) -> usize {
        self.points_per_axis
    }

    /// Total number of grid points, `N^n`.
    pub fn len(&self) -> usize {
        self.points_per_axis.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Spatial step `h = 2L/N`.
    pub fn step(&self) -> f64 {
        2.0 * self.half_extent / self.points_per_axis as f64
    }

    /// Frequency step `π/L`.
    pub fn freq_step(&self) -> f64 {
        std::f64::consts::PI / self.half_extent
    }

    /// Nyquist bound `πN/(2L)`.
    pub fn nyquist(&self) -> f64 {
        std::f64::consts::PI * self.points_per_axis as f64 / (2.0 * self.half_extent)
    }

    /// Measure `h^n` of one spatial cell.
    pub fn cell_measure(&self) -> f64 {
        self.step().powi(self.dim as i32)
    }

    /// Measure `(π/L)^n` of one frequency cell.
    pub fn freq_cell_measure(&self) -> f64 {
        self.freq_step().powi(self.dim as i32)
    }

    /// Coordinate of index `i` along one axis.
    pub fn coord(&self, i: usize) -> f64 {
        -self.half_extent + i as f64 * self.step()
    }

    /// Frequency of FFT-ordered index `k` along one axis.
    pub fn freq(&self, k: usize) -> f64 {
        let n = self.points_per_axis;
        let signed = if k < n / 2 { k as f64 } else { k as f64 - n as f64 };
        signed * self.freq_step()
    }

    /// Per-axis indices of a flat index.
    pub fn axis_indices(&self, idx: usize) -> [usize; 2] {
        let n = self.points_per_axis;
        match self.dim {
            1 => [idx, 0],
            _ => [idx / n, idx % n],
        }
    }

    /// Spatial point of a flat index; unused components are zero.
    pub fn point(&self, idx: usize) -> [f64; 2] {
        let [i, j] = self.axis_indices(idx);
        match self.dim {
            1 => [self.coord(i), 0.0],
            _ => [self.coord(i), self.coord(j)],
        }
    }

    /// Dual-grid frequency of a flat index; unused components are zero.
    pub fn frequency(&self, idx: usize) -> [f64; 2] {
        let [i, j] = self.axis_indices(idx);
        match self.dim {
            1 => [self.freq(i), 0.0],
            _ => [self.freq(i), self.freq(j)],
        }
    }

    pub fn points(&self) -> impl Iterator<Item = [f64; 2]> + '_ {
        (0..self.len()).map(move |i| self.point(i))
    }

    pub fn frequencies(&self) -> impl Iterator<Item = [f64; 2]> + '_ {
        (0..self.len()).map(move |i| self.frequency(i))
    }

    /// Flat index of a spatial point lying on the grid.
    pub fn index_of_point(&self, x: &[f64]) -> Option<usize> {
        let h = self.step();
        let mut idx = 0;
        for &c in x.iter().take(self.dim) {
            let t = (c + self.half_extent) / h;
            let r = t.round();
            if (t - r).abs() > 1e-9 || r < 0.0 || r >= self.points_per_axis as f64 {
                return None;
            }
            idx = idx * self.points_per_axis + r as usize;
        }
        Some(idx)
    }

    /// Flat index of a frequency lying on the dual grid.
    pub fn index_of_frequency(&self, xi: &[f64]) -> Option<usize> {
        let n = self.points_per_axis as i64;
        let mut idx = 0usize;
        for &c in xi.iter().take(self.dim) {
            let t = c / self.freq_step();
            let r = t.round();
            if (t - r).abs() > 1e-9 {
                return None;
            }
            let k = r as i64;
            if k < -n / 2 || k >= n / 2 {
                return None;
            }
            let k = if k < 0 { k + n } else { k } as usize;
            idx = idx * self.points_per_axis + k;
        }
        Some(idx)
    }
}

fn check_values(grid: &GridSpec, values: &[Complex64], what: &str) -> Result<()> {
    if values.len() != grid.len() {
        return Err(FioError::InvalidField(format!(
            "{what} has {} values, grid needs {}",
            values.len(),
            grid.len()
        )));
    }
    if let Some(i) = values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
        return Err(FioError::InvalidField(format!("{what} value {i} is not finite")));
    }
    Ok(())
}

/// A complex function sampled on a [`GridSpec`].
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: GridSpec,
    values: Vec<Complex64>,
}

impl Field {
    pub fn new(grid: GridSpec, values: Vec<Complex64>) -> Result<Self> {
        check_values(&grid, &values, "field")?;
        Ok(Field { grid, values })
    }

    pub fn zeros(grid: GridSpec) -> Self {
        Field {
            grid,
            values: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    /// Samples `f` at every grid point (unused coordinates are zero).
    pub fn from_fn(grid: GridSpec, f: impl Fn(&[f64]) -> Complex64) -> Result<Self> {
        let dim = grid.dim();
        let values = grid.points().map(|p| f(&p[..dim])).collect();
        Field::new(grid, values)
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn scaled(&self, c: Complex64) -> Field {
        Field {
            grid: self.grid,
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: Complex64, other: &Field, b: Complex64) -> Result<Field> {
        if self.grid != other.grid {
            return Err(FioError::GridMismatch);
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(u, v)| a * u + b * v)
            .collect();
        Ok(Field {
            grid: self.grid,
            values,
        })
    }

    pub fn sub(&self, other: &Field) -> Result<Field> {
        self.combine(Complex64::new(1.0, 0.0), other, Complex64::new(-1.0, 0.0))
    }

    /// Grid L² norm.
    pub fn l2_norm(&self) -> f64 {
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.cell_measure()).sqrt()
    }

    /// Fraction of the L² mass sitting in cells with `|x|_∞ ≥ 0.9 L`.
    pub fn boundary_mass_fraction(&self) -> f64 {
        let edge = 0.9 * self.grid.half_extent();
        let dim = self.grid.dim();
        let mut total = 0.0;
        let mut outer = 0.0;
        for (i, v) in self.values.iter().enumerate() {
            let p = self.grid.point(i);
            let m = v.norm_sqr();
            total += m;
            if p[..dim].iter().any(|c| c.abs() >= edge) {
                outer += m;
            }
        }
        if total == 0.0 {
            0.0
        } else {
            outer / total
        }
    }

    /// Rejects fields that have not decayed before reaching the periodic boundary.
    pub fn check_boundary_decay(&self, tol: f64) -> Result<()> {
        let mass = self.boundary_mass_fraction();
        if mass > tol {
            Err(FioError::BoundaryMass { mass, tol })
        } else {
            Ok(())
        }
    }
}

/// Coefficients on the dual grid, in FFT order.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    grid: GridSpec,
    coefficients: Vec<Complex64>,
}

impl SpectralField {
    pub fn new(grid: GridSpec, coefficients: Vec<Complex64>) -> Result<Self> {
        check_values(&grid, &coefficients, "spectral field")?;
        Ok(SpectralField { grid, coefficients })
    }

    /// Samples `f` at every dual-grid frequency.
    pub fn from_fn(grid: GridSpec, f: impl Fn(&[f64]) -> Complex64) -> Result<Self> {
        let dim = grid.dim();
        let coefficients = grid.frequencies().map(|k| f(&k[..dim])).collect();
        SpectralField::new(grid, coefficients)
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn into_coefficients(self) -> Vec<Complex64> {
        self.coefficients
    }

    /// Pointwise product with a real frequency weight.
    pub fn weighted(&self, w: impl Fn(&[f64]) -> f64) -> SpectralField {
        let dim = self.grid.dim();
        let coefficients = self
            .coefficients
            .iter()
            .enumerate()
            .map(|(i, c)| c * w(&self.grid.frequency(i)[..dim]))
            .collect();
        SpectralField {
            grid: self.grid,
            coefficients,
        }
    }

    /// `Σ |c|² Δξ^n`.
    pub fn l2_norm_sqr(&self) -> f64 {
        self.coefficients.iter().map(|c| c.norm_sqr()).sum::<f64>() * self.grid.freq_cell_measure()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_arithmetic() {
        let g = GridSpec::new(1, 16.0, 256).unwrap();
        assert_eq!(g.step(), 0.125);
        assert!((g.freq_step() - std::f64::consts::PI / 16.0).abs() < 1e-15);
        assert!((g.nyquist() - std::f64::consts::PI * 8.0).abs() < 1e-12);
        let g2 = GridSpec::new(2, 8.0, 128).unwrap();
        assert_eq!(g2.len(), 128 * 128);
    }

    #[test]
    fn grid_rejects_bad_parameters() {
        assert!(GridSpec::new(1, 16.0, 100).is_err());
        assert!(GridSpec::new(1, 16.0, 4).is_err());
        assert!(GridSpec::new(1, 0.0, 64).is_err());
        assert!(GridSpec::new(1, -1.0, 64).is_err());
        assert!(GridSpec::new(3, 1.0, 64).is_err());
    }

    #[test]
    fn index_lookup_round_trips() {
        let g = GridSpec::new(2, 4.0, 16).unwrap();
        for idx in [0, 5, 17, 255] {
            assert_eq!(g.index_of_point(&g.point(idx)), Some(idx));
            assert_eq!(g.index_of_frequency(&g.frequency(idx)), Some(idx));
        }
        assert_eq!(g.index_of_point(&[0.01, 0.0]), None);
    }

    #[test]
    fn field_rejects_non_finite() {
        let g = GridSpec::new(1, 1.0, 8).unwrap();
        let mut v = vec![Complex64::new(0.0, 0.0); 8];
        v[3] = Complex64::new(f64::NAN, 0.0);
        assert!(Field::new(g, v).is_err());
        assert!(Field::new(g, vec![Complex64::new(0.0, 0.0); 7]).is_err());
    }

    #[test]
    fn serde_validates_grid() {
        let ok: GridSpec = serde_json::from_str(r#"{"dim":1,"half_extent":2.0,"points_per_axis":64}"#).unwrap();
        assert_eq!(ok.len(), 64);
        let bad: std::result::Result<GridSpec, _> =
            serde_json::from_str(r#"{"dim":1,"half_extent":2.0,"points_per_axis":60}"#);
        assert!(bad.is_err());
    }
}
