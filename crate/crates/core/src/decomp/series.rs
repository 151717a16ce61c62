use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftDirection;

use crate::error::{FioError, Result};
use crate::field::{fft_in_place, lp_norm_values, Field, GridSpec};
use crate::symbols::Amplitude;

/// Share of coefficient energy on the outer ring that triggers an aliasing warning.
pub const ALIASING_TOL: f64 = 1e-6;

/// Signed frequency of FFT index `k` for `m` samples.
pub(crate) fn signed(k: usize, m: usize) -> i64 {
    if k < m / 2 {
        k as i64
    } else {
        k as i64 - m as i64
    }
}

/// Fourier coefficients `c_k = (2π)^{−d} ∫_{[−π,π)^d} f(t) e^{−i⟨k,t⟩} dt` of a
/// periodic function on the `d`-torus, from `m^d` samples at `t_s = −π + 2πs/m`.
/// Returned in FFT order along each axis.
pub fn torus_coefficients(f: impl Fn(&[f64]) -> Complex64, d: usize, m: usize) -> Vec<Complex64> {
    let total = m.pow(d as u32);
    let mut data = Vec::with_capacity(total);
    let mut t = vec![0.0; d];
    for idx in 0..total {
        let mut rest = idx;
        for a in (0..d).rev() {
            t[a] = -PI + 2.0 * PI * (rest % m) as f64 / m as f64;
            rest /= m;
        }
        data.push(f(&t));
    }
    fft_in_place(&mut data, m, d, FftDirection::Forward);
    let scale = 1.0 / total as f64;
    for (idx, v) in data.iter_mut().enumerate() {
        // e^{iπk} from the shifted origin of the sample grid.
        let mut rest = idx;
        let mut parity = 0;
        for _ in 0..d {
            parity += rest % m;
            rest /= m;
        }
        let sign = if parity % 2 == 0 { 1.0 } else { -1.0 };
        *v *= scale * sign;
    }
    data
}

/// One coefficient field `a_k(x)` with its `L^p` norm.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesTerm {
    pub k: Vec<i64>,
    pub field: Field,
    pub lp_norm: f64,
}

/// `a(x, ξ) = Σ_k a_k(x) e^{i(2π/L)⟨k, ξ⟩}` on the box `[−L/2, L/2]^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierSeriesAmplitude {
    pub box_side: f64,
    pub k_max: usize,
    pub p: f64,
    pub terms: Vec<SeriesTerm>,
    /// Largest `|Σ_k a_k e^{…} − a| / max|a|` at off-sample test frequencies.
    pub reconstruction_error: f64,
    pub warnings: Vec<String>,
}

impl FourierSeriesAmplitude {
    /// `max_{|k|_∞ = s} ‖a_k‖_{L^p}` for `s = 0..=K_max`.
    pub fn norms_by_ring(&self) -> Vec<(usize, f64)> {
        let mut out = vec![0.0f64; self.k_max + 1];
        for t in &self.terms {
            let s = t.k.iter().map(|v| v.unsigned_abs() as usize).max().unwrap_or(0);
            out[s] = out[s].max(t.lp_norm);
        }
        out.into_iter().enumerate().collect()
    }

    /// The truncated series at grid point `x_index` and frequency `xi`.
    pub fn eval(&self, x_index: usize, xi: &[f64]) -> Complex64 {
        let w = 2.0 * PI / self.box_side;
        self.terms
            .iter()
            .map(|t| {
                let ph: f64 = t.k.iter().zip(xi).map(|(k, v)| *k as f64 * v).sum::<f64>() * w;
                t.field.values()[x_index] * Complex64::from_polar(1.0, ph)
            })
            .sum()
    }
}

/// Expands an arity-1 amplitude in ξ on the box of side `box_side`, keeping
/// `|k|_∞ ≤ k_max`; coefficients are sampled on `grid` in `x`.
pub fn fourier_series_expand(
    a: &Amplitude,
    grid: &GridSpec,
    box_side: f64,
    k_max: usize,
    p: f64,
) -> Result<FourierSeriesAmplitude> {
    if a.arity() != 1 {
        return Err(FioError::InvalidAmplitude(
            "series expansion needs a linear amplitude".into(),
        ));
    }
    if a.dim() != grid.dim() {
        return Err(FioError::GridMismatch);
    }
    if k_max < 4 {
        return Err(FioError::Decomposition(format!("K_max = {k_max}, need at least 4")));
    }
    if !(box_side > 0.0) {
        return Err(FioError::Decomposition("box side must be positive".into()));
    }
    let dim = grid.dim();
    let m = (8 * k_max).next_power_of_two().max(64);
    let scale = box_side / (2.0 * PI);
    let xs: Vec<[f64; 2]> = grid.points().collect();
    // Coefficients per x: the box maps to the torus by ξ = (L/2π)·t.
    let per_x: Vec<Vec<Complex64>> = xs
        .par_iter()
        .map(|x| {
            torus_coefficients(
                |t| {
                    let xi: Vec<f64> = t.iter().map(|v| v * scale).collect();
                    a.eval1(&x[..dim], &xi)
                },
                dim,
                m,
            )
        })
        .collect();
    let kk = k_max as i64;
    let mut ks: Vec<Vec<i64>> = Vec::new();
    if dim == 1 {
        for k in -kk..=kk {
            ks.push(vec![k]);
        }
    } else {
        for k0 in -kk..=kk {
            for k1 in -kk..=kk {
                ks.push(vec![k0, k1]);
            }
        }
    }
    let index = |k: &[i64]| -> usize {
        k.iter()
            .fold(0usize, |acc, &v| acc * m + v.rem_euclid(m as i64) as usize)
    };
    let mut terms = Vec::with_capacity(ks.len());
    let mut ring_energy = 0.0;
    let mut total_energy = 0.0;
    for k in ks {
        let i = index(&k);
        let values: Vec<Complex64> = per_x.iter().map(|c| c[i]).collect();
        let energy: f64 = values.iter().map(|v| v.norm_sqr()).sum();
        total_energy += energy;
        if k.iter().any(|v| v.unsigned_abs() as usize == k_max) {
            ring_energy += energy;
        }
        let lp_norm = lp_norm_values(&values, grid.cell_measure(), p)?;
        terms.push(SeriesTerm {
            k,
            field: Field::new(*grid, values)?,
            lp_norm,
        });
    }
    let mut warnings = Vec::new();
    if total_energy > 0.0 && ring_energy > ALIASING_TOL * total_energy {
        warnings.push(format!(
            "aliasing: {:.2e} of the coefficient energy sits on |k|_∞ = {k_max}",
            ring_energy / total_energy
        ));
    }
    let mut series = FourierSeriesAmplitude {
        box_side,
        k_max,
        p,
        terms,
        reconstruction_error: 0.0,
        warnings,
    };
    // Off-sample test frequencies inside the box.
    let tests: Vec<Vec<f64>> = (0..7)
        .map(|i| {
            let u = -0.5 + (i as f64 + 0.37) / 7.0;
            if dim == 1 {
                vec![u * box_side]
            } else {
                vec![u * box_side, -0.8 * u * box_side]
            }
        })
        .collect();
    let stride = (xs.len() / 16).max(1);
    let mut err = 0.0f64;
    let mut peak = 0.0f64;
    for xi_idx in (0..xs.len()).step_by(stride) {
        for xi in &tests {
            let exact = a.eval1(&xs[xi_idx][..dim], xi);
            peak = peak.max(exact.norm());
            err = err.max((series.eval(xi_idx, xi) - exact).norm());
        }
    }
    series.reconstruction_error = if peak > 0.0 { err / peak } else { err };
    Ok(series)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::SymbolClass;

    fn class() -> SymbolClass {
        SymbolClass::linear(f64::INFINITY, 0.0, 1.0)
    }

    #[test]
    fn torus_coefficients_of_a_mode() {
        let c = torus_coefficients(|t| Complex64::from_polar(1.0, 3.0 * t[0] - t[1]), 2, 16);
        for (i, v) in c.iter().enumerate() {
            let expect = if i == 3 * 16 + 15 { 1.0 } else { 0.0 };
            assert!((v - expect).norm() < 1e-13, "index {i}: {v}");
        }
    }

    #[test]
    fn xi_independent_amplitude() {
        let g = GridSpec::new(1, 4.0, 32).unwrap();
        let a = Amplitude::linear("b", 1, class(), |x, _| Complex64::new((-x[0] * x[0]).exp(), 0.0)).unwrap();
        let s = fourier_series_expand(&a, &g, 6.0, 4, 2.0).unwrap();
        for t in &s.terms {
            if t.k == vec![0] {
                for (i, v) in t.field.values().iter().enumerate() {
                    let x = g.point(i)[0];
                    assert!((v - (-x * x).exp()).norm() < 1e-12);
                }
            } else {
                assert!(t.lp_norm < 1e-12);
            }
        }
        assert!(s.warnings.is_empty());
    }

    #[test]
    fn single_mode() {
        let g = GridSpec::new(1, 4.0, 16).unwrap();
        let l = 5.0;
        let a = Amplitude::linear("mode", 1, class(), move |x, xi| {
            Complex64::from_polar(1.0 + x[0].cos(), 2.0 * PI / l * 2.0 * xi[0])
        })
        .unwrap();
        let s = fourier_series_expand(&a, &g, l, 4, f64::INFINITY).unwrap();
        for t in &s.terms {
            if t.k == vec![2] {
                assert!((t.lp_norm - 2.0).abs() < 1e-12);
            } else {
                assert!(t.lp_norm < 1e-12);
            }
        }
        assert!(s.reconstruction_error < 1e-12);
    }

    #[test]
    fn too_few_terms_rejected() {
        let g = GridSpec::new(1, 4.0, 16).unwrap();
        let a = Amplitude::linear("1", 1, class(), |_, _| Complex64::new(1.0, 0.0)).unwrap();
        assert!(fourier_series_expand(&a, &g, 2.0, 3, 2.0).is_err());
    }
}
