use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};

use super::{Field, GridSpec, SpectralField};

/// Unnormalized multi-dimensional FFT of a row-major cube with `n` points
/// along each of `dims` axes.
pub fn fft_in_place(data: &mut [Complex64], n: usize, dims: usize, direction: FftDirection) {
    assert_eq!(data.len(), n.pow(dims as u32), "cube size mismatch");
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft(n, direction);
    let mut line = vec![Complex64::new(0.0, 0.0); n];
    let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    for axis in 0..dims {
        let stride = n.pow((dims - 1 - axis) as u32);
        let block = stride * n;
        for start in (0..data.len()).step_by(block) {
            for offset in 0..stride {
                let base = start + offset;
                for (k, slot) in line.iter_mut().enumerate() {
                    *slot = data[base + k * stride];
                }
                fft.process_with_scratch(&mut line, &mut scratch);
                for (k, v) in line.iter().enumerate() {
                    data[base + k * stride] = *v;
                }
            }
        }
    }
}

/// Parity sign `Π (−1)^{k_axis}` of a flat index.
fn parity(grid: &GridSpec, idx: usize) -> f64 {
    let [i, j] = grid.axis_indices(idx);
    if (i + j) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `û(ξ) ≈ ∫ u(x) e^{-i⟨x,ξ⟩} dx` on the dual grid.
///
/// The grid starts at `x = -L`, so the quadrature is the DFT scaled by
/// `h^n` and the shift factor `e^{iLξ} = (−1)^k`.
pub fn fourier_transform(f: &Field) -> SpectralField {
    let grid = *f.grid();
    let mut data = f.values().to_vec();
    fft_in_place(&mut data, grid.points_per_axis(), grid.dim(), FftDirection::Forward);
    let scale = grid.cell_measure();
    for (i, v) in data.iter_mut().enumerate() {
        *v *= scale * parity(&grid, i);
    }
    SpectralField::new(grid, data).expect("transform of a finite field is finite")
}

/// `u(x) = (2π)^{-n} Σ_ξ û(ξ) e^{i⟨x,ξ⟩} Δξ^n`, the exact inverse of
/// [`fourier_transform`].
pub fn inverse_fourier_transform(s: &SpectralField) -> Field {
    let grid = *s.grid();
    let mut data: Vec<Complex64> = s
        .coefficients()
        .iter()
        .enumerate()
        .map(|(i, c)| c * parity(&grid, i))
        .collect();
    fft_in_place(&mut data, grid.points_per_axis(), grid.dim(), FftDirection::Inverse);
    let scale = grid.freq_cell_measure() / (2.0 * PI).powi(grid.dim() as i32);
    for v in data.iter_mut() {
        *v *= scale;
    }
    Field::new(grid, data).expect("inverse transform of finite coefficients is finite")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn gaussian_is_self_dual() {
        let g = GridSpec::new(1, 16.0, 256).unwrap();
        let u = Field::from_fn(g, |x| Complex64::new((-x[0] * x[0] / 2.0).exp(), 0.0)).unwrap();
        let s = fourier_transform(&u);
        let peak = (2.0 * PI).sqrt();
        for (i, c) in s.coefficients().iter().enumerate() {
            let xi = g.frequency(i)[0];
            if xi.abs() <= 8.0 {
                let exact = peak * (-xi * xi / 2.0).exp();
                assert!((c - exact).norm() <= 1e-8 * peak, "ξ = {xi}");
            }
        }
    }

    #[test]
    fn zero_maps_to_zero() {
        let g = GridSpec::new(2, 4.0, 16).unwrap();
        let s = fourier_transform(&Field::zeros(g));
        assert!(s.coefficients().iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn round_trip_and_plancherel() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for dim in [1, 2] {
            let g = GridSpec::new(dim, 5.0, 32).unwrap();
            let vals = (0..g.len())
                .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            let u = Field::new(g, vals).unwrap();
            let s = fourier_transform(&u);
            let back = inverse_fourier_transform(&s);
            assert!(back.sub(&u).unwrap().l2_norm() <= 1e-12 * u.l2_norm());
            let lhs = s.l2_norm_sqr();
            let rhs = (2.0 * PI).powi(dim as i32) * u.l2_norm().powi(2);
            assert!((lhs - rhs).abs() <= 1e-10 * rhs);
        }
    }
}
