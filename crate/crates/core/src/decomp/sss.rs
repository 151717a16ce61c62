use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{ConeCover, LittlewoodPaley};
use crate::error::{FioError, Result};
use crate::field::GridSpec;
use crate::symbols::{diff, Amplitude, Phase};

/// One second-dyadic piece `A^ν_j = e^{iΦ} a χ^ν_j Ψ_j`.
#[derive(Debug, Clone)]
pub struct SssPiece {
    level: u32,
    direction: usize,
    axis: [f64; 2],
    amplitude: Amplitude,
    phase: Phase,
    cover: ConeCover,
    lp: LittlewoodPaley,
}

/// Second ξ-derivatives of `Φ` in the frame with `ξ₁ ∥ ξ^ν_j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhiCheck {
    pub level: u32,
    pub direction: usize,
    /// `max |∂²_{ξ₁} Φ|` over the piece's support.
    pub radial: f64,
    /// `max |∂²_{ξ′} Φ|` over the piece's support (zero on the line).
    pub transverse: f64,
    /// `radial · 2^{2j}`.
    pub radial_constant: f64,
    /// `transverse · 2^{j}`.
    pub transverse_constant: f64,
    pub samples: usize,
}

/// Localizes `a` to the `(j, ν)` cone-shell and linearizes `φ` along `ξ^ν_j`.
pub fn sss_localize(
    a: &Amplitude,
    phi: &Phase,
    j: u32,
    nu: usize,
    cover: &ConeCover,
    lp: &LittlewoodPaley,
) -> Result<SssPiece> {
    if a.arity() != 1 {
        return Err(FioError::InvalidAmplitude(
            "cone localization needs a linear amplitude".into(),
        ));
    }
    if !phi.is_homogeneous() {
        return Err(FioError::InvalidPhase(format!(
            "{} is not homogeneous of degree 1",
            phi.name()
        )));
    }
    if j == 0 || j > lp.j_max() {
        return Err(FioError::Decomposition(format!("level {j} outside 1..={}", lp.j_max())));
    }
    if cover.level() != j || nu >= cover.len() {
        return Err(FioError::Decomposition(format!(
            "cover does not carry direction {nu} at level {j}"
        )));
    }
    if a.dim() != phi.dim() || a.dim() != cover.dim() {
        return Err(FioError::GridMismatch);
    }
    Ok(SssPiece {
        level: j,
        direction: nu,
        axis: cover.directions()[nu],
        amplitude: a.clone(),
        phase: phi.clone(),
        cover: cover.clone(),
        lp: lp.clone(),
    })
}

impl SssPiece {
    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn direction(&self) -> usize {
        self.direction
    }

    /// `t^ν_j(x) = ∇_ξ φ(x, ξ^ν_j)`.
    pub fn translation(&self, x: &[f64]) -> [f64; 2] {
        let dim = self.phase.dim();
        self.phase.grad_xi(x, &self.axis[..dim])
    }

    /// `Φ(x, ξ) = φ(x, ξ) − ⟨t^ν_j(x), ξ⟩`.
    pub fn remainder_phase(&self, x: &[f64], xi: &[f64]) -> f64 {
        let t = self.translation(x);
        self.phase.eval(x, xi) - xi.iter().zip(t).map(|(a, b)| a * b).sum::<f64>()
    }

    /// `χ^ν_j(ξ) Ψ_j(ξ)`.
    pub fn cutoff(&self, xi: &[f64]) -> f64 {
        let w = self.cover.weight(self.direction, xi);
        if w == 0.0 {
            0.0
        } else {
            w * self.lp.shell_at(self.level, xi)
        }
    }

    /// `A^ν_j(x, ξ)`.
    pub fn eval(&self, x: &[f64], xi: &[f64]) -> Complex64 {
        let c = self.cutoff(xi);
        if c == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        self.amplitude.eval1(x, xi) * Complex64::from_polar(c, self.remainder_phase(x, xi))
    }

    /// Measure of the ξ-support: active dual-grid cells times the cell measure.
    pub fn support_measure(&self, grid: &GridSpec) -> f64 {
        let dim = grid.dim();
        let count = grid.frequencies().filter(|k| self.cutoff(&k[..dim]) > 0.0).count();
        count as f64 * grid.freq_cell_measure()
    }

    /// Probes the second derivatives of `Φ` over the support at the given `x`.
    pub fn phi_check(&self, xs: &[[f64; 2]]) -> PhiCheck {
        let dim = self.phase.dim();
        let j = self.level as i32;
        let e = self.axis;
        let perp = [-e[1], e[0]];
        let mut radial = 0.0f64;
        let mut transverse = 0.0f64;
        let mut samples = 0;
        let theta0 = e[1].atan2(e[0]);
        let angles: Vec<f64> = if dim == 1 {
            vec![theta0]
        } else {
            (0..=32)
                .map(|i| theta0 + (i as f64 / 16.0 - 1.0) * self.cover.width())
                .collect()
        };
        for k in 0..=24 {
            let r = 2f64.powi(j - 1) * 4f64.powf(k as f64 / 24.0);
            for &t in &angles {
                let xi = [r * t.cos(), r * t.sin()];
                if self.cutoff(&xi[..dim]) == 0.0 {
                    continue;
                }
                samples += 1;
                let h = diff::xi_step(r);
                // Coordinates (s₁, s₂) ↦ ξ + s₁e + s₂e⊥.
                for x in xs {
                    let f = |s: &[f64]| {
                        let mut p = xi;
                        for a in 0..dim {
                            p[a] += s[0] * e[a] + if dim == 2 { s[1] * perp[a] } else { 0.0 };
                        }
                        self.remainder_phase(&x[..dim], &p[..dim])
                    };
                    let d11 = diff::partial(f, &[0.0, 0.0], &[2, 0], &[h, h]);
                    radial = radial.max(d11.abs());
                    if dim == 2 {
                        let d22 = diff::partial(f, &[0.0, 0.0], &[0, 2], &[h, h]);
                        transverse = transverse.max(d22.abs());
                    }
                }
            }
        }
        PhiCheck {
            level: self.level,
            direction: self.direction,
            radial,
            transverse,
            radial_constant: radial * 4f64.powi(j),
            transverse_constant: transverse * 2f64.powi(j),
            samples,
        }
    }
}

/// Default `x` probes for Φ checks.
pub fn phi_probe_points(dim: usize) -> Vec<[f64; 2]> {
    if dim == 1 {
        vec![[-1.0, 0.0], [0.0, 0.0], [1.0, 0.0]]
    } else {
        vec![[0.0, 0.0], [1.0, -0.5], [-0.7, 0.9]]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::{catalog, CatalogEntry};

    fn unit_amplitude(dim: usize) -> Amplitude {
        catalog(
            &CatalogEntry::Hormander {
                m: 0.0,
                rho: 1.0,
                localized: false,
            },
            dim,
        )
        .unwrap()
        .into_amplitude()
        .unwrap()
    }

    #[test]
    fn linear_phase_has_no_remainder() {
        let g = GridSpec::new(2, 8.0, 128).unwrap();
        let lp = LittlewoodPaley::build(&g).unwrap();
        let cover = ConeCover::build(3, 2).unwrap();
        let phi = catalog(&CatalogEntry::LinearPhase, 2).unwrap().into_phase().unwrap();
        let piece = sss_localize(&unit_amplitude(2), &phi, 3, 2, &cover, &lp).unwrap();
        for xi in [[8.0, 3.0], [-2.0, 7.0], [0.5, 0.1]] {
            assert!(piece.remainder_phase(&[0.3, -1.2], &xi).abs() < 1e-12);
            let expect = piece.cutoff(&xi);
            assert!((piece.eval(&[0.3, -1.2], &xi) - expect).norm() < 1e-12);
        }
    }

    #[test]
    fn wave_phase_check_is_uniform_over_directions() {
        let g = GridSpec::new(2, 8.0, 256).unwrap();
        let lp = LittlewoodPaley::build(&g).unwrap();
        let cover = ConeCover::build(4, 2).unwrap();
        let phi = catalog(&CatalogEntry::Wave, 2).unwrap().into_phase().unwrap();
        let a = unit_amplitude(2);
        let xs = phi_probe_points(2);
        let checks: Vec<PhiCheck> = (0..cover.len())
            .map(|nu| sss_localize(&a, &phi, 4, nu, &cover, &lp).unwrap().phi_check(&xs))
            .collect();
        let r: Vec<f64> = checks.iter().map(|c| c.radial_constant).collect();
        let t: Vec<f64> = checks.iter().map(|c| c.transverse_constant).collect();
        let spread =
            |v: &[f64]| v.iter().cloned().fold(0.0, f64::max) / v.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(spread(&r) < 1.5, "{r:?}");
        assert!(spread(&t) < 1.5, "{t:?}");
    }

    #[test]
    fn support_measure_scales_like_the_cone() {
        let g = GridSpec::new(2, 8.0, 512).unwrap();
        let lp = LittlewoodPaley::build(&g).unwrap();
        let cover = ConeCover::build(4, 2).unwrap();
        let phi = catalog(&CatalogEntry::Wave, 2).unwrap().into_phase().unwrap();
        let piece = sss_localize(&unit_amplitude(2), &phi, 4, 0, &cover, &lp).unwrap();
        let ratio = piece.support_measure(&g) / 2f64.powf(4.0 * 3.0 / 2.0);
        assert!((1.0 / 8.0..=8.0).contains(&ratio), "{ratio}");
    }

    #[test]
    fn non_homogeneous_phase_is_rejected() {
        let g = GridSpec::new(2, 8.0, 128).unwrap();
        let lp = LittlewoodPaley::build(&g).unwrap();
        let cover = ConeCover::build(3, 2).unwrap();
        let phi = catalog(&CatalogEntry::Schrodinger, 2).unwrap().into_phase().unwrap();
        assert!(sss_localize(&unit_amplitude(2), &phi, 3, 0, &cover, &lp).is_err());
    }
}
