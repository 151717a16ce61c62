use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::cone::angle_diff;
use crate::error::{FioError, Result};
use crate::symbols::{bump, norm, smooth_step, verify_snd, Phase, PhaseProbes};

/// SND constant below which a phase is refused.
pub const SND_FLOOR: f64 = 1e-3;

/// One patch of the sphere with centre `ζ_l`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Patch {
    pub centre: [f64; 2],
    pub angle: f64,
}

/// `φ = ψ_l + ⟨t_l(x), ξ⟩` on the support of each patch cutoff `Ξ_l`.
#[derive(Debug, Clone)]
pub struct ReducedPhase {
    phase: Phase,
    patches: Vec<Patch>,
    width: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReductionReport {
    pub patches: usize,
    pub diameter: f64,
    /// `max |φ − ψ_l − ⟨t_l, ξ⟩| / max(1, |φ|)` on patch supports.
    pub identity_error: f64,
    /// `max |∂_{ξ_k} ψ_l|` over all probes.
    pub max_first_derivative: f64,
    /// `max_first_derivative / diameter`.
    pub constant: f64,
}

/// Splits a homogeneous SND phase into `patch_count` angular patches
/// (two half-lines on the line).
pub fn phase_reduce(phi: &Phase, patch_count: usize) -> Result<ReducedPhase> {
    if !phi.is_homogeneous() {
        return Err(FioError::InvalidPhase(format!(
            "{} is not homogeneous of degree 1",
            phi.name()
        )));
    }
    let snd = verify_snd(phi, &PhaseProbes::standard(phi.dim()), SND_FLOOR);
    if !snd.ok {
        return Err(FioError::InvalidPhase(format!(
            "{} fails strong non-degeneracy (min |det| = {:e})",
            phi.name(),
            snd.min_det
        )));
    }
    let (patches, width) = if phi.dim() == 1 {
        (
            vec![
                Patch {
                    centre: [1.0, 0.0],
                    angle: 0.0,
                },
                Patch {
                    centre: [-1.0, 0.0],
                    angle: PI,
                },
            ],
            PI,
        )
    } else {
        if patch_count < 4 {
            return Err(FioError::Decomposition(format!(
                "{patch_count} patches, need at least 4"
            )));
        }
        let w = 2.0 * PI / patch_count as f64;
        let patches = (0..patch_count)
            .map(|l| {
                let a = w * l as f64;
                Patch {
                    centre: [a.cos(), a.sin()],
                    angle: a,
                }
            })
            .collect();
        (patches, w)
    };
    Ok(ReducedPhase {
        phase: phi.clone(),
        patches,
        width,
    })
}

impl ReducedPhase {
    pub fn len(&self) -> usize {
        self.patches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patches.is_empty()
    }

    pub fn patches(&self) -> &[Patch] {
        &self.patches
    }

    pub fn dim(&self) -> usize {
        self.phase.dim()
    }

    /// Chord spanned by one patch: `2 sin(w)` for angular half-width `w`.
    pub fn diameter(&self) -> f64 {
        if self.dim() == 1 {
            0.0
        } else {
            2.0 * self.width.sin()
        }
    }

    /// Patch partition `Ξ_l(ξ)`.
    pub fn cutoff(&self, l: usize, xi: &[f64]) -> f64 {
        if self.dim() == 1 {
            let s = xi[0] * self.patches[l].centre[0];
            return if s > 0.0 { 1.0 } else { 0.0 };
        }
        if norm(xi) == 0.0 {
            return 0.0;
        }
        let theta = xi[1].atan2(xi[0]);
        let raw = |p: &Patch| bump(angle_diff(theta, p.angle) / self.width);
        let num = raw(&self.patches[l]);
        if num == 0.0 {
            return 0.0;
        }
        num / self.patches.iter().map(raw).sum::<f64>()
    }

    /// `t_l(x) = ∇_ξ φ(x, ζ_l)`.
    pub fn translation(&self, l: usize, x: &[f64]) -> [f64; 2] {
        let d = self.dim();
        self.phase.grad_xi(x, &self.patches[l].centre[..d])
    }

    /// `ξ` rotated onto the patch: the angle offset `Δ` is replaced by
    /// `Δ ρ₀(|Δ|/w)`, so points of the patch are fixed and far points fold
    /// smoothly onto `ζ_l`.
    fn clamp(&self, l: usize, xi: &[f64]) -> [f64; 2] {
        let r = norm(xi);
        let p = &self.patches[l];
        if self.dim() == 1 {
            return [r * p.centre[0], 0.0];
        }
        if r == 0.0 {
            return [0.0, 0.0];
        }
        let delta = angle_diff(xi[1].atan2(xi[0]), p.angle);
        let a = p.angle + delta * smooth_step(delta.abs() / self.width);
        [r * a.cos(), r * a.sin()]
    }

    /// `ψ_l(x, ξ) = φ(x, ξ_c) − ⟨t_l(x), ξ_c⟩` with `ξ_c` the clamped frequency.
    pub fn psi(&self, l: usize, x: &[f64], xi: &[f64]) -> f64 {
        let d = self.dim();
        let c = self.clamp(l, xi);
        if c.iter().all(|v| *v == 0.0) {
            return 0.0;
        }
        let t = self.translation(l, x);
        self.phase.eval(x, &c[..d]) - (0..d).map(|a| t[a] * c[a]).sum::<f64>()
    }

    /// `ψ_l` packaged as a phase.
    pub fn psi_phase(&self, l: usize) -> Phase {
        let me = self.clone();
        Phase::new(
            format!("{}-reduced-{l}", self.phase.name()),
            self.dim(),
            move |x, xi| me.psi(l, x, xi),
        )
        .homogeneous(true)
        .declared_k(1)
    }

    /// Probes the patch identity and the first-derivative bound.
    pub fn check(&self, probes: &PhaseProbes) -> ReductionReport {
        let d = self.dim();
        let mut identity = 0.0f64;
        let mut first = 0.0f64;
        let mut xis: Vec<[f64; 2]> = probes.xis.clone();
        if d == 2 {
            for r in [0.5, 1.0, 2.0] {
                for i in 0..180 {
                    let t = 2.0 * PI * (i as f64 + 0.25) / 180.0;
                    xis.push([r * t.cos(), r * t.sin()]);
                }
            }
        }
        for l in 0..self.len() {
            for x in &probes.xs {
                let x = &x[..d];
                let t = self.translation(l, x);
                for xi in &xis {
                    let xi = &xi[..d];
                    if self.cutoff(l, xi) > 0.0 {
                        let phi = self.phase.eval(x, xi);
                        let lin: f64 = (0..d).map(|a| t[a] * xi[a]).sum();
                        let err = (phi - self.psi(l, x, xi) - lin).abs() / phi.abs().max(1.0);
                        identity = identity.max(err);
                    }
                    let h = crate::symbols::diff::xi_step(norm(xi));
                    for k in 0..d {
                        let mut alpha = vec![0u32; d];
                        alpha[k] = 1;
                        let g = crate::symbols::diff::partial(|p: &[f64]| self.psi(l, x, p), xi, &alpha, &vec![h; d]);
                        first = first.max(g.abs());
                    }
                }
            }
        }
        let diameter = self.diameter();
        ReductionReport {
            patches: self.len(),
            diameter,
            identity_error: identity,
            max_first_derivative: first,
            constant: if diameter > 0.0 { first / diameter } else { 0.0 },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::{catalog, CatalogEntry};

    #[test]
    fn linear_phase_reduces_to_translation() {
        let phi = catalog(&CatalogEntry::LinearPhase, 2).unwrap().into_phase().unwrap();
        let red = phase_reduce(&phi, 6).unwrap();
        for l in 0..red.len() {
            let t = red.translation(l, &[0.4, -0.3]);
            assert!((t[0] - 0.4).abs() < 1e-15 && (t[1] + 0.3).abs() < 1e-15);
            assert!(red.psi(l, &[0.4, -0.3], &[1.3, 2.0]).abs() < 1e-12);
        }
    }

    #[test]
    fn wave_identity_and_bound() {
        let phi = catalog(&CatalogEntry::Wave, 2).unwrap().into_phase().unwrap();
        let probes = PhaseProbes::standard(2);
        let coarse = phase_reduce(&phi, 8).unwrap().check(&probes);
        let fine = phase_reduce(&phi, 16).unwrap().check(&probes);
        assert!(coarse.identity_error < 1e-9);
        assert!(fine.identity_error < 1e-9);
        let ratio = coarse.max_first_derivative / fine.max_first_derivative;
        // Halving the patch roughly halves the bound.
        assert!((1.0..=4.0).contains(&ratio), "{ratio}");
        assert!(coarse.max_first_derivative <= 3.0 * 2.0 * PI / 8.0);
    }

    #[test]
    fn line_patches_vanish() {
        let phi = catalog(&CatalogEntry::Wave, 1).unwrap().into_phase().unwrap();
        let red = phase_reduce(&phi, 4).unwrap();
        assert_eq!(red.len(), 2);
        for l in 0..2 {
            for xi in [-3.0, -0.5, 0.5, 2.0] {
                assert!(red.psi(l, &[0.7], &[xi]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn degenerate_phase_is_refused() {
        let p = catalog(
            &CatalogEntry::LinearMap {
                matrix: [[1.0, 0.0], [0.0, 0.0]],
            },
            2,
        )
        .unwrap()
        .into_phase()
        .unwrap();
        assert!(phase_reduce(&p, 8).is_err());
        let few = catalog(&CatalogEntry::Wave, 2).unwrap().into_phase().unwrap();
        assert!(phase_reduce(&few, 3).is_err());
    }
}
