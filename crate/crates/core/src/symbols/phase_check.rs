use serde::{Deserialize, Serialize};

use super::{diff, norm, Phase};
use crate::error::{FioError, Result};

/// Sample points for phase verification: `x` in `[-1, 1]^n`, `ξ` on the
/// radii `1/2, 1, 2`. Homogeneity carries the bounds to all `ξ ≠ 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseProbes {
    pub xs: Vec<[f64; 2]>,
    pub xis: Vec<[f64; 2]>,
}

impl PhaseProbes {
    pub fn standard(dim: usize) -> Self {
        let radii = [0.5, 1.0, 2.0];
        if dim == 1 {
            let xs = [-1.0, -0.5, 0.0, 0.5, 1.0].iter().map(|&x| [x, 0.0]).collect();
            let xis = radii.iter().flat_map(|&r| [[r, 0.0], [-r, 0.0]]).collect();
            PhaseProbes { xs, xis }
        } else {
            let mut xs = Vec::new();
            for a in [-1.0, 0.0, 1.0] {
                for b in [-1.0, 0.0, 1.0] {
                    xs.push([a, b]);
                }
            }
            let mut xis = Vec::new();
            for r in radii {
                for k in 0..8 {
                    let t = k as f64 * std::f64::consts::PI / 4.0;
                    xis.push([r * t.cos(), r * t.sin()]);
                }
            }
            PhaseProbes { xs, xis }
        }
    }
}

/// Where a worst constant was observed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub x: Vec<f64>,
    pub xi: Vec<f64>,
    pub alpha: Vec<u32>,
    pub beta: Vec<u32>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseClassReport {
    pub ok: bool,
    pub worst_constant: f64,
    pub witness: Option<Witness>,
}

/// Default cap on the probed constants of a `Φ^k` phase.
pub const PHASE_CONSTANT_CAP: f64 = 1e3;

/// Probes `|ξ|^{|α|−1} |∂^α_ξ ∂^β_x φ|` for `k ≤ |α|+|β| ≤ max_order`.
pub fn verify_phase_class(phi: &Phase, k: u32, max_order: u32, probes: &PhaseProbes) -> Result<PhaseClassReport> {
    let phi = phi.clone().validate()?;
    if max_order > diff::MAX_ORDER {
        return Err(FioError::InvalidPhase(format!(
            "orders above {} are not probed",
            diff::MAX_ORDER
        )));
    }
    let dim = phi.dim();
    let mut worst = 0.0f64;
    let mut witness = None;
    let mut finite = true;
    for total in k.max(1)..=max_order {
        for joint in diff::multi_indices(2 * dim, total) {
            let (beta, alpha) = joint.split_at(dim);
            let alpha_order: u32 = alpha.iter().sum();
            for x in &probes.xs {
                for xi in &probes.xis {
                    let xi = &xi[..dim];
                    let d = phi.partial(&x[..dim], xi, alpha, beta);
                    let v = norm(xi).powi(alpha_order as i32 - 1) * d.abs();
                    if !v.is_finite() {
                        finite = false;
                        continue;
                    }
                    if v > worst {
                        worst = v;
                        witness = Some(Witness {
                            x: x[..dim].to_vec(),
                            xi: xi.to_vec(),
                            alpha: alpha.to_vec(),
                            beta: beta.to_vec(),
                            value: v,
                        });
                    }
                }
            }
        }
    }
    Ok(PhaseClassReport {
        ok: finite && worst <= PHASE_CONSTANT_CAP,
        worst_constant: worst,
        witness,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SndReport {
    pub min_det: f64,
    pub ok: bool,
    pub witness: Option<(Vec<f64>, Vec<f64>)>,
}

/// `min |det ∂²φ/∂x∂ξ|` over the probes; `ok` iff it is at least `c0 > 0`.
pub fn verify_snd(phi: &Phase, probes: &PhaseProbes, c0: f64) -> SndReport {
    let dim = phi.dim();
    let mut min_det = f64::INFINITY;
    let mut witness = None;
    let mut finite = true;
    for x in &probes.xs {
        for xi in &probes.xis {
            let h = phi.mixed_hessian(&x[..dim], &xi[..dim]);
            let det = if dim == 1 {
                h[0][0]
            } else {
                h[0][0] * h[1][1] - h[0][1] * h[1][0]
            }
            .abs();
            if !det.is_finite() {
                finite = false;
                continue;
            }
            if det < min_det {
                min_det = det;
                witness = Some((x[..dim].to_vec(), xi[..dim].to_vec()));
            }
        }
    }
    SndReport {
        min_det,
        ok: finite && c0 > 0.0 && min_det >= c0,
        witness,
    }
}
