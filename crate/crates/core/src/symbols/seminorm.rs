use serde::{Deserialize, Serialize};

use super::{diff, japanese, norm, Amplitude};
use crate::error::{FioError, Result};
use crate::field::{lp_norm_values, GridSpec};

/// Measured `|a|_{p,m,s}` over a finite probe set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeminormEstimate {
    pub order: u32,
    pub value: f64,
    pub samples: usize,
    pub worst_xi: Vec<f64>,
    /// True when some derivative was taken by finite differences.
    pub finite_differences: bool,
}

/// Frequencies on radii `{0, 1/2, 1, 2, …} ∩ [0, r_max]`, with eight
/// directions per radius in two dimensions.
pub fn frequency_probes(dim: usize, r_max: f64, include_origin: bool) -> Vec<Vec<f64>> {
    let mut radii = Vec::new();
    if include_origin {
        radii.push(0.0);
    }
    let mut r = 0.5;
    while r <= r_max * (1.0 + 1e-12) {
        radii.push(r);
        r *= 2.0;
    }
    let mut out = Vec::new();
    for r in radii {
        if r == 0.0 {
            out.push(vec![0.0; dim]);
            continue;
        }
        if dim == 1 {
            out.push(vec![r]);
            out.push(vec![-r]);
        } else {
            for k in 0..8 {
                let t = k as f64 * std::f64::consts::PI / 4.0 + 0.1;
                out.push(vec![r * t.cos(), r * t.sin()]);
            }
        }
    }
    out
}

/// `max_{ξ ∈ probes, |α| ≤ s} ⟨ξ⟩^{ρ|α|−m} ‖∂^α_ξ a(·, ξ)‖_{L^p}` with `x` over
/// the grid and `(p, m, ρ)` from the declared class.
pub fn seminorm_estimate(a: &Amplitude, s: u32, grid: &GridSpec, probes: &[Vec<f64>]) -> Result<SeminormEstimate> {
    if a.arity() != 1 {
        return Err(FioError::InvalidAmplitude(
            "seminorms are measured on linear amplitudes".into(),
        ));
    }
    if a.dim() != grid.dim() {
        return Err(FioError::GridMismatch);
    }
    if s > diff::MAX_ORDER && a.analytic_order().is_none_or(|o| o < s) {
        return Err(FioError::InvalidAmplitude(format!(
            "no rule for derivatives of order {s}"
        )));
    }
    let dim = grid.dim();
    let class = a.class();
    let (m, rho, p) = (class.order(), class.rho(), class.p);
    let xs: Vec<[f64; 2]> = grid.points().collect();
    let mut value = 0.0f64;
    let mut worst_xi = probes.first().cloned().unwrap_or_default();
    let mut fd = false;
    let mut samples = 0;
    let mut vals = vec![num_complex::Complex64::new(0.0, 0.0); xs.len()];
    for xi in probes {
        if xi.len() != dim {
            return Err(FioError::InvalidAmplitude("probe dimension mismatch".into()));
        }
        if a.singular_at_origin() && norm(xi) == 0.0 {
            return Err(FioError::SingularProbe(format!("{} is singular at ξ = 0", a.name())));
        }
        samples += 1;
        for order in 0..=s {
            let weight = japanese(xi).powf(rho * order as f64 - m);
            for alpha in diff::multi_indices(dim, order) {
                for (slot, x) in vals.iter_mut().zip(&xs) {
                    let (v, analytic) = a.xi_derivative(&x[..dim], xi, &alpha);
                    fd |= !analytic;
                    *slot = v;
                }
                let v = weight * lp_norm_values(&vals, grid.cell_measure(), p)?;
                if !v.is_finite() {
                    return Err(FioError::NonFinite { index: samples - 1 });
                }
                if v > value {
                    value = v;
                    worst_xi = xi.clone();
                }
            }
        }
    }
    Ok(SeminormEstimate {
        order: s,
        value,
        samples,
        worst_xi,
        finite_differences: fd,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::{bump, SymbolClass};
    use num_complex::Complex64;

    #[test]
    fn weight_cancels_for_bessel_times_bump() {
        let m = -1.5;
        let a = Amplitude::linear("b", 1, SymbolClass::linear(f64::INFINITY, m, 1.0), move |x, xi| {
            Complex64::new(japanese(xi).powf(m) * bump(x[0]), 0.0)
        })
        .unwrap();
        let g = GridSpec::new(1, 2.0, 64).unwrap();
        let est = seminorm_estimate(&a, 0, &g, &frequency_probes(1, 64.0, true)).unwrap();
        assert!((est.value - 1.0).abs() < 1e-9);
        assert!(!est.finite_differences);
    }

    #[test]
    fn zero_amplitude_has_zero_seminorm() {
        let a = Amplitude::linear("0", 2, SymbolClass::linear(2.0, 0.0, 1.0), |_, _| {
            Complex64::new(0.0, 0.0)
        })
        .unwrap();
        let g = GridSpec::new(2, 2.0, 16).unwrap();
        let est = seminorm_estimate(&a, 2, &g, &frequency_probes(2, 8.0, true)).unwrap();
        assert_eq!(est.value, 0.0);
    }

    #[test]
    fn singular_origin_probe_is_rejected() {
        let a = Amplitude::linear("s", 1, SymbolClass::linear(2.0, 0.0, 1.0), |_, xi| {
            Complex64::new(xi[0].abs(), 0.0)
        })
        .unwrap()
        .with_singular_origin(true);
        let g = GridSpec::new(1, 2.0, 16).unwrap();
        assert!(matches!(
            seminorm_estimate(&a, 0, &g, &frequency_probes(1, 4.0, true)),
            Err(FioError::SingularProbe(_))
        ));
        assert!(seminorm_estimate(&a, 0, &g, &frequency_probes(1, 4.0, false)).is_ok());
    }
}
