use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use super::linear::LinearFio;
use super::{active_set, cell_weight, check_input, finite_field, ActiveSet};
use crate::decomp::SND_FLOOR;
use crate::error::{FioError, Result};
use crate::field::{fourier_transform, Field, GridSpec};
use crate::symbols::{
    seminorm_estimate, verify_snd, Amplitude, Flavor, Phase, PhaseProbes, SeminormEstimate, SymbolClass,
};

/// Default ceiling on complex multiply-adds for direct quadrature.
pub const DEFAULT_BUDGET: f64 = 2e9;

/// `T_a(f₁,…,f_N)(x) = (2π)^{−Nn} Σ e^{iΣφ_l(x,ξ_l)} a(x, ξ₁,…,ξ_N) Π f̂_l(ξ_l) Δξ^{Nn}`.
#[derive(Debug, Clone)]
pub struct MultilinearFio {
    pub(super) amplitude: Amplitude,
    pub(super) phases: Vec<Phase>,
    pub(super) grid: GridSpec,
    pub(super) low_freq_cut: bool,
}

impl MultilinearFio {
    pub fn new(amplitude: Amplitude, phases: Vec<Phase>, grid: GridSpec, low_freq_cut: bool) -> Result<Self> {
        if phases.len() != amplitude.arity() {
            return Err(FioError::InvalidAmplitude(format!(
                "{} has arity {} but {} phases were given",
                amplitude.name(),
                amplitude.arity(),
                phases.len()
            )));
        }
        if !(2..=3).contains(&phases.len()) {
            return Err(FioError::InvalidAmplitude(
                "multilinear operators have arity 2 or 3".into(),
            ));
        }
        if amplitude.dim() != grid.dim() || phases.iter().any(|p| p.dim() != grid.dim()) {
            return Err(FioError::GridMismatch);
        }
        let probes = PhaseProbes::standard(grid.dim());
        for p in &phases {
            let snd = verify_snd(p, &probes, SND_FLOOR);
            if !snd.ok {
                return Err(FioError::InvalidPhase(format!(
                    "{} fails strong non-degeneracy (min |det| = {:e})",
                    p.name(),
                    snd.min_det
                )));
            }
        }
        Ok(MultilinearFio {
            amplitude,
            phases,
            grid,
            low_freq_cut,
        })
    }

    pub fn amplitude(&self) -> &Amplitude {
        &self.amplitude
    }

    pub fn phases(&self) -> &[Phase] {
        &self.phases
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn arity(&self) -> usize {
        self.phases.len()
    }

    /// Multiply-adds of direct bilinear quadrature: `|grid|³`.
    pub fn direct_work(&self) -> f64 {
        (self.grid.len() as f64).powi(3)
    }

    fn spectrum(&self, l: usize, f: &Field) -> Result<ActiveSet> {
        check_input(&self.grid, f)?;
        active_set(
            &self.grid,
            &self.phases[l],
            fourier_transform(f).coefficients(),
            self.low_freq_cut,
        )
    }

    /// `e^{iφ_l(x, ξ)} f̂_l(ξ) (2π)^{−n} Δξ^n` over the active set at `x`.
    fn modulated(&self, l: usize, set: &ActiveSet, x: &[f64]) -> Vec<Complex64> {
        let dim = self.grid.dim();
        let scale = cell_weight(&self.grid);
        (0..set.index.len())
            .map(|k| Complex64::from_polar(scale, self.phases[l].eval(x, &set.phase_xi[k][..dim])) * set.coeff[k])
            .collect()
    }

    /// Direct double quadrature; refused above `budget` multiply-adds
    /// (default [`DEFAULT_BUDGET`]).
    pub fn apply_bilinear(&self, f: &Field, g: &Field, budget: Option<f64>) -> Result<Field> {
        if self.arity() != 2 {
            return Err(FioError::InvalidAmplitude("direct quadrature is bilinear only".into()));
        }
        let budget = budget.unwrap_or(DEFAULT_BUDGET);
        if self.direct_work() > budget {
            return Err(FioError::Budget {
                work: self.direct_work(),
                budget,
            });
        }
        let dim = self.grid.dim();
        let sf = self.spectrum(0, f)?;
        let sg = self.spectrum(1, g)?;
        let values: Vec<Complex64> = (0..self.grid.len())
            .into_par_iter()
            .map(|i| {
                let x = self.grid.point(i);
                let x = &x[..dim];
                let u = self.modulated(0, &sf, x);
                let v = self.modulated(1, &sg, x);
                let mut acc = Complex64::new(0.0, 0.0);
                for (a, xi) in sf.xi.iter().enumerate() {
                    let mut inner = Complex64::new(0.0, 0.0);
                    for (b, eta) in sg.xi.iter().enumerate() {
                        inner += self.amplitude.eval(x, &[&xi[..dim], &eta[..dim]]) * v[b];
                    }
                    acc += inner * u[a];
                }
                acc
            })
            .collect();
        finite_field(self.grid, values)
    }

    /// Freezes `f` into `ã(x, η) = (2π)^{−n} Σ_ξ e^{iφ₁(x,ξ)} a(x, ξ, η) f̂(ξ) Δξ^n`,
    /// tabulated on the grid and declared in `L^{r₂} S^{m₂}_{ρ₂}` with
    /// `1/r₂ = 1/p + 1/q₁`.
    pub fn reduce_bilinear(&self, f: &Field, q1: f64, budget: Option<f64>) -> Result<ReducedBilinear> {
        if self.arity() != 2 {
            return Err(FioError::InvalidAmplitude("reduction is bilinear only".into()));
        }
        if !(q1 >= 1.0) {
            return Err(FioError::InvalidExponent(format!("q₁ = {q1} outside [1, ∞]")));
        }
        let budget = budget.unwrap_or(DEFAULT_BUDGET);
        if self.direct_work() > budget {
            return Err(FioError::Budget {
                work: self.direct_work(),
                budget,
            });
        }
        let class = self.amplitude.class();
        let (m2, rho2) = match class.flavor {
            Flavor::Product => (class.orders[1], class.rhos[1]),
            _ => (class.orders[0], class.rhos[0]),
        };
        let r2 = 1.0 / (1.0 / class.p + 1.0 / q1);
        let dim = self.grid.dim();
        let set = self.spectrum(0, f)?;
        let etas: Vec<[f64; 2]> = self.grid.frequencies().collect();
        let table: Vec<Complex64> = (0..self.grid.len())
            .into_par_iter()
            .flat_map_iter(|i| {
                let x = self.grid.point(i);
                let u = self.modulated(0, &set, &x[..dim]);
                let set = &set;
                let etas = &etas;
                let amp = &self.amplitude;
                etas.iter().map(move |eta| {
                    set.xi
                        .iter()
                        .zip(&u)
                        .map(|(xi, w)| amp.eval(&x[..dim], &[&xi[..dim], &eta[..dim]]) * w)
                        .sum::<Complex64>()
                })
            })
            .collect();
        if let Some(index) = table.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(FioError::NonFinite {
                index: index / self.grid.len(),
            });
        }
        let rule = TildeRule {
            op: self.clone(),
            set: Arc::new(set),
            table: Arc::new(table),
        };
        let amplitude = Amplitude::linear(
            format!("{}|f", self.amplitude.name()),
            dim,
            SymbolClass::linear(r2, m2, rho2),
            move |x, eta| rule.eval(x, eta),
        )?;
        Ok(ReducedBilinear {
            amplitude,
            phase: self.phases[1].clone(),
            grid: self.grid,
            low_freq_cut: self.low_freq_cut,
            r2,
        })
    }
}

struct TildeRule {
    op: MultilinearFio,
    set: Arc<ActiveSet>,
    table: Arc<Vec<Complex64>>,
}

impl TildeRule {
    fn eval(&self, x: &[f64], eta: &[f64]) -> Complex64 {
        let grid = &self.op.grid;
        if let (Some(i), Some(k)) = (grid.index_of_point(x), grid.index_of_frequency(eta)) {
            return self.table[i * grid.len() + k];
        }
        let u = self.op.modulated(0, &self.set, x);
        let dim = grid.dim();
        self.set
            .xi
            .iter()
            .zip(&u)
            .map(|(xi, w)| self.op.amplitude.eval(x, &[&xi[..dim], eta]) * w)
            .sum()
    }
}

/// `ã` from [`MultilinearFio::reduce_bilinear`] with the second phase.
#[derive(Debug, Clone)]
pub struct ReducedBilinear {
    amplitude: Amplitude,
    phase: Phase,
    grid: GridSpec,
    low_freq_cut: bool,
    r2: f64,
}

impl ReducedBilinear {
    pub fn amplitude(&self) -> &Amplitude {
        &self.amplitude
    }

    /// The integrability exponent `r₂` of `ã`.
    pub fn r2(&self) -> f64 {
        self.r2
    }

    /// `T_{ã, φ₂} g`, which reproduces `T_a(f, g)`.
    pub fn apply(&self, g: &Field) -> Result<Field> {
        LinearFio::new(self.amplitude.clone(), self.phase.clone(), self.grid, self.low_freq_cut)?.apply(g)
    }

    /// Measured `|ã|_{r₂, m₂, s}` over the frequency probes.
    pub fn seminorm(&self, s: u32, probes: &[Vec<f64>]) -> Result<SeminormEstimate> {
        seminorm_estimate(&self.amplitude, s, &self.grid, probes)
    }
}
