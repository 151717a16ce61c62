//! Amplitudes, phases, class verification and the builtin catalog.

mod bump;
mod catalog;
pub mod diff;
mod phase_check;
mod seminorm;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{FioError, Result};

pub use bump::{bump, smooth_step};
pub use catalog::{catalog, catalog_names, CatalogEntry, CatalogItem};
pub use phase_check::{verify_phase_class, verify_snd, PhaseClassReport, PhaseProbes, SndReport};
pub use seminorm::{frequency_probes, seminorm_estimate, SeminormEstimate};

/// `⟨ξ⟩ = (1 + |ξ|²)^{1/2}`.
pub fn japanese(xi: &[f64]) -> f64 {
    (1.0 + xi.iter().map(|v| v * v).sum::<f64>()).sqrt()
}

pub(crate) fn norm(v: &[f64]) -> f64 {
    v.iter().map(|c| c * c).sum::<f64>().sqrt()
}

/// Which family of symbol estimates an amplitude claims.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Flavor {
    Linear,
    /// One order per frequency variable.
    Product,
    /// One order for the joint frequency `(ξ₁,…,ξ_N)`.
    Joint,
    Hormander,
}

/// Declared membership `L^p S^m_ρ` (or its multilinear variants).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymbolClass {
    /// Integrability in `x`; `f64::INFINITY` for `L^∞`.
    pub p: f64,
    pub orders: Vec<f64>,
    pub rhos: Vec<f64>,
    pub flavor: Flavor,
}

impl SymbolClass {
    pub fn linear(p: f64, m: f64, rho: f64) -> Self {
        SymbolClass {
            p,
            orders: vec![m],
            rhos: vec![rho],
            flavor: Flavor::Linear,
        }
    }

    fn validate(&self, arity: usize) -> Result<()> {
        if !(self.p >= 1.0) {
            return Err(FioError::InvalidAmplitude(format!("p = {} outside [1, ∞]", self.p)));
        }
        let want = if self.flavor == Flavor::Product { arity } else { 1 };
        if self.orders.len() != want || self.rhos.len() != want {
            return Err(FioError::InvalidAmplitude(format!(
                "{:?} flavor of arity {arity} needs {want} orders and rhos",
                self.flavor
            )));
        }
        if self.rhos.iter().any(|r| !(0.0..=1.0).contains(r)) {
            return Err(FioError::InvalidAmplitude("ρ must lie in [0, 1]".into()));
        }
        if self.orders.iter().any(|m| !m.is_finite()) {
            return Err(FioError::InvalidAmplitude("orders must be finite".into()));
        }
        if arity > 1 && self.flavor == Flavor::Linear {
            return Err(FioError::InvalidAmplitude("linear flavor needs arity 1".into()));
        }
        Ok(())
    }

    /// Order `m` of a single-order class.
    pub fn order(&self) -> f64 {
        self.orders.iter().sum()
    }

    /// `ρ` of a single-order class, the smallest one otherwise.
    pub fn rho(&self) -> f64 {
        self.rhos.iter().cloned().fold(f64::INFINITY, f64::min)
    }
}

type EvalFn = dyn Fn(&[f64], &[&[f64]]) -> Complex64 + Send + Sync;
type DerivFn = dyn Fn(&[f64], &[f64], &[u32]) -> Complex64 + Send + Sync;

/// An evaluation rule `a(x, ξ₁,…,ξ_N)` with its declared class.
#[derive(Clone)]
pub struct Amplitude {
    name: String,
    dim: usize,
    arity: usize,
    class: SymbolClass,
    singular_at_origin: bool,
    eval: Arc<EvalFn>,
    derivative: Option<(u32, Arc<DerivFn>)>,
}

impl fmt::Debug for Amplitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Amplitude")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("arity", &self.arity)
            .field("class", &self.class)
            .field("singular_at_origin", &self.singular_at_origin)
            .field("analytic_order", &self.analytic_order())
            .finish()
    }
}

impl Amplitude {
    pub fn new(
        name: impl Into<String>,
        dim: usize,
        arity: usize,
        class: SymbolClass,
        eval: impl Fn(&[f64], &[&[f64]]) -> Complex64 + Send + Sync + 'static,
    ) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(FioError::InvalidAmplitude(format!("dimension {dim} not in {{1, 2}}")));
        }
        if arity == 0 {
            return Err(FioError::InvalidAmplitude("arity must be at least 1".into()));
        }
        class.validate(arity)?;
        Ok(Amplitude {
            name: name.into(),
            dim,
            arity,
            class,
            singular_at_origin: false,
            eval: Arc::new(eval),
            derivative: None,
        })
    }

    /// A linear amplitude from a rule `(x, ξ) → a`.
    pub fn linear(
        name: impl Into<String>,
        dim: usize,
        class: SymbolClass,
        eval: impl Fn(&[f64], &[f64]) -> Complex64 + Send + Sync + 'static,
    ) -> Result<Self> {
        Amplitude::new(name, dim, 1, class, move |x, xis| eval(x, xis[0]))
    }

    /// Attaches analytic rules `∂^α_ξ a(x, ξ)` for `|α| ≤ max_order`.
    pub fn with_derivative(
        mut self,
        max_order: u32,
        rule: impl Fn(&[f64], &[f64], &[u32]) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        self.derivative = Some((max_order, Arc::new(rule)));
        self
    }

    pub fn with_singular_origin(mut self, singular: bool) -> Self {
        self.singular_at_origin = singular;
        self
    }

    pub fn with_class(mut self, class: SymbolClass) -> Result<Self> {
        class.validate(self.arity)?;
        self.class = class;
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn class(&self) -> &SymbolClass {
        &self.class
    }

    pub fn singular_at_origin(&self) -> bool {
        self.singular_at_origin
    }

    /// Highest order with an analytic ξ-derivative rule, if any.
    pub fn analytic_order(&self) -> Option<u32> {
        self.derivative.as_ref().map(|d| d.0)
    }

    pub fn eval(&self, x: &[f64], xis: &[&[f64]]) -> Complex64 {
        (self.eval)(x, xis)
    }

    /// Evaluation of an arity-1 amplitude.
    pub fn eval1(&self, x: &[f64], xi: &[f64]) -> Complex64 {
        (self.eval)(x, &[xi])
    }

    /// `∂^α_ξ a(x, ξ)` of an arity-1 amplitude and whether it came from an
    /// analytic rule.
    pub fn xi_derivative(&self, x: &[f64], xi: &[f64], alpha: &[u32]) -> (Complex64, bool) {
        let order: u32 = alpha.iter().sum();
        if let Some((max, rule)) = &self.derivative {
            if order <= *max {
                return (rule(x, xi, alpha), true);
            }
        }
        let h = diff::xi_step(norm(xi));
        let steps = vec![h; xi.len()];
        (
            diff::partial(|k: &[f64]| self.eval1(x, k), xi, alpha, &steps),
            order == 0,
        )
    }

    /// Pointwise product of two arity-1 amplitudes with orders added.
    pub fn product_with(&self, other: &Amplitude) -> Result<Amplitude> {
        if self.arity != 1 || other.arity != 1 || self.dim != other.dim {
            return Err(FioError::InvalidAmplitude(
                "product needs two linear amplitudes of equal dimension".into(),
            ));
        }
        let class = SymbolClass {
            p: self.class.p.min(other.class.p),
            orders: vec![self.class.order() + other.class.order()],
            rhos: vec![self.class.rho().min(other.class.rho())],
            flavor: self.class.flavor,
        };
        let (a, b) = (self.clone(), other.clone());
        let out = Amplitude::new(
            format!("{}*{}", self.name, other.name),
            self.dim,
            1,
            class,
            move |x, xis| a.eval(x, xis) * b.eval(x, xis),
        )?;
        Ok(out.with_singular_origin(self.singular_at_origin || other.singular_at_origin))
    }

    /// `a(x, ξ)·w(ξ)` for a real frequency weight, class unchanged.
    pub fn times_weight(&self, label: &str, w: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Amplitude {
        let a = self.clone();
        Amplitude {
            name: format!("{}*{label}", self.name),
            dim: self.dim,
            arity: self.arity,
            class: self.class.clone(),
            singular_at_origin: self.singular_at_origin,
            eval: Arc::new(move |x, xis| {
                let v = w(xis[0]);
                if v == 0.0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    a.eval(x, xis) * v
                }
            }),
            derivative: None,
        }
    }
}

type PhaseFn = dyn Fn(&[f64], &[f64]) -> f64 + Send + Sync;
type GradFn = dyn Fn(&[f64], &[f64]) -> [f64; 2] + Send + Sync;
type HessFn = dyn Fn(&[f64], &[f64]) -> [[f64; 2]; 2] + Send + Sync;

/// A real phase `φ(x, ξ)` with optional analytic derivatives.
#[derive(Clone)]
pub struct Phase {
    name: String,
    dim: usize,
    eval: Arc<PhaseFn>,
    grad: Option<Arc<GradFn>>,
    hessian: Option<Arc<HessFn>>,
    homogeneous: bool,
    smooth_at_origin: bool,
    declared_k: u32,
}

impl fmt::Debug for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Phase")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("homogeneous", &self.homogeneous)
            .field("smooth_at_origin", &self.smooth_at_origin)
            .field("declared_k", &self.declared_k)
            .finish()
    }
}

/// Relative tolerance for the homogeneity check.
pub const HOMOGENEITY_TOL: f64 = 1e-9;
/// Relative tolerance between analytic and finite-difference derivatives.
pub const DERIVATIVE_TOL: f64 = 1e-5;

impl Phase {
    /// An unvalidated phase; finish with [`Phase::validate`].
    pub fn new(
        name: impl Into<String>,
        dim: usize,
        eval: impl Fn(&[f64], &[f64]) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Phase {
            name: name.into(),
            dim,
            eval: Arc::new(eval),
            grad: None,
            hessian: None,
            homogeneous: false,
            smooth_at_origin: true,
            declared_k: 2,
        }
    }

    pub fn with_grad(mut self, g: impl Fn(&[f64], &[f64]) -> [f64; 2] + Send + Sync + 'static) -> Self {
        self.grad = Some(Arc::new(g));
        self
    }

    pub fn with_mixed_hessian(mut self, h: impl Fn(&[f64], &[f64]) -> [[f64; 2]; 2] + Send + Sync + 'static) -> Self {
        self.hessian = Some(Arc::new(h));
        self
    }

    /// Declares degree-1 homogeneity in ξ; such phases are singular at the origin.
    pub fn homogeneous(mut self, yes: bool) -> Self {
        self.homogeneous = yes;
        if yes {
            self.smooth_at_origin = false;
        }
        self
    }

    pub fn smooth_at_origin(mut self, yes: bool) -> Self {
        self.smooth_at_origin = yes;
        self
    }

    pub fn declared_k(mut self, k: u32) -> Self {
        self.declared_k = k;
        self
    }

    /// Checks the homogeneity claim and the analytic derivative rules.
    pub fn validate(self) -> Result<Phase> {
        if self.dim != 1 && self.dim != 2 {
            return Err(FioError::InvalidPhase(format!(
                "dimension {} not in {{1, 2}}",
                self.dim
            )));
        }
        let probes = PhaseProbes::standard(self.dim);
        for x in &probes.xs {
            for xi in &probes.xis {
                let x = &x[..self.dim];
                let xi = &xi[..self.dim];
                let v = self.eval(x, xi);
                if !v.is_finite() {
                    return Err(FioError::InvalidPhase(format!(
                        "{} is not finite at x={x:?}, ξ={xi:?}",
                        self.name
                    )));
                }
                if self.homogeneous {
                    let xi2: Vec<f64> = xi.iter().map(|c| 2.0 * c).collect();
                    let v2 = self.eval(x, &xi2);
                    if (v2 - 2.0 * v).abs() > HOMOGENEITY_TOL * v.abs().max(1.0) {
                        return Err(FioError::InvalidPhase(format!(
                            "{} is not homogeneous of degree 1: φ(x,2ξ) = {v2}, 2φ(x,ξ) = {}",
                            self.name,
                            2.0 * v
                        )));
                    }
                }
                if let Some(g) = &self.grad {
                    let exact = g(x, xi);
                    let fd = self.fd_grad(x, xi);
                    for a in 0..self.dim {
                        if (exact[a] - fd[a]).abs() > DERIVATIVE_TOL * exact[a].abs().max(1.0) {
                            return Err(FioError::InvalidPhase(format!(
                                "{}: ξ-gradient rule disagrees with differences at x={x:?}, ξ={xi:?}",
                                self.name
                            )));
                        }
                    }
                }
                if let Some(h) = &self.hessian {
                    let exact = h(x, xi);
                    let fd = self.fd_hessian(x, xi);
                    for a in 0..self.dim {
                        for b in 0..self.dim {
                            if (exact[a][b] - fd[a][b]).abs() > DERIVATIVE_TOL * exact[a][b].abs().max(1.0) {
                                return Err(FioError::InvalidPhase(format!(
                                    "{}: mixed Hessian rule disagrees with differences at x={x:?}, ξ={xi:?}",
                                    self.name
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_homogeneous(&self) -> bool {
        self.homogeneous
    }

    pub fn is_smooth_at_origin(&self) -> bool {
        self.smooth_at_origin
    }

    pub fn k(&self) -> u32 {
        self.declared_k
    }

    pub fn eval(&self, x: &[f64], xi: &[f64]) -> f64 {
        (self.eval)(x, xi)
    }

    /// Mixed derivative `∂^α_ξ ∂^β_x φ` by finite differences.
    pub fn partial(&self, x: &[f64], xi: &[f64], alpha: &[u32], beta: &[u32]) -> f64 {
        let d = self.dim;
        let mut at = Vec::with_capacity(2 * d);
        at.extend_from_slice(&x[..d]);
        at.extend_from_slice(&xi[..d]);
        let mut order = beta[..d].to_vec();
        order.extend_from_slice(&alpha[..d]);
        let hx = 1e-3;
        let hxi = diff::xi_step(norm(&xi[..d]));
        let mut steps = vec![hx; d];
        steps.extend(std::iter::repeat_n(hxi, d));
        diff::partial(|p: &[f64]| self.eval(&p[..d], &p[d..]), &at, &order, &steps)
    }

    fn fd_grad(&self, x: &[f64], xi: &[f64]) -> [f64; 2] {
        let mut g = [0.0; 2];
        for (a, slot) in g.iter_mut().enumerate().take(self.dim) {
            let mut alpha = [0u32; 2];
            alpha[a] = 1;
            *slot = self.partial(x, xi, &alpha, &[0, 0]);
        }
        g
    }

    fn fd_hessian(&self, x: &[f64], xi: &[f64]) -> [[f64; 2]; 2] {
        let mut h = [[0.0; 2]; 2];
        for (a, row) in h.iter_mut().enumerate().take(self.dim) {
            for (b, slot) in row.iter_mut().enumerate().take(self.dim) {
                let mut alpha = [0u32; 2];
                let mut beta = [0u32; 2];
                beta[a] = 1;
                alpha[b] = 1;
                *slot = self.partial(x, xi, &alpha, &beta);
            }
        }
        h
    }

    /// `∇_ξ φ(x, ξ)`; unused components are zero.
    pub fn grad_xi(&self, x: &[f64], xi: &[f64]) -> [f64; 2] {
        match &self.grad {
            Some(g) => g(x, xi),
            None => self.fd_grad(x, xi),
        }
    }

    /// `[∂²φ/∂x_j∂ξ_k]_{jk}`.
    pub fn mixed_hessian(&self, x: &[f64], xi: &[f64]) -> [[f64; 2]; 2] {
        match &self.hessian {
            Some(h) => h(x, xi),
            None => self.fd_hessian(x, xi),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wave() -> Phase {
        Phase::new("wave", 2, |x, xi| norm(xi) + x[0] * xi[0] + x[1] * xi[1])
            .with_grad(|x, xi| {
                let r = norm(xi);
                [xi[0] / r + x[0], xi[1] / r + x[1]]
            })
            .with_mixed_hessian(|_, _| [[1.0, 0.0], [0.0, 1.0]])
            .homogeneous(true)
    }

    #[test]
    fn valid_phase_passes() {
        let p = wave().validate().unwrap();
        assert!(!p.is_smooth_at_origin());
        let g = p.grad_xi(&[0.5, 0.0], &[3.0, 4.0]);
        assert!((g[0] - 1.1).abs() < 1e-15);
    }

    #[test]
    fn wrong_gradient_is_caught() {
        let p = Phase::new("bad", 1, |x, xi| x[0] * xi[0]).with_grad(|_, xi| [xi[0], 0.0]);
        assert!(p.validate().is_err());
    }

    #[test]
    fn quadratic_phase_is_not_homogeneous() {
        let p = Phase::new("sq", 1, |_, xi| xi[0] * xi[0]).homogeneous(true);
        assert!(matches!(p.validate(), Err(FioError::InvalidPhase(_))));
    }

    #[test]
    fn class_shape_is_checked() {
        let bad = SymbolClass {
            p: 2.0,
            orders: vec![0.0],
            rhos: vec![1.0],
            flavor: Flavor::Product,
        };
        assert!(Amplitude::new("a", 1, 2, bad, |_, _| Complex64::new(1.0, 0.0)).is_err());
        let bad_p = SymbolClass::linear(0.5, 0.0, 1.0);
        assert!(Amplitude::linear("a", 1, bad_p, |_, _| Complex64::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn derivative_falls_back_to_differences() {
        let a = Amplitude::linear("jb", 1, SymbolClass::linear(f64::INFINITY, 1.0, 1.0), |_, xi| {
            Complex64::new(japanese(xi), 0.0)
        })
        .unwrap();
        let (d, analytic) = a.xi_derivative(&[0.0], &[2.0], &[1]);
        assert!(!analytic);
        assert!((d.re - 2.0 / 5f64.sqrt()).abs() < 1e-9);
    }
}
