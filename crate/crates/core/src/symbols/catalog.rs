use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{bump, japanese, norm, smooth_step, Amplitude, Flavor, Phase, SymbolClass};
use crate::error::{FioError, Result};

fn default_one() -> f64 {
    1.0
}

fn default_p() -> f64 {
    2.0
}

/// Names and parameters of the builtin amplitudes and phases.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum CatalogEntry {
    /// `⟨ξ⟩^m e^{i(⟨ξ⟩^{1−ρ} − 1)}`, optionally times the bump `ψ(x)`.
    Hormander {
        m: f64,
        rho: f64,
        #[serde(default)]
        localized: bool,
    },
    /// `e^{iξ log|x|} ψ(x)` on the line, declared in `L^p S^0_0`.
    RoughLog {
        #[serde(default = "default_p")]
        p: f64,
    },
    /// Bilinear `e^{i t^α |ζ|^α} |ζ|^{−β} θ(tζ)` with `ζ = (ξ, η)`.
    Oscillatory {
        alpha: f64,
        beta: f64,
        #[serde(default = "default_one")]
        t: f64,
    },
    /// `e^{−|x|²/2} (1 − |ξ|²/R²)_+^power`.
    CompactPower { radius: f64, power: u32 },
    /// Bilinear `(1 + c(x)|ξ|² + |η|²)^{m/2}` with `c(x) = 1 + cos(x₁)/2`.
    JointBessel { m: f64 },
    /// `a₁(x, ξ₁) ⋯ a_N(x, ξ_N)` from linear factors.
    Product { factors: Vec<CatalogEntry> },
    /// `|ξ| + ⟨x, ξ⟩`.
    Wave,
    /// `|ξ|² + ⟨x, ξ⟩`.
    Schrodinger,
    /// `ξ³ + xξ` on the line.
    Kdv,
    /// `⟨ξ⟩ + ⟨x, ξ⟩`.
    KleinGordon,
    /// `⟨x, ξ⟩`.
    LinearPhase,
    /// `⟨x, Aξ⟩`.
    LinearMap { matrix: [[f64; 2]; 2] },
    /// `⟨x, ξ⟩ + (1 + ε sin x₁)|ξ|`.
    VariableWave { epsilon: f64 },
}

/// A catalog lookup result.
#[derive(Debug, Clone)]
pub enum CatalogItem {
    Amplitude(Amplitude),
    Phase(Phase),
}

impl CatalogItem {
    pub fn into_amplitude(self) -> Result<Amplitude> {
        match self {
            CatalogItem::Amplitude(a) => Ok(a),
            CatalogItem::Phase(p) => Err(FioError::UnknownCatalog(format!(
                "{} is a phase, not an amplitude",
                p.name()
            ))),
        }
    }

    pub fn into_phase(self) -> Result<Phase> {
        match self {
            CatalogItem::Phase(p) => Ok(p),
            CatalogItem::Amplitude(a) => Err(FioError::UnknownCatalog(format!(
                "{} is an amplitude, not a phase",
                a.name()
            ))),
        }
    }
}

/// Every catalog name with a one-line description.
pub fn catalog_names() -> Vec<(&'static str, &'static str)> {
    vec![
        ("hormander", "amplitude ⟨ξ⟩^m e^{i(⟨ξ⟩^{1−ρ}−1)} [m, rho, localized]"),
        ("rough-log", "amplitude e^{iξ log|x|} ψ(x) on the line [p]"),
        (
            "oscillatory",
            "bilinear amplitude e^{i t^α|ζ|^α}|ζ|^{−β}θ(tζ) [alpha, beta, t]",
        ),
        ("compact-power", "amplitude e^{−|x|²/2}(1−|ξ|²/R²)_+^k [radius, power]"),
        ("joint-bessel", "bilinear amplitude (1 + c(x)|ξ|² + |η|²)^{m/2} [m]"),
        ("product", "multilinear amplitude ∏ a_j(x, ξ_j) [factors]"),
        ("wave", "phase |ξ| + ⟨x,ξ⟩"),
        ("schrodinger", "phase |ξ|² + ⟨x,ξ⟩"),
        ("kdv", "phase ξ³ + xξ (n = 1)"),
        ("klein-gordon", "phase ⟨ξ⟩ + ⟨x,ξ⟩"),
        ("linear-phase", "phase ⟨x,ξ⟩"),
        ("linear-map", "phase ⟨x, Aξ⟩ [matrix]"),
        ("variable-wave", "phase ⟨x,ξ⟩ + (1 + ε sin x₁)|ξ| [epsilon]"),
    ]
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(u, v)| u * v).sum()
}

fn hormander(dim: usize, m: f64, rho: f64, localized: bool) -> Result<Amplitude> {
    if !(0.0..=1.0).contains(&rho) {
        return Err(FioError::InvalidAmplitude(format!("ρ = {rho} outside [0, 1]")));
    }
    let a = Amplitude::linear(
        format!("hormander(m={m},rho={rho})"),
        dim,
        SymbolClass {
            p: f64::INFINITY,
            orders: vec![m],
            rhos: vec![rho],
            flavor: Flavor::Hormander,
        },
        move |x, xi| {
            let j = japanese(xi);
            let loc = if localized { bump(norm(x) / 2.0) } else { 1.0 };
            Complex64::from_polar(loc * j.powf(m), j.powf(1.0 - rho) - 1.0)
        },
    )?;
    if rho == 1.0 && !localized {
        // ⟨ξ⟩^m has the closed-form gradient m ⟨ξ⟩^{m−2} ξ.
        return Ok(a.with_derivative(1, move |_, xi, alpha| {
            let j = japanese(xi);
            match alpha.iter().position(|&a| a == 1) {
                None => Complex64::new(j.powf(m), 0.0),
                Some(k) => Complex64::new(m * j.powf(m - 2.0) * xi[k], 0.0),
            }
        }));
    }
    Ok(a)
}

fn rough_log(dim: usize, p: f64) -> Result<Amplitude> {
    if dim != 1 {
        return Err(FioError::InvalidAmplitude("rough-log is defined on the line".into()));
    }
    let rule = |x: &[f64]| {
        let x = x[0].abs();
        if x == 0.0 {
            None
        } else {
            Some(x.ln())
        }
    };
    let a = Amplitude::linear(
        "rough-log",
        1,
        SymbolClass::linear(p, 0.0, 0.0),
        move |x, xi| match rule(x) {
            None => Complex64::new(0.0, 0.0),
            Some(l) => Complex64::from_polar(bump(x[0]), xi[0] * l),
        },
    )?;
    Ok(a.with_derivative(u32::MAX, move |x, xi, alpha| match rule(x) {
        None => Complex64::new(0.0, 0.0),
        Some(l) => Complex64::new(0.0, l).powu(alpha[0]) * Complex64::from_polar(bump(x[0]), xi[0] * l),
    }))
}

fn oscillatory(dim: usize, alpha: f64, beta: f64, t: f64) -> Result<Amplitude> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(FioError::InvalidAmplitude(format!("α = {alpha} outside (0, 1)")));
    }
    if !(beta > 0.0) {
        return Err(FioError::InvalidAmplitude(format!("β = {beta} must be positive")));
    }
    if !(t > 0.0 && t <= 1.0) {
        return Err(FioError::InvalidAmplitude(format!("t = {t} outside (0, 1]")));
    }
    let class = SymbolClass {
        p: f64::INFINITY,
        orders: vec![-beta],
        rhos: vec![1.0 - alpha],
        flavor: Flavor::Joint,
    };
    Amplitude::new(
        format!("oscillatory(alpha={alpha},beta={beta},t={t})"),
        dim,
        2,
        class,
        move |_, xis| {
            let r = (norm(xis[0]).powi(2) + norm(xis[1]).powi(2)).sqrt();
            let cut = 1.0 - smooth_step(t * r);
            if cut == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            Complex64::from_polar(cut * r.powf(-beta), (t * r).powf(alpha))
        },
    )
}

fn compact_power(dim: usize, radius: f64, power: u32) -> Result<Amplitude> {
    if !(radius > 0.0) {
        return Err(FioError::InvalidAmplitude(format!("radius {radius} must be positive")));
    }
    Amplitude::linear(
        format!("compact-power(R={radius},k={power})"),
        dim,
        SymbolClass::linear(f64::INFINITY, 0.0, 1.0),
        move |x, xi| {
            let s = 1.0 - dot(xi, xi) / (radius * radius);
            if s <= 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            Complex64::new((-dot(x, x) / 2.0).exp() * s.powi(power as i32), 0.0)
        },
    )
}

fn joint_bessel(dim: usize, m: f64) -> Result<Amplitude> {
    let class = SymbolClass {
        p: f64::INFINITY,
        orders: vec![m],
        rhos: vec![1.0],
        flavor: Flavor::Joint,
    };
    Amplitude::new(format!("joint-bessel(m={m})"), dim, 2, class, move |x, xis| {
        let c = 1.0 + 0.5 * x[0].cos();
        Complex64::new((1.0 + c * dot(xis[0], xis[0]) + dot(xis[1], xis[1])).powf(m / 2.0), 0.0)
    })
}

fn product(dim: usize, factors: &[CatalogEntry]) -> Result<Amplitude> {
    if factors.is_empty() {
        return Err(FioError::InvalidAmplitude("product needs at least one factor".into()));
    }
    let parts = factors
        .iter()
        .map(|f| catalog(f, dim)?.into_amplitude())
        .collect::<Result<Vec<_>>>()?;
    if parts.iter().any(|a| a.arity() != 1) {
        return Err(FioError::InvalidAmplitude(
            "product factors must be linear amplitudes".into(),
        ));
    }
    let class = SymbolClass {
        p: parts.iter().map(|a| a.class().p).fold(f64::INFINITY, f64::min),
        orders: parts.iter().map(|a| a.class().order()).collect(),
        rhos: parts.iter().map(|a| a.class().rho()).collect(),
        flavor: Flavor::Product,
    };
    let name = format!(
        "product({})",
        parts.iter().map(|a| a.name().to_string()).collect::<Vec<_>>().join(",")
    );
    let singular = parts.iter().any(|a| a.singular_at_origin());
    let n = parts.len();
    let a = Amplitude::new(name, dim, n, class, move |x, xis| {
        parts.iter().zip(xis).map(|(a, xi)| a.eval1(x, xi)).product()
    })?;
    Ok(a.with_singular_origin(singular))
}

fn wave(dim: usize) -> Phase {
    Phase::new("wave", dim, |x, xi| norm(xi) + dot(x, xi))
        .with_grad(|x, xi| {
            let r = norm(xi);
            let mut g = [0.0; 2];
            for (k, slot) in g.iter_mut().enumerate().take(xi.len()) {
                *slot = xi[k] / r + x[k];
            }
            g
        })
        .with_mixed_hessian(|_, _| [[1.0, 0.0], [0.0, 1.0]])
        .homogeneous(true)
        .declared_k(2)
}

fn linear_map(dim: usize, a: [[f64; 2]; 2]) -> Phase {
    Phase::new("linear-map", dim, move |x, xi| {
        let mut s = 0.0;
        for j in 0..x.len() {
            for k in 0..xi.len() {
                s += x[j] * a[j][k] * xi[k];
            }
        }
        s
    })
    .with_mixed_hessian(move |_, _| a)
    .homogeneous(true)
    .smooth_at_origin(true)
    .declared_k(1)
}

/// Builds a catalog member on `ℝ^dim`.
pub fn catalog(entry: &CatalogEntry, dim: usize) -> Result<CatalogItem> {
    if dim != 1 && dim != 2 {
        return Err(FioError::InvalidAmplitude(format!("dimension {dim} not in {{1, 2}}")));
    }
    let item = match entry {
        CatalogEntry::Hormander { m, rho, localized } => CatalogItem::Amplitude(hormander(dim, *m, *rho, *localized)?),
        CatalogEntry::RoughLog { p } => CatalogItem::Amplitude(rough_log(dim, *p)?),
        CatalogEntry::Oscillatory { alpha, beta, t } => CatalogItem::Amplitude(oscillatory(dim, *alpha, *beta, *t)?),
        CatalogEntry::CompactPower { radius, power } => CatalogItem::Amplitude(compact_power(dim, *radius, *power)?),
        CatalogEntry::JointBessel { m } => CatalogItem::Amplitude(joint_bessel(dim, *m)?),
        CatalogEntry::Product { factors } => CatalogItem::Amplitude(product(dim, factors)?),
        CatalogEntry::Wave => CatalogItem::Phase(wave(dim).validate()?),
        CatalogEntry::Schrodinger => CatalogItem::Phase(
            Phase::new("schrodinger", dim, |x, xi| dot(xi, xi) + dot(x, xi))
                .with_grad(|x, xi| {
                    let mut g = [0.0; 2];
                    for (k, slot) in g.iter_mut().enumerate().take(xi.len()) {
                        *slot = 2.0 * xi[k] + x[k];
                    }
                    g
                })
                .with_mixed_hessian(|_, _| [[1.0, 0.0], [0.0, 1.0]])
                .validate()?,
        ),
        CatalogEntry::Kdv => {
            if dim != 1 {
                return Err(FioError::InvalidPhase("kdv is defined on the line".into()));
            }
            CatalogItem::Phase(
                Phase::new("kdv", 1, |x, xi| xi[0].powi(3) + x[0] * xi[0])
                    .with_grad(|x, xi| [3.0 * xi[0] * xi[0] + x[0], 0.0])
                    .with_mixed_hessian(|_, _| [[1.0, 0.0], [0.0, 0.0]])
                    .validate()?,
            )
        }
        CatalogEntry::KleinGordon => CatalogItem::Phase(
            Phase::new("klein-gordon", dim, |x, xi| japanese(xi) + dot(x, xi))
                .with_mixed_hessian(|_, _| [[1.0, 0.0], [0.0, 1.0]])
                .validate()?,
        ),
        CatalogEntry::LinearPhase => CatalogItem::Phase(
            Phase::new("linear-phase", dim, dot)
                .with_grad(|x, _| {
                    let mut g = [0.0; 2];
                    g[..x.len()].copy_from_slice(x);
                    g
                })
                .with_mixed_hessian(|_, _| [[1.0, 0.0], [0.0, 1.0]])
                .homogeneous(true)
                .smooth_at_origin(true)
                .declared_k(1)
                .validate()?,
        ),
        CatalogEntry::LinearMap { matrix } => CatalogItem::Phase(linear_map(dim, *matrix).validate()?),
        CatalogEntry::VariableWave { epsilon } => {
            let e = *epsilon;
            CatalogItem::Phase(
                Phase::new("variable-wave", dim, move |x, xi| {
                    dot(x, xi) + (1.0 + e * x[0].sin()) * norm(xi)
                })
                .with_mixed_hessian(move |x, xi| {
                    let r = norm(xi);
                    let mut h = [[1.0, 0.0], [0.0, 1.0]];
                    for k in 0..xi.len() {
                        h[0][k] += e * x[0].cos() * xi[k] / r;
                    }
                    h
                })
                .homogeneous(true)
                .declared_k(2)
                .validate()?,
            )
        }
    };
    Ok(item)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::{verify_phase_class, verify_snd, PhaseProbes};

    #[test]
    fn oscillatory_declares_its_class() {
        let a = catalog(
            &CatalogEntry::Oscillatory {
                alpha: 0.5,
                beta: 2.0,
                t: 1.0,
            },
            1,
        )
        .unwrap()
        .into_amplitude()
        .unwrap();
        assert_eq!(a.arity(), 2);
        assert_eq!(a.class().orders, vec![-2.0]);
        assert_eq!(a.class().rhos, vec![0.5]);
        assert_eq!(a.class().p, f64::INFINITY);
        assert_eq!(a.eval(&[0.0], &[&[0.1], &[0.2]]), Complex64::new(0.0, 0.0));
        assert!(catalog(
            &CatalogEntry::Oscillatory {
                alpha: 1.0,
                beta: 2.0,
                t: 1.0
            },
            1
        )
        .is_err());
        assert!(catalog(
            &CatalogEntry::Oscillatory {
                alpha: 0.5,
                beta: 0.0,
                t: 1.0
            },
            1
        )
        .is_err());
    }

    #[test]
    fn wave_is_snd_and_in_phi2() {
        let w = catalog(&CatalogEntry::Wave, 2).unwrap().into_phase().unwrap();
        let probes = PhaseProbes::standard(2);
        assert!(verify_snd(&w, &probes, 0.5).ok);
        let r = verify_phase_class(&w, 2, 3, &probes).unwrap();
        assert!(r.ok, "{r:?}");
    }

    #[test]
    fn linear_map_determinant() {
        let p = catalog(
            &CatalogEntry::LinearMap {
                matrix: [[0.5, 0.0], [0.0, 1.0]],
            },
            2,
        )
        .unwrap()
        .into_phase()
        .unwrap();
        let r = verify_snd(&p, &PhaseProbes::standard(2), 0.1);
        assert!((r.min_det - 0.5).abs() < 1e-12);
    }

    #[test]
    fn product_has_product_flavor() {
        let entry = CatalogEntry::Product {
            factors: vec![
                CatalogEntry::Hormander {
                    m: -1.0,
                    rho: 1.0,
                    localized: false,
                },
                CatalogEntry::Hormander {
                    m: -0.5,
                    rho: 1.0,
                    localized: false,
                },
            ],
        };
        let a = catalog(&entry, 1).unwrap().into_amplitude().unwrap();
        assert_eq!(a.arity(), 2);
        assert_eq!(a.class().flavor, Flavor::Product);
        assert_eq!(a.class().orders, vec![-1.0, -0.5]);
        let v = a.eval(&[0.0], &[&[1.0], &[3.0]]);
        assert!((v.re - 2f64.powf(-0.5) * 10f64.powf(-0.25)).abs() < 1e-14);
    }

    #[test]
    fn hormander_order_zero_is_one() {
        let a = catalog(
            &CatalogEntry::Hormander {
                m: 0.0,
                rho: 1.0,
                localized: false,
            },
            2,
        )
        .unwrap()
        .into_amplitude()
        .unwrap();
        assert_eq!(a.eval1(&[0.3, 0.1], &[5.0, -2.0]), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn kinds_do_not_mix() {
        assert!(catalog(&CatalogEntry::Wave, 1).unwrap().into_amplitude().is_err());
        assert!(catalog(&CatalogEntry::Kdv, 2).is_err());
    }

    #[test]
    fn entries_deserialize_from_toml() {
        let e: CatalogEntry = toml::from_str("name = \"hormander\"\nm = -1.0\nrho = 1.0").unwrap();
        assert_eq!(
            e,
            CatalogEntry::Hormander {
                m: -1.0,
                rho: 1.0,
                localized: false
            }
        );
        let bad: std::result::Result<CatalogEntry, _> = toml::from_str("name = \"nope\"");
        assert!(bad.is_err());
    }
}
