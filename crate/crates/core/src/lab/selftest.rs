use std::time::Instant;

use num_complex::Complex64;

use super::{run_experiment, ExperimentConfig, Report};
use crate::error::{FioError, Result};
use crate::field::{gaussian_packet, Field, GridSpec};
use crate::operators::LinearFio;
use crate::symbols::{catalog, Amplitude, CatalogEntry, SymbolClass};
use crate::thresholds::{m_arc, theorem_d_order, Ext, Rational};

/// The shipped experiment configurations, by file name.
pub const BUILTIN_CONFIGS: &[(&str, &str)] = &[
    (
        "kernel-decay-1d.toml",
        include_str!("../../configs/kernel-decay-1d.toml"),
    ),
    (
        "kernel-decay-2d.toml",
        include_str!("../../configs/kernel-decay-2d.toml"),
    ),
    (
        "coefficient-decay.toml",
        include_str!("../../configs/coefficient-decay.toml"),
    ),
    (
        "dyadic-decay-half.toml",
        include_str!("../../configs/dyadic-decay-half.toml"),
    ),
    (
        "dyadic-decay-one.toml",
        include_str!("../../configs/dyadic-decay-one.toml"),
    ),
    (
        "bilinear-consistency.toml",
        include_str!("../../configs/bilinear-consistency.toml"),
    ),
    (
        "seminorm-transfer.toml",
        include_str!("../../configs/seminorm-transfer.toml"),
    ),
    (
        "separated-multilinear.toml",
        include_str!("../../configs/separated-multilinear.toml"),
    ),
    ("decomposition.toml", include_str!("../../configs/decomposition.toml")),
    (
        "oscillatory-maximal.toml",
        include_str!("../../configs/oscillatory-maximal.toml"),
    ),
    (
        "threshold-table.toml",
        include_str!("../../configs/threshold-table.toml"),
    ),
];

pub fn builtin_config(name: &str) -> Result<ExperimentConfig> {
    let (_, text) = BUILTIN_CONFIGS
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| FioError::Config(format!("no builtin config {name}")))?;
    ExperimentConfig::from_toml(text)
}

/// One acceptance criterion with its time limit.
#[derive(Debug, Clone, Copy)]
pub struct Criterion {
    pub id: u32,
    pub name: &'static str,
    pub limit_seconds: f64,
    run: fn() -> Result<(bool, String)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionOutcome {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
    pub limit_seconds: f64,
}

impl CriterionOutcome {
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} {} {} ({:.2} s, limit {} s): {}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.seconds,
            self.limit_seconds,
            self.detail
        )
    }
}

pub fn criteria() -> Vec<Criterion> {
    vec![
        Criterion {
            id: 1,
            name: "threshold identities",
            limit_seconds: 1.0,
            run: threshold_identities,
        },
        Criterion {
            id: 2,
            name: "band-limited identity",
            limit_seconds: 1.0,
            run: band_limited_identity,
        },
        Criterion {
            id: 3,
            name: "wave-phase translation",
            limit_seconds: 1.0,
            run: wave_translation,
        },
        Criterion {
            id: 4,
            name: "low-frequency kernel decay",
            limit_seconds: 30.0,
            run: kernel_decay,
        },
        Criterion {
            id: 5,
            name: "Fourier coefficient decay",
            limit_seconds: 30.0,
            run: coefficient_decay,
        },
        Criterion {
            id: 6,
            name: "dyadic piece decay",
            limit_seconds: 120.0,
            run: dyadic_decay,
        },
        Criterion {
            id: 7,
            name: "bilinear iteration consistency",
            limit_seconds: 120.0,
            run: bilinear_consistency,
        },
        Criterion {
            id: 8,
            name: "seminorm transfer",
            limit_seconds: 120.0,
            run: seminorm_transfer,
        },
        Criterion {
            id: 9,
            name: "separated multilinear convergence",
            limit_seconds: 180.0,
            run: separated,
        },
        Criterion {
            id: 10,
            name: "decomposition invariants",
            limit_seconds: 60.0,
            run: decomposition,
        },
    ]
}

/// Runs one criterion; it passes only if its check holds within the time limit.
pub fn run_criterion(c: &Criterion) -> CriterionOutcome {
    let start = Instant::now();
    let result = (c.run)();
    let seconds = start.elapsed().as_secs_f64();
    let (ok, mut detail) = match result {
        Ok(v) => v,
        Err(e) => (false, format!("error: {e}")),
    };
    if seconds > c.limit_seconds {
        detail.push_str(&format!("; exceeded the {} s limit", c.limit_seconds));
    }
    CriterionOutcome {
        id: c.id,
        name: c.name,
        passed: ok && seconds <= c.limit_seconds,
        detail,
        seconds,
        limit_seconds: c.limit_seconds,
    }
}

pub fn run_all() -> Vec<CriterionOutcome> {
    criteria().iter().map(run_criterion).collect()
}

fn builtin_reports(names: &[&str]) -> Result<(bool, String)> {
    let reports: Vec<Report> = names
        .iter()
        .map(|n| builtin_config(n).map(|c| run_experiment(&c)))
        .collect::<Result<_>>()?;
    let ok = reports.iter().all(Report::passed);
    let detail = reports
        .iter()
        .zip(names)
        .map(|(r, n)| {
            let rules: Vec<String> = r.rules.iter().map(|x| format!("{} {}", x.name, x.detail)).collect();
            match &r.error {
                Some(e) => format!("{n}: error {e}"),
                None => format!("{n}: {}", rules.join("; ")),
            }
        })
        .collect::<Vec<_>>()
        .join(" | ");
    Ok((ok, detail))
}

fn threshold_identities() -> Result<(bool, String)> {
    let r = |a: i128| Ext::Finite(Rational::from_integer(a));
    let inf = Ext::Infinite;
    let one = Rational::from_integer(1);
    let mut failures = Vec::new();
    for n in 1..=6u32 {
        let arc = |p: &Ext<Rational>, q: &Ext<Rational>| m_arc(&one, p, q, n).map(|v| v.0);
        let half = Rational::new(n as i128 - 1, 2);
        if arc(&inf, &r(2))? + arc(&r(2), &r(2))? != Rational::from_integer(0) {
            failures.push(format!("n={n}: (∞,2) + (2,2)"));
        }
        if arc(&inf, &inf)? + arc(&inf, &r(2))? != -half {
            failures.push(format!("n={n}: (∞,∞) + (∞,2)"));
        }
        if arc(&inf, &inf)? + arc(&inf, &r(1))? != Rational::from_integer(1 - n as i128) {
            failures.push(format!("n={n}: (∞,∞) + (∞,1)"));
        }
        for arity in 2..=4 {
            if theorem_d_order(&vec![r(2); arity], n)? != Rational::from_integer(0) {
                failures.push(format!("n={n}: multilinear order at q = 2, N = {arity}"));
            }
        }
    }
    Ok((
        failures.is_empty(),
        if failures.is_empty() {
            "all four identities exact for n = 1..6".into()
        } else {
            failures.join(", ")
        },
    ))
}

fn unit(dim: usize) -> Result<Amplitude> {
    Amplitude::linear("1", dim, SymbolClass::linear(f64::INFINITY, 0.0, 1.0), |_, _| {
        Complex64::new(1.0, 0.0)
    })
}

fn band_limited_identity() -> Result<(bool, String)> {
    let g = GridSpec::new(1, 16.0, 512)?;
    let u = gaussian_packet(&g, &[0.7], 1.5, &[2.0])?;
    let phi = catalog(&CatalogEntry::LinearPhase, 1)?.into_phase()?;
    let out = LinearFio::new(unit(1)?, phi, g, false)?.apply(&u)?;
    let err = out.sub(&u)?.l2_norm() / u.l2_norm();
    Ok((err <= 1e-9, format!("relative L² error {err:.3e}, allowed 1e-9")))
}

fn wave_translation() -> Result<(bool, String)> {
    let g = GridSpec::new(1, 20.0, 512)?;
    let (sigma, carrier) = (2.0, 6.0);
    let u = gaussian_packet(&g, &[0.0], sigma, &[carrier])?;
    let phi = catalog(&CatalogEntry::Wave, 1)?.into_phase()?;
    let out = LinearFio::new(unit(1)?, phi, g, true)?.apply(&u)?;
    let peak = u.values().iter().map(|v| v.norm()).fold(0.0, f64::max);
    let shifted = Field::from_fn(g, |x| {
        let y = x[0] + 1.0;
        Complex64::from_polar(peak * (-y * y / (2.0 * sigma * sigma)).exp(), carrier * y)
    })?;
    let err = out.sub(&shifted)?.l2_norm() / u.l2_norm();
    Ok((err <= 1e-6, format!("‖Tu − u(·+1)‖₂/‖u‖₂ = {err:.3e}, allowed 1e-6")))
}

fn kernel_decay() -> Result<(bool, String)> {
    builtin_reports(&["kernel-decay-1d.toml", "kernel-decay-2d.toml"])
}

fn coefficient_decay() -> Result<(bool, String)> {
    builtin_reports(&["coefficient-decay.toml"])
}

fn dyadic_decay() -> Result<(bool, String)> {
    builtin_reports(&["dyadic-decay-half.toml", "dyadic-decay-one.toml"])
}

fn bilinear_consistency() -> Result<(bool, String)> {
    builtin_reports(&["bilinear-consistency.toml"])
}

fn seminorm_transfer() -> Result<(bool, String)> {
    builtin_reports(&["seminorm-transfer.toml"])
}

fn separated() -> Result<(bool, String)> {
    builtin_reports(&["separated-multilinear.toml"])
}

fn decomposition() -> Result<(bool, String)> {
    builtin_reports(&["decomposition.toml"])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_configs_parse() {
        for (name, _) in BUILTIN_CONFIGS {
            builtin_config(name).unwrap();
        }
        assert!(builtin_config("missing.toml").is_err());
    }

    #[test]
    fn ids_are_one_through_ten() {
        let ids: Vec<u32> = criteria().iter().map(|c| c.id).collect();
        assert_eq!(ids, (1..=10).collect::<Vec<_>>());
    }

    #[test]
    fn fast_criteria_pass() {
        for c in criteria().iter().filter(|c| c.id <= 3) {
            let o = run_criterion(c);
            assert!(o.passed, "{}", o.line());
        }
    }
}
