use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{FioError, Result};
use crate::field::GridSpec;
use crate::symbols::{catalog, CatalogEntry, CatalogItem};
use crate::thresholds::parse_exponent;

use super::MIN_TRIALS;

fn default_trials() -> usize {
    MIN_TRIALS
}

fn two() -> f64 {
    2.0
}

fn yes() -> bool {
    true
}

/// One experiment with its seed, trial count and output settings.
///
/// The experiment's own keys sit at the top level next to `experiment`,
/// which names the kind.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    #[serde(flatten)]
    pub experiment: Experiment,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_trials")]
    pub trials: usize,
    /// Work budget in complex multiply-adds; the operator default when absent.
    #[serde(default)]
    pub budget: Option<f64>,
    /// Output directory for `measurements.csv` and `summary.json`.
    #[serde(default)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "experiment", rename_all = "kebab-case")]
pub enum Experiment {
    /// Per-level `L^q → L^r` lower bounds of the dyadic pieces.
    DyadicDecay {
        grid: GridSpec,
        amplitude: CatalogEntry,
        phase: CatalogEntry,
        levels: [u32; 2],
        #[serde(default = "two")]
        q: f64,
        #[serde(default = "two")]
        r: f64,
        #[serde(default = "yes")]
        low_freq_cut: bool,
        /// Allowed slack on the fitted slope above the amplitude order.
        #[serde(default = "slope_slack")]
        slope_slack: f64,
        /// Allowed factor between each level's bound and `2^{jm}`.
        #[serde(default = "two")]
        factor: f64,
    },
    /// Tail envelope of the low-frequency kernel of each reduced phase.
    KernelDecay {
        grid: GridSpec,
        phase: CatalogEntry,
        #[serde(default = "default_patches")]
        patches: usize,
        /// Points `x` at which the kernel is sampled.
        xs: Vec<Vec<f64>>,
        /// Envelope radii, log-spaced from 1 to `r_max`.
        #[serde(default = "default_radii")]
        radii: usize,
        r_max: f64,
        #[serde(default = "default_l1_ratio")]
        max_l1_ratio: f64,
    },
    /// Coefficient norms of a Fourier-series expansion by ring.
    CoefficientDecay {
        grid: GridSpec,
        amplitude: CatalogEntry,
        box_side: f64,
        k_max: usize,
        #[serde(default = "two")]
        p: f64,
        max_slope: f64,
    },
    /// Direct double quadrature against the iterated evaluation.
    BilinearConsistency {
        grid: GridSpec,
        amplitude: CatalogEntry,
        phases: [CatalogEntry; 2],
        #[serde(default = "default_pairs")]
        pairs: usize,
        #[serde(default = "two")]
        q1: f64,
        #[serde(default = "default_consistency")]
        tolerance: f64,
    },
    /// Seminorm of the reduced amplitude relative to `‖f‖_{q₁}`.
    SeminormTransfer {
        grid: GridSpec,
        amplitude: CatalogEntry,
        phases: [CatalogEntry; 2],
        #[serde(default = "default_pairs")]
        samples: usize,
        q1: f64,
        #[serde(default = "one_u32")]
        order: u32,
        #[serde(default = "default_probe_radius")]
        probe_radius: f64,
        #[serde(default = "default_spread")]
        max_spread: f64,
    },
    /// Separated evaluation against the direct bilinear quadrature.
    SeparatedMultilinear {
        grid: GridSpec,
        amplitude: CatalogEntry,
        phases: Vec<CatalogEntry>,
        k_values: Vec<usize>,
        #[serde(default)]
        torus_samples: Option<usize>,
        #[serde(default = "two")]
        min_drop: f64,
        #[serde(default)]
        khinchin_draws: usize,
    },
    /// `‖sup_t |T_{σ_t}(f, g)|‖_r` over a log-spaced `t` grid.
    OscillatoryMaximal {
        grid: GridSpec,
        alpha: f64,
        beta: f64,
        #[serde(default = "default_t_points")]
        t_points: usize,
        #[serde(default = "default_t_min")]
        t_min: f64,
        #[serde(default = "two")]
        q1: f64,
        #[serde(default = "two")]
        q2: f64,
    },
    /// Exact thresholds over a sample grid of exponents.
    ThresholdTable {
        rho: Vec<String>,
        p: Vec<String>,
        q: Vec<String>,
        n: Vec<u32>,
    },
    /// Partition, cone-cover and Φ-scaling checks.
    Decomposition {
        /// Grid for the radial partition and the Φ checks.
        lp_grid: GridSpec,
        /// Grid for the angular partitions.
        cone_grid: GridSpec,
        cone_levels: [u32; 2],
        phi_levels: [u32; 2],
    },
}

fn slope_slack() -> f64 {
    0.1
}

fn default_patches() -> usize {
    8
}

fn default_radii() -> usize {
    12
}

fn default_l1_ratio() -> f64 {
    3.0
}

fn default_pairs() -> usize {
    5
}

fn default_consistency() -> f64 {
    1e-6
}

fn one_u32() -> u32 {
    1
}

fn default_probe_radius() -> f64 {
    4.0
}

fn default_spread() -> f64 {
    3.0
}

fn default_t_points() -> usize {
    16
}

fn default_t_min() -> f64 {
    1.0 / 64.0
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Experiment::DyadicDecay { .. } => "dyadic-decay",
            Experiment::KernelDecay { .. } => "kernel-decay",
            Experiment::CoefficientDecay { .. } => "coefficient-decay",
            Experiment::BilinearConsistency { .. } => "bilinear-consistency",
            Experiment::SeminormTransfer { .. } => "seminorm-transfer",
            Experiment::SeparatedMultilinear { .. } => "separated-multilinear",
            Experiment::OscillatoryMaximal { .. } => "oscillatory-maximal",
            Experiment::ThresholdTable { .. } => "threshold-table",
            Experiment::Decomposition { .. } => "decomposition",
        }
    }

    /// The main grid, if the experiment has one.
    pub fn grid(&self) -> Option<GridSpec> {
        match self {
            Experiment::DyadicDecay { grid, .. }
            | Experiment::KernelDecay { grid, .. }
            | Experiment::CoefficientDecay { grid, .. }
            | Experiment::BilinearConsistency { grid, .. }
            | Experiment::SeminormTransfer { grid, .. }
            | Experiment::SeparatedMultilinear { grid, .. }
            | Experiment::OscillatoryMaximal { grid, .. } => Some(*grid),
            Experiment::Decomposition { lp_grid, .. } => Some(*lp_grid),
            Experiment::ThresholdTable { .. } => None,
        }
    }
}

fn config_error(e: impl std::fmt::Display) -> FioError {
    FioError::Config(e.to_string())
}

fn want_amplitude(entry: &CatalogEntry, dim: usize, arity: &[usize]) -> Result<()> {
    match catalog(entry, dim).map_err(config_error)? {
        CatalogItem::Amplitude(a) if arity.contains(&a.arity()) => Ok(()),
        CatalogItem::Amplitude(a) => Err(FioError::Config(format!(
            "{} has arity {}, expected one of {arity:?}",
            a.name(),
            a.arity()
        ))),
        CatalogItem::Phase(p) => Err(FioError::Config(format!(
            "{} is a phase, expected an amplitude",
            p.name()
        ))),
    }
}

fn want_phase(entry: &CatalogEntry, dim: usize) -> Result<()> {
    catalog(entry, dim)
        .and_then(|c| c.into_phase())
        .map(|_| ())
        .map_err(config_error)
}

fn want_exponent(v: f64, what: &str) -> Result<()> {
    if v >= 1.0 {
        Ok(())
    } else {
        Err(FioError::Config(format!("{what} = {v} must lie in [1, ∞]")))
    }
}

fn want_range(r: [u32; 2], what: &str) -> Result<()> {
    if r[0] <= r[1] {
        Ok(())
    } else {
        Err(FioError::Config(format!("{what} range {r:?} is empty")))
    }
}

impl ExperimentConfig {
    /// Reads a TOML document, or JSON when the extension is `.json`.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| FioError::Config(format!("{}: {e}", path.display())))?;
        let cfg = if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
            Self::from_json(&text)?
        } else {
            Self::from_toml(&text)?
        };
        Ok(cfg)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(config_error)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(config_error)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(config_error)
    }

    /// Catalog references, exponents and ranges.
    pub fn validate(&self) -> Result<()> {
        if self.trials < MIN_TRIALS {
            return Err(FioError::Config(format!(
                "{} trials, need at least {MIN_TRIALS}",
                self.trials
            )));
        }
        if let Some(b) = self.budget {
            if !(b > 0.0) {
                return Err(FioError::Config(format!("budget {b} must be positive")));
            }
        }
        match &self.experiment {
            Experiment::DyadicDecay {
                grid,
                amplitude,
                phase,
                levels,
                q,
                r,
                factor,
                ..
            } => {
                want_amplitude(amplitude, grid.dim(), &[1])?;
                want_phase(phase, grid.dim())?;
                want_range(*levels, "levels")?;
                want_exponent(*q, "q")?;
                want_exponent(*r, "r")?;
                if !(*factor >= 1.0) {
                    return Err(FioError::Config(format!("factor {factor} must be at least 1")));
                }
            }
            Experiment::KernelDecay {
                grid,
                phase,
                patches,
                xs,
                radii,
                r_max,
                ..
            } => {
                want_phase(phase, grid.dim())?;
                if *patches < 4 {
                    return Err(FioError::Config(format!("{patches} patches, need at least 4")));
                }
                if xs.is_empty() || xs.iter().any(|x| x.len() != grid.dim()) {
                    return Err(FioError::Config(format!(
                        "xs must be a non-empty list of {}-vectors",
                        grid.dim()
                    )));
                }
                if *radii < super::MIN_FIT_POINTS || !(*r_max > 1.0) {
                    return Err(FioError::Config("need at least 4 radii and r_max > 1".into()));
                }
            }
            Experiment::CoefficientDecay { grid, amplitude, p, .. } => {
                want_amplitude(amplitude, grid.dim(), &[1])?;
                want_exponent(*p, "p")?;
            }
            Experiment::BilinearConsistency {
                grid,
                amplitude,
                phases,
                q1,
                ..
            }
            | Experiment::SeminormTransfer {
                grid,
                amplitude,
                phases,
                q1,
                ..
            } => {
                want_amplitude(amplitude, grid.dim(), &[2])?;
                for ph in phases {
                    want_phase(ph, grid.dim())?;
                }
                want_exponent(*q1, "q1")?;
            }
            Experiment::SeparatedMultilinear {
                grid,
                amplitude,
                phases,
                k_values,
                ..
            } => {
                want_amplitude(amplitude, grid.dim(), &[2, 3])?;
                for ph in phases {
                    want_phase(ph, grid.dim())?;
                }
                if k_values.is_empty() {
                    return Err(FioError::Config("k_values is empty".into()));
                }
            }
            Experiment::OscillatoryMaximal {
                grid,
                alpha,
                beta,
                t_points,
                t_min,
                q1,
                q2,
            } => {
                want_amplitude(
                    &CatalogEntry::Oscillatory {
                        alpha: *alpha,
                        beta: *beta,
                        t: 1.0,
                    },
                    grid.dim(),
                    &[2],
                )?;
                if *t_points < 2 || !(*t_min > 0.0 && *t_min < 1.0) {
                    return Err(FioError::Config("need t_points ≥ 2 and t_min in (0, 1)".into()));
                }
                want_exponent(*q1, "q1")?;
                want_exponent(*q2, "q2")?;
            }
            Experiment::ThresholdTable { rho, p, q, n } => {
                for v in p.iter().chain(q) {
                    parse_exponent(v).map_err(config_error)?;
                }
                for v in rho {
                    crate::thresholds::parse_rational(v).map_err(config_error)?;
                }
                if rho.is_empty() || p.is_empty() || q.is_empty() || n.is_empty() {
                    return Err(FioError::Config("every threshold axis needs at least one value".into()));
                }
                if n.contains(&0) {
                    return Err(FioError::Config("dimensions must be at least 1".into()));
                }
            }
            Experiment::Decomposition {
                lp_grid,
                cone_grid,
                cone_levels,
                phi_levels,
            } => {
                if lp_grid.dim() != 2 || cone_grid.dim() != 2 {
                    return Err(FioError::Config(
                        "decomposition checks run on two-dimensional grids".into(),
                    ));
                }
                want_range(*cone_levels, "cone_levels")?;
                want_range(*phi_levels, "phi_levels")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const DYADIC: &str = r#"
experiment = "dyadic-decay"
seed = 7
levels = [3, 6]
grid = { dim = 1, half_extent = 16.0, points_per_axis = 1024 }
amplitude = { name = "hormander", m = -1.0, rho = 1.0 }
phase = { name = "wave" }
"#;

    #[test]
    fn toml_round_trip() {
        let cfg = ExperimentConfig::from_toml(DYADIC).unwrap();
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.trials, MIN_TRIALS);
        assert_eq!(cfg.experiment.name(), "dyadic-decay");
        let again = ExperimentConfig::from_toml(&cfg.to_toml().unwrap()).unwrap();
        assert_eq!(again, cfg);
    }

    #[test]
    fn json_is_accepted() {
        let cfg = ExperimentConfig::from_toml(DYADIC).unwrap();
        let json = serde_json::to_string(&cfg).unwrap();
        assert_eq!(ExperimentConfig::from_json(&json).unwrap(), cfg);
    }

    #[test]
    fn bad_references_are_config_errors() {
        let unknown = DYADIC.replace("\"wave\"", "\"sine-gordon\"");
        assert!(matches!(
            ExperimentConfig::from_toml(&unknown),
            Err(FioError::Config(_))
        ));
        let swapped = DYADIC.replace(
            "phase = { name = \"wave\" }",
            "phase = { name = \"joint-bessel\", m = -1.0 }",
        );
        assert!(matches!(
            ExperimentConfig::from_toml(&swapped),
            Err(FioError::Config(_))
        ));
        let few = format!("{DYADIC}trials = 3\n");
        assert!(ExperimentConfig::from_toml(&few).is_err());
        let bad_grid = DYADIC.replace("1024", "1000");
        assert!(ExperimentConfig::from_toml(&bad_grid).is_err());
    }
}
