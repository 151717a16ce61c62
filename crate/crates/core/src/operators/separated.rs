use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bilinear::{MultilinearFio, DEFAULT_BUDGET};
use super::{active_set, cell_weight, check_input, finite_field, ActiveSet};
use crate::decomp::{signed, torus_coefficients};
use crate::error::{FioError, Result};
use crate::field::{fourier_transform, Field};
use crate::lab::{fit_decay_exponent, Abscissa};
use crate::symbols::{norm, smooth_step};

/// Largest coefficient ring used for the decay fit.
const FIT_RINGS: usize = 16;

/// Controls for [`MultilinearFio::apply_multilinear_separated`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparatedOptions {
    /// Keep coefficients with `|k|_∞ ≤ k_trunc`.
    pub k_trunc: usize,
    /// Torus samples per axis; chosen from the joint dimension when absent.
    pub torus_samples: Option<usize>,
    pub budget: f64,
    /// Random-sign draws for the square-function diagnostic; 0 disables it.
    pub khinchin_draws: usize,
    pub seed: u64,
}

impl SeparatedOptions {
    pub fn new(k_trunc: usize) -> Self {
        SeparatedOptions {
            k_trunc,
            torus_samples: None,
            budget: DEFAULT_BUDGET,
            khinchin_draws: 0,
            seed: 0,
        }
    }
}

/// `‖Σ_j ε_j T_j‖₂ / ‖(Σ_j |T_j|²)^{1/2}‖₂` over random sign draws.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KhinchinReport {
    pub draws: usize,
    pub mean_ratio: f64,
    pub min_ratio: f64,
    pub max_ratio: f64,
}

#[derive(Debug, Clone)]
pub struct SeparatedResult {
    pub result: Field,
    /// `Σ_j Σ_{dropped k} ‖c^j_k‖_∞ Π_l A^j_l` with `A^j_l` the absolute
    /// coefficient mass of `f_l` under the level cutoff.
    pub tail_bound: f64,
    pub levels: usize,
    pub terms: usize,
    /// Fitted slope of `max ‖c_k‖_∞` against `log(1 + |k|_∞)`.
    pub coefficient_slope: Option<f64>,
    pub khinchin: Option<KhinchinReport>,
    pub warnings: Vec<String>,
}

/// Default torus resolution for joint dimension `d`.
fn default_samples(d: usize) -> usize {
    match d {
        0..=2 => 64,
        3 => 32,
        _ => 16,
    }
}

/// Dilation of the level profile on the torus; its support `|t| ≤ 2·STRETCH`
/// stays inside `[−π, π]^d`.
const STRETCH: f64 = 1.5;

/// Joint dyadic profile scaled to the torus: `θ_j(2^j t / STRETCH)`.
fn level_profile(j: u32, r: f64) -> f64 {
    let r = r / STRETCH;
    if j == 0 {
        smooth_step(r)
    } else {
        smooth_step(r) - smooth_step(2.0 * r)
    }
}

/// Per-coordinate window, 1 on the profile support and 0 where its first
/// periodic copy begins.
fn window(t: f64) -> f64 {
    let inner = 2.0 * STRETCH;
    let outer = 2.0 * std::f64::consts::PI - inner;
    smooth_step(1.0 + (t.abs() - inner) / (outer - inner))
}

/// All `k ∈ [−K, K]^d`, first axis slowest.
fn lattice(d: usize, kk: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..d {
        let mut next = Vec::with_capacity(out.len() * (2 * kk as usize + 1));
        for v in &out {
            for k in -kk..=kk {
                let mut w = v.clone();
                w.push(k);
                next.push(w);
            }
        }
        out = next;
    }
    out
}

impl MultilinearFio {
    /// Evaluates `T_a(f₁,…,f_N)` level by level through the Fourier series of
    /// `a(x, 2^j ·) θ_j(2^j · / STRETCH)` on the torus, keeping `|k|_∞ ≤ k_trunc`.
    pub fn apply_multilinear_separated(&self, fs: &[Field], opts: &SeparatedOptions) -> Result<SeparatedResult> {
        let arity = self.arity();
        if fs.len() != arity {
            return Err(FioError::InvalidAmplitude(format!(
                "{} inputs for arity {arity}",
                fs.len()
            )));
        }
        let dim = self.grid.dim();
        let d = arity * dim;
        let m = opts.torus_samples.unwrap_or_else(|| default_samples(d));
        if m < 2 * opts.k_trunc + 2 {
            return Err(FioError::Decomposition(format!(
                "{m} torus samples cannot resolve |k| ≤ {}",
                opts.k_trunc
            )));
        }
        // Smallest J with 2^J above the joint Nyquist radius.
        let reach = (d as f64).sqrt() * self.grid.nyquist();
        let top = reach.log2().ceil().max(0.0) as u32;
        let levels = top as usize + 1;
        let nx = self.grid.len();
        let kk = opts.k_trunc as i64;
        let torus_work = levels as f64 * nx as f64 * (m as f64).powi(d as i32);
        let mode_work = levels as f64 * nx as f64 * (2.0 * kk as f64 + 1.0).powi(dim as i32) * nx as f64 * arity as f64;
        let work = torus_work + mode_work;
        if work > opts.budget {
            return Err(FioError::Budget {
                work,
                budget: opts.budget,
            });
        }

        let sets: Vec<ActiveSet> = fs
            .iter()
            .enumerate()
            .map(|(l, f)| {
                check_input(&self.grid, f)?;
                active_set(
                    &self.grid,
                    &self.phases[l],
                    fourier_transform(f).coefficients(),
                    self.low_freq_cut,
                )
            })
            .collect::<Result<_>>()?;
        let scale = cell_weight(&self.grid);
        let xs: Vec<[f64; 2]> = self.grid.points().collect();
        // e^{iφ_l(x, ξ)} f̂_l(ξ) scale, per input and x.
        let modulated: Vec<Vec<Vec<Complex64>>> = (0..arity)
            .map(|l| {
                xs.par_iter()
                    .map(|x| {
                        (0..sets[l].index.len())
                            .map(|k| {
                                Complex64::from_polar(
                                    scale,
                                    self.phases[l].eval(&x[..dim], &sets[l].phase_xi[k][..dim]),
                                ) * sets[l].coeff[k]
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let ks_single = lattice(dim, kk);
        let ks_joint = lattice(d, kk);
        let index_of = |k: &[i64]| {
            k.iter()
                .fold(0usize, |acc, &v| acc * m + v.rem_euclid(m as i64) as usize)
        };

        let mut total = vec![Complex64::new(0.0, 0.0); nx];
        let mut pieces: Vec<Vec<Complex64>> = Vec::with_capacity(levels);
        let mut tail_bound = 0.0;
        let mut rings = vec![0.0f64; m / 2];
        for j in 0..=top {
            let s = 2f64.powi(j as i32);
            // Coefficients of the scaled level amplitude at every x.
            let coeffs: Vec<Vec<Complex64>> = xs
                .par_iter()
                .map(|x| {
                    torus_coefficients(
                        |t| {
                            let w = level_profile(j, norm(t));
                            if w == 0.0 {
                                return Complex64::new(0.0, 0.0);
                            }
                            let xi: Vec<f64> = t.iter().map(|v| v * s).collect();
                            let parts: Vec<&[f64]> = xi.chunks(dim).collect();
                            self.amplitude.eval(&x[..dim], &parts) * w
                        },
                        d,
                        m,
                    )
                })
                .collect();
            let sup: Vec<f64> = (0..m.pow(d as u32))
                .map(|i| coeffs.iter().map(|c| c[i].norm()).fold(0.0, f64::max))
                .collect();
            // Absolute masses A^j_l and modulated linear pieces F^j_{l,k}(x).
            let mut mass = vec![0.0; arity];
            let mut modes: Vec<Vec<Vec<Complex64>>> = Vec::with_capacity(arity);
            for l in 0..arity {
                let cut: Vec<f64> = sets[l]
                    .xi
                    .iter()
                    .map(|xi| xi[..dim].iter().map(|v| window(v / s)).product())
                    .collect();
                mass[l] = sets[l].coeff.iter().zip(&cut).map(|(c, w)| c.norm() * w * scale).sum();
                let per_x: Vec<Vec<Complex64>> = modulated[l]
                    .par_iter()
                    .map(|u| {
                        ks_single
                            .iter()
                            .map(|k| {
                                sets[l]
                                    .xi
                                    .iter()
                                    .zip(u)
                                    .zip(&cut)
                                    .filter(|(_, w)| **w != 0.0)
                                    .map(|((xi, u), w)| {
                                        let ph: f64 =
                                            k.iter().zip(&xi[..dim]).map(|(k, v)| *k as f64 * v).sum::<f64>() / s;
                                        u * Complex64::from_polar(*w, ph)
                                    })
                                    .sum()
                            })
                            .collect()
                    })
                    .collect();
                modes.push(per_x);
            }
            let product_mass: f64 = mass.iter().product();
            for (i, c) in sup.iter().enumerate() {
                let mut rest = i;
                let mut ring = 0usize;
                for _ in 0..d {
                    ring = ring.max(signed(rest % m, m).unsigned_abs() as usize);
                    rest /= m;
                }
                if ring > opts.k_trunc {
                    tail_bound += c * product_mass;
                }
                if ring < rings.len() {
                    rings[ring] = rings[ring].max(*c);
                }
            }
            let single_len = ks_single.len();
            let piece: Vec<Complex64> = (0..nx)
                .into_par_iter()
                .map(|i| {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for k in &ks_joint {
                        let c = coeffs[i][index_of(k)];
                        if c == Complex64::new(0.0, 0.0) {
                            continue;
                        }
                        let mut term = c;
                        for l in 0..arity {
                            let local = index_of_single(&k[l * dim..(l + 1) * dim], kk);
                            debug_assert!(local < single_len);
                            term *= modes[l][i][local];
                        }
                        acc += term;
                    }
                    acc
                })
                .collect();
            for (t, p) in total.iter_mut().zip(&piece) {
                *t += p;
            }
            pieces.push(piece);
        }

        let mut warnings = Vec::new();
        let fit_points: Vec<(f64, f64)> = rings
            .iter()
            .enumerate()
            .skip(1)
            .take(FIT_RINGS)
            .filter(|(_, v)| **v > 1e-14 * rings[0].max(f64::MIN_POSITIVE))
            .map(|(s, v)| (1.0 + s as f64, *v))
            .collect();
        let coefficient_slope = fit_decay_exponent(&fit_points, Abscissa::Log).ok().map(|f| f.slope);
        if let Some(slope) = coefficient_slope {
            if slope > -(dim as f64) - 1.0 {
                warnings.push(format!("truncation unreliable: coefficient decay slope {slope:.2}"));
            }
        }
        let khinchin = (opts.khinchin_draws > 0).then(|| khinchin(&pieces, opts.khinchin_draws, opts.seed));
        Ok(SeparatedResult {
            result: finite_field(self.grid, total)?,
            tail_bound,
            levels,
            terms: ks_joint.len(),
            coefficient_slope,
            khinchin,
            warnings,
        })
    }
}

/// Position of `k ∈ [−K, K]^d` in [`lattice`] order.
fn index_of_single(k: &[i64], kk: i64) -> usize {
    let side = 2 * kk + 1;
    k.iter().fold(0i64, |acc, v| acc * side + v + kk) as usize
}

fn khinchin(pieces: &[Vec<Complex64>], draws: usize, seed: u64) -> KhinchinReport {
    let nx = pieces.first().map_or(0, |p| p.len());
    let square: f64 = (0..nx)
        .map(|i| pieces.iter().map(|p| p[i].norm_sqr()).sum::<f64>())
        .sum::<f64>()
        .sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ratios = Vec::with_capacity(draws);
    for _ in 0..draws {
        let signs: Vec<f64> = pieces
            .iter()
            .map(|_| if rng.random_bool(0.5) { 1.0 } else { -1.0 })
            .collect();
        let s: f64 = (0..nx)
            .map(|i| {
                pieces
                    .iter()
                    .zip(&signs)
                    .map(|(p, e)| p[i] * *e)
                    .sum::<Complex64>()
                    .norm_sqr()
            })
            .sum::<f64>()
            .sqrt();
        ratios.push(if square > 0.0 { s / square } else { 0.0 });
    }
    KhinchinReport {
        draws,
        mean_ratio: ratios.iter().sum::<f64>() / draws as f64,
        min_ratio: ratios.iter().cloned().fold(f64::INFINITY, f64::min),
        max_ratio: ratios.iter().cloned().fold(0.0, f64::max),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{random_test_function, GridSpec, ProbeFamily};
    use crate::symbols::{catalog, Amplitude, CatalogEntry, Flavor, Phase, SymbolClass};

    fn linear_phase() -> Phase {
        catalog(&CatalogEntry::LinearPhase, 1).unwrap().into_phase().unwrap()
    }

    fn relative(a: &Field, b: &Field) -> f64 {
        a.sub(b).unwrap().l2_norm() / b.l2_norm()
    }

    #[test]
    fn lattice_order_matches_index() {
        let ks = lattice(2, 2);
        assert_eq!(ks.len(), 25);
        for (i, k) in ks.iter().enumerate() {
            assert_eq!(index_of_single(k, 2), i);
        }
    }

    #[test]
    fn compact_smooth_amplitude_is_reconstructed() {
        // b(x) Ψ(ξ) Ψ(η) with Ψ supported well inside the first levels.
        let g = GridSpec::new(1, 12.0, 128).unwrap();
        let class = SymbolClass {
            p: f64::INFINITY,
            orders: vec![0.0],
            rhos: vec![1.0],
            flavor: Flavor::Joint,
        };
        let a = Amplitude::new("b*psi*psi", 1, 2, class, |x, xis| {
            Complex64::new(
                (1.0 + 0.5 * x[0].cos()) * smooth_step(xis[0][0].abs()) * smooth_step(xis[1][0].abs()),
                0.0,
            )
        })
        .unwrap();
        let op = MultilinearFio::new(a, vec![linear_phase(), linear_phase()], g, false).unwrap();
        let f = random_test_function(&g, ProbeFamily::GaussianPacket, 3).unwrap();
        let h = random_test_function(&g, ProbeFamily::GaussianPacket, 4).unwrap();
        let direct = op.apply_bilinear(&f, &h, None).unwrap();
        // Compactly supported profiles have sub-exponential coefficient decay,
        // so this needs a fine torus and a long series.
        let err = |k: usize| {
            let mut opts = SeparatedOptions::new(k);
            opts.torus_samples = Some(128);
            let sep = op.apply_multilinear_separated(&[f.clone(), h.clone()], &opts).unwrap();
            relative(&sep.result, &direct)
        };
        let (coarse, fine) = (err(16), err(48));
        assert!(fine < 1e-3 && fine < coarse / 4.0, "{coarse} {fine}");
    }

    #[test]
    fn tail_bound_decreases_and_dominates() {
        let g = GridSpec::new(1, 12.0, 128).unwrap();
        let a = catalog(&CatalogEntry::JointBessel { m: -2.0 }, 1)
            .unwrap()
            .into_amplitude()
            .unwrap();
        let op = MultilinearFio::new(a, vec![linear_phase(), linear_phase()], g, false).unwrap();
        let f = random_test_function(&g, ProbeFamily::BandLimitedNoise, 1).unwrap();
        let h = random_test_function(&g, ProbeFamily::BandLimitedNoise, 2).unwrap();
        let direct = op.apply_bilinear(&f, &h, None).unwrap();
        let mut last = f64::INFINITY;
        for k in [1, 2, 4, 8] {
            let sep = op
                .apply_multilinear_separated(&[f.clone(), h.clone()], &SeparatedOptions::new(k))
                .unwrap();
            assert!(sep.tail_bound <= last);
            let err = sep
                .result
                .sub(&direct)
                .unwrap()
                .values()
                .iter()
                .map(|v| v.norm())
                .fold(0.0, f64::max);
            assert!(
                err <= sep.tail_bound * (1.0 + 1e-9) + 1e-12,
                "k={k}: {err} > {}",
                sep.tail_bound
            );
            last = sep.tail_bound;
        }
    }

    #[test]
    fn khinchin_ratio_is_near_one() {
        let g = GridSpec::new(1, 12.0, 128).unwrap();
        let a = catalog(&CatalogEntry::JointBessel { m: -1.0 }, 1)
            .unwrap()
            .into_amplitude()
            .unwrap();
        let op = MultilinearFio::new(a, vec![linear_phase(), linear_phase()], g, false).unwrap();
        let f = random_test_function(&g, ProbeFamily::BandLimitedNoise, 7).unwrap();
        let mut opts = SeparatedOptions::new(4);
        opts.khinchin_draws = 32;
        let sep = op.apply_multilinear_separated(&[f.clone(), f], &opts).unwrap();
        let k = sep.khinchin.unwrap();
        assert_eq!(k.draws, 32);
        assert!(k.min_ratio > 0.0 && k.max_ratio < 3.0, "{k:?}");
    }

    #[test]
    fn too_coarse_torus_is_refused() {
        let g = GridSpec::new(1, 12.0, 128).unwrap();
        let a = catalog(&CatalogEntry::JointBessel { m: -1.0 }, 1)
            .unwrap()
            .into_amplitude()
            .unwrap();
        let op = MultilinearFio::new(a, vec![linear_phase(), linear_phase()], g, false).unwrap();
        let f = random_test_function(&g, ProbeFamily::GaussianPacket, 1).unwrap();
        let mut opts = SeparatedOptions::new(8);
        opts.torus_samples = Some(16);
        assert!(op.apply_multilinear_separated(&[f.clone(), f], &opts).is_err());
    }
}
