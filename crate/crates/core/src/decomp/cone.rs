use std::f64::consts::PI;

use crate::error::{FioError, Result};
use crate::field::GridSpec;
use crate::symbols::{bump, diff, norm};

/// Smallest normalization denominator tolerated on the sphere.
const MIN_DENOMINATOR: f64 = 1e-12;

/// Angle of `a` relative to `b`, wrapped into `(−π, π]`.
pub(crate) fn angle_diff(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    if d > PI {
        d - 2.0 * PI
    } else {
        d
    }
}

/// Number of level-`j` directions on the circle: the largest `M` with
/// adjacent chord `2 sin(π/M) ≥ 2^{−j/2}`.
pub fn cone_count(j: u32) -> usize {
    let spacing = 2f64.powf(-(j as f64) / 2.0);
    let mut m = 3usize;
    while 2.0 * (PI / (m + 1) as f64).sin() >= spacing {
        m += 1;
    }
    m
}

/// Level-`j` unit directions: `M` evenly spaced angles for `n = 2`, the two
/// half-lines for `n = 1`.
pub fn cone_directions(j: u32, n: usize) -> Result<Vec<[f64; 2]>> {
    match n {
        1 => Ok(vec![[1.0, 0.0], [-1.0, 0.0]]),
        2 => {
            if j == 0 {
                return Err(FioError::Decomposition("cone levels start at 1".into()));
            }
            let m = cone_count(j);
            Ok((0..m)
                .map(|k| {
                    let t = 2.0 * PI * k as f64 / m as f64;
                    [t.cos(), t.sin()]
                })
                .collect())
        }
        _ => Err(FioError::Decomposition(format!(
            "cone covers in dimension {n} are not supported"
        ))),
    }
}

/// Directions and the degree-0 homogeneous partition `χ^ν_j` of one level.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeCover {
    level: u32,
    dim: usize,
    directions: Vec<[f64; 2]>,
    width: f64,
}

impl ConeCover {
    pub fn build(j: u32, dim: usize) -> Result<Self> {
        let directions = cone_directions(j, dim)?;
        let width = if dim == 1 {
            PI
        } else {
            2.0 * PI / directions.len() as f64
        };
        let cover = ConeCover {
            level: j,
            dim,
            directions,
            width,
        };
        if dim == 2 {
            let worst = (0..4096)
                .map(|i| cover.denominator(2.0 * PI * i as f64 / 4096.0))
                .fold(f64::INFINITY, f64::min);
            if worst < MIN_DENOMINATOR {
                return Err(FioError::Decomposition(format!(
                    "angular bumps leave a gap (denominator {worst:e})"
                )));
            }
        }
        Ok(cover)
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    pub fn directions(&self) -> &[[f64; 2]] {
        &self.directions
    }

    /// Angular spacing `δ = 2π/M` (`π` on the line).
    pub fn width(&self) -> f64 {
        self.width
    }

    fn angle(&self, nu: usize) -> f64 {
        self.width * nu as f64
    }

    fn raw(&self, nu: usize, theta: f64) -> f64 {
        bump(angle_diff(theta, self.angle(nu)) / self.width)
    }

    fn neighbours(&self, theta: f64) -> impl Iterator<Item = usize> + '_ {
        let m = self.len() as i64;
        let centre = (theta.rem_euclid(2.0 * PI) / self.width).round() as i64;
        (centre - 2..=centre + 2).map(move |k| k.rem_euclid(m) as usize)
    }

    fn denominator(&self, theta: f64) -> f64 {
        self.neighbours(theta).map(|nu| self.raw(nu, theta)).sum()
    }

    /// `χ^ν_j(ξ)`; zero at `ξ = 0`.
    pub fn weight(&self, nu: usize, xi: &[f64]) -> f64 {
        if self.dim == 1 {
            let s = xi[0];
            return match nu {
                0 if s > 0.0 => 1.0,
                1 if s < 0.0 => 1.0,
                _ => 0.0,
            };
        }
        if xi[0] == 0.0 && xi[1] == 0.0 {
            return 0.0;
        }
        let theta = xi[1].atan2(xi[0]);
        let num = self.raw(nu, theta);
        if num == 0.0 {
            0.0
        } else {
            num / self.denominator(theta)
        }
    }

    /// Smallest distance between distinct directions.
    pub fn min_spacing(&self) -> f64 {
        let mut best = f64::INFINITY;
        for (a, u) in self.directions.iter().enumerate() {
            for v in &self.directions[a + 1..] {
                best = best.min(((u[0] - v[0]).powi(2) + (u[1] - v[1]).powi(2)).sqrt());
            }
        }
        best
    }

    /// Largest distance from a sampled unit vector to its nearest direction.
    pub fn covering_radius(&self) -> f64 {
        let samples = 64 * self.len().max(8);
        let mut worst = 0.0f64;
        for i in 0..samples {
            let t = 2.0 * PI * (i as f64 + 0.5) / samples as f64;
            let u = [t.cos(), t.sin()];
            let near = self
                .directions
                .iter()
                .map(|v| ((u[0] - v[0]).powi(2) + (u[1] - v[1]).powi(2)).sqrt())
                .fold(f64::INFINITY, f64::min);
            worst = worst.max(near);
        }
        worst
    }

    /// Largest `|ξ/|ξ| − ξ^ν|` over sampled directions where `χ^ν > 0`.
    pub fn support_aperture(&self) -> f64 {
        if self.dim == 1 {
            return 0.0;
        }
        let samples = 64 * self.len();
        let mut worst = 0.0f64;
        for nu in 0..self.len() {
            let d = self.directions[nu];
            for i in 0..samples {
                let t = 2.0 * PI * i as f64 / samples as f64;
                let u = [t.cos(), t.sin()];
                if self.weight(nu, &u) > 0.0 {
                    worst = worst.max(((u[0] - d[0]).powi(2) + (u[1] - d[1]).powi(2)).sqrt());
                }
            }
        }
        worst
    }

    /// `max |Σ_ν χ^ν − 1|` over dual grid points with `ξ ≠ 0`.
    pub fn partition_defect(&self, grid: &GridSpec) -> f64 {
        let dim = grid.dim();
        let mut worst = 0.0f64;
        for k in grid.frequencies() {
            let xi = &k[..dim];
            if norm(xi) == 0.0 {
                continue;
            }
            let s: f64 = (0..self.len()).map(|nu| self.weight(nu, xi)).sum();
            worst = worst.max((s - 1.0).abs());
        }
        worst
    }

    /// Worst `C_α` in `|∂^α χ^ν_j(ξ)| ≤ C_α 2^{|α|j/2} |ξ|^{−|α|}` for
    /// `|α| = 0, 1, 2`, probed by finite differences on the `j`-shell.
    pub fn derivative_constants(&self) -> [f64; 3] {
        let mut c = [0.0f64; 3];
        if self.dim == 1 {
            c[0] = 1.0;
            return c;
        }
        let j = self.level as i32;
        let scale = 2f64.powf(j as f64 / 2.0);
        let radii = [2f64.powi(j - 1), 2f64.powi(j), 2f64.powi(j + 1)];
        for r in radii {
            for i in 0..=64 {
                let t = (i as f64 / 32.0 - 1.0) * 1.2 * self.width;
                let xi = [r * t.cos(), r * t.sin()];
                let h = diff::xi_step(r);
                for order in 0..=2u32 {
                    for alpha in diff::multi_indices(2, order) {
                        let d = diff::partial(|p: &[f64]| self.weight(0, p), &xi, &alpha, &[h, h]);
                        let v = d.abs() * r.powi(order as i32) / scale.powi(order as i32);
                        c[order as usize] = c[order as usize].max(v);
                    }
                }
            }
        }
        c
    }
}

/// The level-`j` cover for `grid`'s dimension.
pub fn cone_partition(j: u32, grid: &GridSpec) -> Result<ConeCover> {
    ConeCover::build(j, grid.dim())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        let m = cone_directions(2, 2).unwrap().len();
        // Oracle: explicit search for the largest admissible M.
        let oracle = (3..100).filter(|&m| 2.0 * (PI / m as f64).sin() >= 0.5).max().unwrap();
        assert_eq!(m, oracle);
        assert!((6..=13).contains(&m));
        assert_eq!(cone_directions(5, 1).unwrap().len(), 2);
        assert!(cone_directions(2, 3).is_err());
        for j in 2..=6 {
            let ratio = cone_count(j + 2) as f64 / cone_count(j) as f64;
            assert!((1.5..=2.5).contains(&ratio));
        }
    }

    #[test]
    fn spacing_and_covering() {
        for j in 2..=8 {
            let c = ConeCover::build(j, 2).unwrap();
            let s = 2f64.powf(-(j as f64) / 2.0);
            assert!(c.min_spacing() >= s * (1.0 - 1e-12), "j={j}");
            assert!(c.covering_radius() <= s, "j={j}");
            assert!(c.support_aperture() <= 2.0 * s, "j={j}");
        }
        assert!(ConeCover::build(4, 2).unwrap().min_spacing() >= 0.25);
    }

    #[test]
    fn partition_is_exact() {
        let g = GridSpec::new(2, 8.0, 64).unwrap();
        for j in 1..=6 {
            assert!(ConeCover::build(j, 2).unwrap().partition_defect(&g) <= 1e-12);
        }
        let g1 = GridSpec::new(1, 8.0, 64).unwrap();
        assert_eq!(ConeCover::build(3, 1).unwrap().partition_defect(&g1), 0.0);
    }

    #[test]
    fn first_derivative_constants_are_stable() {
        let c: Vec<f64> = (2..=6)
            .map(|j| ConeCover::build(j, 2).unwrap().derivative_constants()[1])
            .collect();
        let (lo, hi) = c
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(a, b), v| (a.min(*v), b.max(*v)));
        assert!(hi / lo <= 4.0, "{c:?}");
    }
}
