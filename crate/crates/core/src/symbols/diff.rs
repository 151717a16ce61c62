//! Central finite differences with one Richardson step.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

/// Values that finite differences can combine.
pub trait Linear: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
}

impl Linear for f64 {
    fn zero() -> Self {
        0.0
    }
}

impl Linear for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
}

/// Highest derivative order with a stencil.
pub const MAX_ORDER: u32 = 4;

/// Step for ξ-derivatives at frequency magnitude `r`.
pub fn xi_step(r: f64) -> f64 {
    (1e-3 * r).max(1e-3)
}

/// Second-order central stencil `(offset, weight)` for the `order`-th derivative
/// at unit step.
fn stencil(order: u32) -> &'static [(i32, f64)] {
    match order {
        0 => &[(0, 1.0)],
        1 => &[(-1, -0.5), (1, 0.5)],
        2 => &[(-1, 1.0), (0, -2.0), (1, 1.0)],
        3 => &[(-2, -0.5), (-1, 1.0), (1, -1.0), (2, 0.5)],
        4 => &[(-2, 1.0), (-1, -4.0), (0, 6.0), (1, -4.0), (2, 1.0)],
        _ => panic!("no stencil for derivative order {order}"),
    }
}

fn tensor<T: Linear>(f: &impl Fn(&[f64]) -> T, at: &[f64], alpha: &[u32], steps: &[f64]) -> T {
    let dim = at.len();
    let stencils: Vec<&[(i32, f64)]> = alpha.iter().map(|&a| stencil(a)).collect();
    let mut point = at.to_vec();
    let mut acc = T::zero();
    let mut idx = vec![0usize; dim];
    loop {
        let mut w = 1.0;
        for a in 0..dim {
            let (off, wt) = stencils[a][idx[a]];
            point[a] = at[a] + off as f64 * steps[a];
            w *= wt / steps[a].powi(alpha[a] as i32);
        }
        acc = acc + f(&point) * w;
        let mut a = 0;
        loop {
            if a == dim {
                return acc;
            }
            idx[a] += 1;
            if idx[a] < stencils[a].len() {
                break;
            }
            idx[a] = 0;
            a += 1;
        }
    }
}

/// `∂^α f(at)` by tensor-product central differences with per-axis `steps`,
/// extrapolated once: `(4 D(h/2) − D(h)) / 3`.
pub fn partial<T: Linear>(f: impl Fn(&[f64]) -> T, at: &[f64], alpha: &[u32], steps: &[f64]) -> T {
    assert_eq!(at.len(), alpha.len());
    assert_eq!(at.len(), steps.len());
    if alpha.iter().all(|&a| a == 0) {
        return f(at);
    }
    let coarse = tensor(&f, at, alpha, steps);
    let half: Vec<f64> = steps.iter().map(|h| h / 2.0).collect();
    let fine = tensor(&f, at, alpha, &half);
    (fine * 4.0 - coarse) * (1.0 / 3.0)
}

/// `f^{(order)}(t)` of a one-variable function.
pub fn derivative<T: Linear>(f: impl Fn(f64) -> T, t: f64, order: u32, step: f64) -> T {
    partial(|p: &[f64]| f(p[0]), &[t], &[order], &[step])
}

/// All multi-indices of `dim` components with total order exactly `order`.
pub fn multi_indices(dim: usize, order: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; dim];
    fn rec(pos: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if pos + 1 == cur.len() {
            cur[pos] = left;
            out.push(cur.clone());
            return;
        }
        for k in (0..=left).rev() {
            cur[pos] = k;
            rec(pos + 1, left - k, cur, out);
        }
    }
    if dim > 0 {
        rec(0, order, &mut cur, &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_derivatives() {
        let f = |t: f64| t.powi(5);
        let t: f64 = 0.7;
        let exact = [t.powi(5), 5.0 * t.powi(4), 20.0 * t.powi(3), 60.0 * t * t, 120.0 * t];
        for order in 0..=4 {
            let d = derivative(f, t, order, 1e-2);
            assert!(
                (d - exact[order as usize]).abs() < 1e-6 * exact[order as usize].abs().max(1.0),
                "order {order}: {d}"
            );
        }
    }

    #[test]
    fn mixed_partial_of_complex_function() {
        let f = |p: &[f64]| Complex64::new(0.0, p[0] * p[1]).exp();
        let at = [0.3, -0.4];
        // ∂x∂y e^{ixy} = (i − xy) e^{ixy}
        let exact = (Complex64::new(0.0, 1.0) - at[0] * at[1]) * f(&at);
        let d = partial(f, &at, &[1, 1], &[1e-3, 1e-3]);
        assert!((d - exact).norm() < 1e-9);
    }

    #[test]
    fn multi_index_counts() {
        assert_eq!(multi_indices(1, 3), vec![vec![3]]);
        assert_eq!(multi_indices(2, 2).len(), 3);
        assert_eq!(multi_indices(2, 0), vec![vec![0, 0]]);
    }

    #[test]
    fn step_rule() {
        assert_eq!(xi_step(0.5), 1e-3);
        assert!((xi_step(100.0) - 0.1).abs() < 1e-15);
    }
}
