use num_complex::Complex64;

use super::Field;
use crate::error::{FioError, Result};

fn check_exponent(r: f64, name: &str) -> Result<()> {
    if r.is_nan() || r <= 0.0 {
        Err(FioError::InvalidExponent(format!("{name} = {r} must lie in (0, ∞]")))
    } else {
        Ok(())
    }
}

/// `(Σ |f|^r μ)^{1/r}` over cells of measure `μ`, or `max |f|` for `r = ∞`.
///
/// For `0 < r < 1` this is the quasinorm, computed as written.
pub fn lp_norm_values(values: &[Complex64], measure: f64, r: f64) -> Result<f64> {
    check_exponent(r, "r")?;
    let max = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if r.is_infinite() || max == 0.0 {
        return Ok(max);
    }
    // Scale by the maximum so large exponents cannot overflow.
    let sum: f64 = values.iter().map(|v| (v.norm() / max).powf(r)).sum();
    Ok(max * (sum * measure).powf(1.0 / r))
}

pub fn lp_norm(f: &Field, r: f64) -> Result<f64> {
    lp_norm_values(f.values(), f.grid().cell_measure(), r)
}

/// Lorentz quasinorm `‖f‖_{L^{r,q}}` through the decreasing rearrangement.
///
/// Each cell is an atom of measure `μ`, so `f*` is a step function and the
/// integral `∫ (t^{1/r} f*(t))^q dt/t` is summed exactly:
/// `Σ_i v_i^q (r/q) [(iμ)^{q/r} − ((i−1)μ)^{q/r}]`.
pub fn lorentz_norm_values(values: &[Complex64], measure: f64, r: f64, q: f64) -> Result<f64> {
    check_exponent(r, "r")?;
    check_exponent(q, "q")?;
    if r.is_infinite() {
        return Err(FioError::InvalidExponent("Lorentz r must be finite".into()));
    }
    let mut mags: Vec<f64> = values.iter().map(|v| v.norm()).collect();
    mags.sort_by(|a, b| b.total_cmp(a));
    let max = mags.first().copied().unwrap_or(0.0);
    if max == 0.0 {
        return Ok(0.0);
    }
    if q.is_infinite() {
        let sup = mags
            .iter()
            .enumerate()
            .map(|(i, v)| v * ((i + 1) as f64 * measure).powf(1.0 / r))
            .fold(0.0, f64::max);
        return Ok(sup);
    }
    let e = q / r;
    let mut sum = 0.0;
    let mut prev = 0.0;
    for (i, v) in mags.iter().enumerate() {
        let next = ((i + 1) as f64 * measure).powf(e);
        if *v > 0.0 {
            sum += (v / max).powf(q) * (next - prev);
        }
        prev = next;
    }
    Ok(max * (sum * r / q).powf(1.0 / q))
}

pub fn lorentz_norm(f: &Field, r: f64, q: f64) -> Result<f64> {
    lorentz_norm_values(f.values(), f.grid().cell_measure(), r, q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::GridSpec;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn single_cell_indicator() {
        let g = GridSpec::new(1, 4.0, 64).unwrap();
        let f = Field::from_fn(g, |x| if x[0] == 0.0 { c(1.0) } else { c(0.0) }).unwrap();
        assert!((lp_norm(&f, 1.0).unwrap() - g.step()).abs() < 1e-15);
        assert_eq!(lp_norm(&f, f64::INFINITY).unwrap(), 1.0);
    }

    #[test]
    fn gaussian_l2() {
        let g = GridSpec::new(1, 16.0, 256).unwrap();
        let f = Field::from_fn(g, |x| c((-x[0] * x[0] / 2.0).exp())).unwrap();
        let expected = std::f64::consts::PI.powf(0.25);
        assert!((lp_norm(&f, 2.0).unwrap() - expected).abs() < 1e-8);
    }

    #[test]
    fn rejects_bad_exponents() {
        let g = GridSpec::new(1, 1.0, 8).unwrap();
        let f = Field::zeros(g);
        assert!(lp_norm(&f, 0.0).is_err());
        assert!(lp_norm(&f, -1.0).is_err());
        assert!(lorentz_norm(&f, 2.0, 0.0).is_err());
        assert!(lorentz_norm(&f, f64::INFINITY, 1.0).is_err());
        assert_eq!(lorentz_norm(&f, 2.0, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn indicator_lorentz_matches_closed_form() {
        // 16 cells of measure 1/16 form a set of measure one.
        let g = GridSpec::new(1, 8.0, 256).unwrap();
        let f = Field::from_fn(g, |x| if x[0] >= 0.0 && x[0] < 1.0 { c(1.0) } else { c(0.0) }).unwrap();
        assert!((lp_norm(&f, 1.0).unwrap() - 1.0).abs() < 1e-14);
        // Direct rearrangement sum, written independently of the implementation.
        let mu = g.cell_measure();
        let (r, q) = (2.0, 1.0);
        let oracle: f64 = (1..=16)
            .map(|i| (r / q) * ((i as f64 * mu).powf(q / r) - ((i - 1) as f64 * mu).powf(q / r)))
            .sum::<f64>()
            .powf(1.0 / q);
        assert!((oracle - 2.0).abs() < 1e-12);
        assert!((lorentz_norm(&f, r, q).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn lorentz_diagonal_is_lp() {
        let g = GridSpec::new(1, 4.0, 128).unwrap();
        let f = Field::from_fn(g, |x| Complex64::new((-x[0] * x[0]).exp(), x[0].sin() * 0.1)).unwrap();
        for r in [0.5, 1.0, 2.0, 3.5] {
            let a = lorentz_norm(&f, r, r).unwrap();
            let b = lp_norm(&f, r).unwrap();
            assert!((a - b).abs() <= 1e-10 * b);
        }
    }
}
