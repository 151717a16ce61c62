//! Fixed smooth profiles shared by the catalog and the decompositions.

/// `exp(t²/(t²−1))` on `|t| < 1`, zero elsewhere; `C^∞`, even, `bump(0) = 1`.
pub fn bump(t: f64) -> f64 {
    let t2 = t * t;
    if t2 >= 1.0 {
        0.0
    } else {
        (t2 / (t2 - 1.0)).exp()
    }
}

fn flat(u: f64) -> f64 {
    if u <= 0.0 {
        0.0
    } else {
        (-1.0 / u).exp()
    }
}

/// Smooth step: 1 on `t ≤ 1`, 0 on `t ≥ 2`, monotone in between.
pub fn smooth_step(t: f64) -> f64 {
    if t <= 1.0 {
        return 1.0;
    }
    if t >= 2.0 {
        return 0.0;
    }
    let a = flat(2.0 - t);
    let b = flat(t - 1.0);
    a / (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bump_profile() {
        assert_eq!(bump(0.0), 1.0);
        assert_eq!(bump(1.0), 0.0);
        assert_eq!(bump(-1.5), 0.0);
        assert!((bump(0.5) - (-1.0f64 / 3.0).exp()).abs() < 1e-15);
        assert_eq!(bump(0.3), bump(-0.3));
    }

    #[test]
    fn smooth_step_profile() {
        assert_eq!(smooth_step(0.2), 1.0);
        assert_eq!(smooth_step(2.0), 0.0);
        assert!((smooth_step(1.5) - 0.5).abs() < 1e-15);
        let mut prev = 1.0;
        for i in 0..=100 {
            let v = smooth_step(1.0 + i as f64 / 100.0);
            assert!(v <= prev);
            prev = v;
        }
    }
}
