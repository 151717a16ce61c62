//! Admissible-order formulas in exact or floating arithmetic.
//!
//! Every formula is generic over [`Scalar`], implemented for `f64` and for
//! `Ratio<i128>`. Exponents are extended reals ([`Ext`]) with `1/∞ = 0`.

mod parse;

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{FioError, Result};

pub use parse::{parse_exponent, parse_rational};

/// Exact rational type used by the threshold layer.
pub type Rational = Ratio<i128>;

/// Field operations the formulas need.
pub trait Scalar:
    Clone
    + PartialOrd
    + fmt::Debug
    + fmt::Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_int(v: i64) -> Self;
    fn to_f64(&self) -> f64;

    fn zero() -> Self {
        Self::from_int(0)
    }

    fn one() -> Self {
        Self::from_int(1)
    }

    fn half() -> Self {
        Self::one() / Self::from_int(2)
    }

    fn abs(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }
}

impl Scalar for f64 {
    fn from_int(v: i64) -> Self {
        v as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for Rational {
    fn from_int(v: i64) -> Self {
        Ratio::from_integer(v as i128)
    }

    fn to_f64(&self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }
}

fn max<T: Scalar>(a: T, b: T) -> T {
    if a >= b {
        a
    } else {
        b
    }
}

/// An extended positive real.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Ext<T> {
    Finite(T),
    Infinite,
}

impl<T: Scalar> Ext<T> {
    pub fn finite(v: T) -> Self {
        Ext::Finite(v)
    }

    pub fn int(v: i64) -> Self {
        Ext::Finite(T::from_int(v))
    }

    /// `1/p` with `1/∞ = 0`.
    pub fn recip(&self) -> T {
        match self {
            Ext::Finite(v) => T::one() / v.clone(),
            Ext::Infinite => T::zero(),
        }
    }

    /// The exponent with reciprocal `r`; zero maps to `∞`.
    pub fn from_recip(r: T) -> Self {
        if r == T::zero() {
            Ext::Infinite
        } else {
            Ext::Finite(T::one() / r)
        }
    }

    /// Hölder conjugate `p′` with `1/p + 1/p′ = 1`.
    pub fn conjugate(&self) -> Self {
        Ext::from_recip(T::one() - self.recip())
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Ext::Infinite)
    }

    /// Ordering through reciprocals, so `∞` is the largest value.
    pub fn lt(&self, other: &Self) -> bool {
        self.recip() > other.recip()
    }

    pub fn ge(&self, other: &Self) -> bool {
        !self.lt(other)
    }

    pub fn min(&self, other: &Self) -> Self {
        if self.lt(other) {
            self.clone()
        } else {
            other.clone()
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Ext::Finite(v) => v.to_f64(),
            Ext::Infinite => f64::INFINITY,
        }
    }

    fn check_range(&self, what: &str) -> Result<()> {
        if let Ext::Finite(v) = self {
            if *v < T::one() {
                return Err(FioError::InvalidExponent(format!("{what} = {v} outside [1, ∞]")));
            }
        }
        Ok(())
    }
}

impl<T: Scalar> fmt::Display for Ext<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ext::Finite(v) => write!(f, "{v}"),
            Ext::Infinite => write!(f, "inf"),
        }
    }
}

impl Ext<Rational> {
    pub fn to_float(&self) -> Ext<f64> {
        match self {
            Ext::Finite(v) => Ext::Finite(v.to_f64()),
            Ext::Infinite => Ext::Infinite,
        }
    }
}

/// `(p, q, r)` tied by `1/r = 1/p + 1/q`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentTriple<T> {
    pub p: Ext<T>,
    pub q: Ext<T>,
    pub r: Ext<T>,
}

impl<T: Scalar> ExponentTriple<T> {
    pub fn holder(p: Ext<T>, q: Ext<T>) -> Self {
        let r = Ext::from_recip(p.recip() + q.recip());
        ExponentTriple { p, q, r }
    }

    /// `s = min(2, p, q)`.
    pub fn s(&self) -> Ext<T> {
        self.p.min(&self.q).min(&Ext::int(2))
    }
}

/// Which printed branch of the `⚓` formula produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ArcBranch {
    /// `1 ≤ p < 2`, or `p ≥ 2` and `1 ≤ q < p′`.
    Low,
    /// `2 ≤ p, q`.
    Square,
    /// `p > 2` and `p′ ≤ q ≤ 2`.
    Middle,
}

impl fmt::Display for ArcBranch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ArcBranch::Low => "branch-1 (p<2 or q<p')",
            ArcBranch::Square => "branch-2 (p,q>=2)",
            ArcBranch::Middle => "branch-3 (p>2, p'<=q<2)",
        };
        f.write_str(s)
    }
}

fn check_rho<T: Scalar>(rho: &T) -> Result<()> {
    if *rho < T::zero() || *rho > T::one() {
        return Err(FioError::InvalidExponent(format!("ρ = {rho} outside [0, 1]")));
    }
    Ok(())
}

fn check_n(n: u32) -> Result<()> {
    if n == 0 {
        return Err(FioError::InvalidExponent("dimension must be at least 1".into()));
    }
    Ok(())
}

/// The three-branch order threshold `⚓(ρ, p, q)` on `ℝ^n`.
pub fn m_arc<T: Scalar>(rho: &T, p: &Ext<T>, q: &Ext<T>, n: u32) -> Result<(T, ArcBranch)> {
    check_rho(rho)?;
    check_n(n)?;
    p.check_range("p")?;
    q.check_range("q")?;
    let two = Ext::int(2);
    let nn = T::from_int(n as i64);
    let n1 = T::from_int(n as i64 - 1);
    let drho = rho.clone() - T::one();
    let (ip, iq) = (p.recip(), q.recip());
    let pc = p.conjugate();
    let branch = if p.lt(&two) || q.lt(&pc) {
        ArcBranch::Low
    } else if q.ge(&two) {
        ArcBranch::Square
    } else {
        ArcBranch::Middle
    };
    let value = match branch {
        ArcBranch::Low => {
            let imin = max(ip.clone(), iq);
            -(n1 / T::from_int(2)) * (ip + imin.clone()) + nn * drho * imin
        }
        ArcBranch::Square => nn * drho / T::from_int(2) - n1 * (T::half() - iq),
        ArcBranch::Middle => {
            let denom = T::one() - T::from_int(2) * ip;
            if denom == T::zero() {
                return Err(FioError::ThresholdDefect("p = 2 reached the middle branch".into()));
            }
            nn * drho * iq.clone() - n1 / denom * (iq - T::half())
        }
    };
    Ok((value, branch))
}

/// The Lorentz-endpoint threshold `𝓜(ρ, p, q)`, defined for `1 < q < 2`.
pub fn m_script<T: Scalar>(rho: &T, p: &Ext<T>, q: &Ext<T>, n: u32) -> Result<T> {
    check_rho(rho)?;
    check_n(n)?;
    p.check_range("p")?;
    match q {
        Ext::Finite(v) if *v > T::one() && *v < T::from_int(2) => {}
        _ => return Err(FioError::InvalidExponent(format!("q = {q} outside (1, 2)"))),
    }
    let nn = T::from_int(n as i64);
    let n1 = T::from_int(n as i64 - 1);
    let iq = q.recip();
    Ok(nn * (rho.clone() - T::one()) * iq.clone() - n1 / (T::one() + p.recip()) * (iq - T::half()))
}

/// Order bound of the first linear theorem, with `s = min(2, p, q)`.
pub fn theorem_a_order<T: Scalar>(rho: &T, p: &Ext<T>, q: &Ext<T>, n: u32) -> Result<T> {
    if *rho > T::one() {
        return Err(FioError::InvalidExponent(format!("ρ = {rho} exceeds 1")));
    }
    check_n(n)?;
    p.check_range("p")?;
    q.check_range("q")?;
    let triple = ExponentTriple::holder(p.clone(), q.clone());
    let s = triple.s();
    let is = s.recip();
    let inner = s.conjugate().min(p).recip();
    let nn = T::from_int(n as i64);
    let n1 = T::from_int(n as i64 - 1);
    Ok(-(n1 / T::from_int(2)) * (is.clone() + inner) + nn * (rho.clone() - T::one()) * is)
}

/// Order bound for pseudodifferential operators: `n(ρ−1)/s`.
pub fn pseudodifferential_order<T: Scalar>(rho: &T, p: &Ext<T>, q: &Ext<T>, n: u32) -> Result<T> {
    check_n(n)?;
    p.check_range("p")?;
    q.check_range("q")?;
    let s = ExponentTriple::holder(p.clone(), q.clone()).s();
    Ok(T::from_int(n as i64) * (rho.clone() - T::one()) * s.recip())
}

/// `−(n−1) Σ_j |1/q_j − 1/2|`.
pub fn theorem_d_order<T: Scalar>(qs: &[Ext<T>], n: u32) -> Result<T> {
    check_n(n)?;
    let mut sum = T::zero();
    for q in qs {
        q.check_range("q")?;
        sum = sum + (q.recip() - T::half()).abs();
    }
    Ok(-T::from_int(n as i64 - 1) * sum)
}

/// `⚓(ρ, ∞, q₁) + ⚓(ρ, q₁, q₂)`, the product-amplitude bilinear bound.
pub fn bilinear_product_order<T: Scalar>(rho: &T, q1: &Ext<T>, q2: &Ext<T>, n: u32) -> Result<T> {
    let (a, _) = m_arc(rho, &Ext::Infinite, q1, n)?;
    let (b, _) = m_arc(rho, q1, q2, n)?;
    Ok(a + b)
}

/// Lower bound on `β` for the oscillatory maximal estimate:
/// `αn + (n−1)(1 − 1/r)`.
pub fn oscillatory_beta_threshold<T: Scalar>(alpha: &T, r: &Ext<T>, n: u32) -> Result<T> {
    check_n(n)?;
    Ok(alpha.clone() * T::from_int(n as i64) + T::from_int(n as i64 - 1) * (T::one() - r.recip()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BilinearAdmissibility<T> {
    pub ok: bool,
    pub r: Ext<T>,
    pub r2: Ext<T>,
    pub first_bound: T,
    pub second_bound: T,
    /// `[⚓, 𝓜)` for the second factor when `1 < q₂ < 2 ≤ r₂`.
    pub lorentz_window: Option<(T, T)>,
}

/// Order conditions for the bilinear theorem with `q₁ ≥ q₂`.
#[allow(clippy::too_many_arguments)]
pub fn bilinear_admissible<T: Scalar>(
    m1: &T,
    m2: &T,
    rho1: &T,
    rho2: &T,
    p: &Ext<T>,
    q1: &Ext<T>,
    q2: &Ext<T>,
    n: u32,
) -> Result<BilinearAdmissibility<T>> {
    if q1.lt(&p.conjugate()) {
        return Err(FioError::Hypothesis(format!(
            "hypothesis q₁ ≥ p′ violated: q₁ = {q1}, p′ = {}",
            p.conjugate()
        )));
    }
    if q1.lt(q2) {
        return Err(FioError::Hypothesis(format!(
            "expected q₁ = max(q₁, q₂), got q₁ = {q1} < q₂ = {q2}"
        )));
    }
    let r = Ext::from_recip(p.recip() + q1.recip() + q2.recip());
    let r2 = Ext::from_recip(p.recip() + q1.recip());
    let (first_bound, _) = m_arc(rho1, p, q1, n)?;
    let (second_bound, _) = m_arc(rho2, &r2, q2, n)?;
    let ok = *m1 < first_bound && *m2 < second_bound;
    let two = Ext::int(2);
    let lorentz_window = if q2.lt(&two) && r2.ge(&two) && Ext::int(1).lt(q2) {
        Some((second_bound.clone(), m_script(rho2, &r2, q2, n)?))
    } else {
        None
    };
    Ok(BilinearAdmissibility {
        ok,
        r,
        r2,
        first_bound,
        second_bound,
        lorentz_window,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultilinearAdmissibility<T> {
    pub ok: bool,
    pub r: Ext<T>,
    /// `Σ m_j / min m_j`.
    pub ratio: T,
    /// `⚓(1, p Σm/m_j, q_j)` per factor.
    pub bounds: Vec<T>,
}

/// Hypotheses of the multilinear theorem for orders `m⃗ < 0`.
pub fn theorem_d_admissible<T: Scalar>(
    ms: &[T],
    p: &Ext<T>,
    qs: &[Ext<T>],
    n: u32,
) -> Result<MultilinearAdmissibility<T>> {
    if ms.is_empty() || ms.len() != qs.len() {
        return Err(FioError::Hypothesis("need one order per exponent".into()));
    }
    if let Some(m) = ms.iter().find(|m| **m >= T::zero()) {
        return Err(FioError::Hypothesis(format!("order {m} is not negative")));
    }
    p.check_range("p")?;
    let sum = ms.iter().cloned().fold(T::zero(), |a, b| a + b);
    let min = ms.iter().cloned().fold(ms[0].clone(), |a, b| if b < a { b } else { a });
    let ratio = sum.clone() / min;
    let mut ok = ratio >= T::from_int(2) * p.recip();
    let mut bounds = Vec::with_capacity(ms.len());
    let mut ir = p.recip();
    for (m, q) in ms.iter().zip(qs) {
        let pj = match p {
            Ext::Infinite => Ext::Infinite,
            Ext::Finite(v) => Ext::Finite(v.clone() * sum.clone() / m.clone()),
        };
        let (b, _) = m_arc(&T::one(), &pj, q, n)?;
        ok &= *m < b;
        bounds.push(b);
        ir = ir + q.recip();
    }
    Ok(MultilinearAdmissibility {
        ok,
        r: Ext::from_recip(ir),
        ratio,
        bounds,
    })
}

/// Every threshold for one `(ρ, p, q, n)`, as reported by the CLI.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdTable {
    pub rho: String,
    pub p: String,
    pub q: String,
    pub n: u32,
    pub m_arc: String,
    pub m_arc_decimal: f64,
    pub branch: ArcBranch,
    pub m_script: Option<String>,
    pub theorem_a: String,
    pub theorem_a_decimal: f64,
    pub pseudodifferential: String,
}

pub fn threshold_table(rho: &Rational, p: &Ext<Rational>, q: &Ext<Rational>, n: u32) -> Result<ThresholdTable> {
    let (arc, branch) = m_arc(rho, p, q, n)?;
    let script = m_script(rho, p, q, n).ok().map(|v| v.to_string());
    let a = theorem_a_order(rho, p, q, n)?;
    Ok(ThresholdTable {
        rho: rho.to_string(),
        p: p.to_string(),
        q: q.to_string(),
        n,
        m_arc_decimal: arc.to_f64(),
        m_arc: arc.to_string(),
        branch,
        m_script: script,
        theorem_a_decimal: a.to_f64(),
        theorem_a: a.to_string(),
        pseudodifferential: pseudodifferential_order(rho, p, q, n)?.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(a: i128, b: i128) -> Rational {
        Ratio::new(a, b)
    }

    fn e(a: i128, b: i128) -> Ext<Rational> {
        Ext::Finite(r(a, b))
    }

    const INF: Ext<Rational> = Ext::Infinite;

    #[test]
    fn conjugates() {
        assert_eq!(INF.conjugate(), e(1, 1));
        assert_eq!(e(1, 1).conjugate(), INF);
        assert_eq!(e(3, 1).conjugate(), e(3, 2));
        assert_eq!(e(2, 1).conjugate(), e(2, 1));
    }

    #[test]
    fn identities_from_the_endpoint_remark() {
        let one = r(1, 1);
        for n in 1..=5u32 {
            let a = |p: &Ext<Rational>, q: &Ext<Rational>| m_arc(&one, p, q, n).unwrap().0;
            let half_n1 = r(n as i128 - 1, 2);
            assert_eq!(a(&e(2, 1), &e(2, 1)), r(0, 1));
            assert_eq!(a(&INF, &e(2, 1)) + a(&e(2, 1), &e(2, 1)), r(0, 1));
            assert_eq!(a(&INF, &INF) + a(&INF, &e(2, 1)), -half_n1);
            assert_eq!(a(&INF, &INF) + a(&INF, &e(1, 1)), r(1 - n as i128, 1));
        }
        assert_eq!(m_arc(&r(1, 1), &INF, &e(1, 1), 3).unwrap().1, ArcBranch::Middle);
    }

    #[test]
    fn branch_formulas_by_hand() {
        // p = 3/2: branch 1 with 1/min(p,q) = max(2/3, 1/q).
        let (v, b) = m_arc(&r(1, 2), &e(3, 2), &e(4, 1), 2).unwrap();
        assert_eq!(b, ArcBranch::Low);
        assert_eq!(v, -r(1, 2) * (r(2, 3) + r(2, 3)) + r(2, 1) * r(-1, 2) * r(2, 3));
        // p = 4, q = 3: branch 2.
        let (v, b) = m_arc(&r(1, 2), &e(4, 1), &e(3, 1), 2).unwrap();
        assert_eq!(b, ArcBranch::Square);
        assert_eq!(v, r(-1, 2) - (r(1, 2) - r(1, 3)));
        // p = 4 (p' = 4/3), q = 3/2: branch 3.
        let (v, b) = m_arc(&r(1, 1), &e(4, 1), &e(3, 2), 2).unwrap();
        assert_eq!(b, ArcBranch::Middle);
        assert_eq!(v, -(r(1, 1) / r(1, 2)) * (r(2, 3) - r(1, 2)));
        // p = 4, q = 5/4 < p': back to branch 1.
        assert_eq!(m_arc(&r(1, 1), &e(4, 1), &e(5, 4), 2).unwrap().1, ArcBranch::Low);
    }

    #[test]
    fn m_script_examples() {
        assert_eq!(m_script(&r(1, 1), &INF, &e(3, 2), 2).unwrap(), r(-1, 6));
        assert!(m_script(&r(1, 1), &INF, &e(2, 1), 2).is_err());
        assert!(m_script(&r(1, 1), &INF, &e(1, 1), 2).is_err());
    }

    #[test]
    fn theorem_a_examples() {
        assert_eq!(theorem_a_order(&r(1, 1), &e(2, 1), &e(2, 1), 2).unwrap(), r(-1, 2));
        for n in 1..4 {
            assert_eq!(theorem_a_order(&r(1, 1), &INF, &INF, n).unwrap(), r(1 - n as i128, 2));
        }
        assert_eq!(pseudodifferential_order(&r(1, 2), &INF, &INF, 2).unwrap(), r(-1, 2));
    }

    #[test]
    fn theorem_d_examples() {
        assert_eq!(theorem_d_order(&[e(2, 1), e(2, 1), e(2, 1)], 3).unwrap(), r(0, 1));
        assert_eq!(theorem_d_order(&[INF, e(1, 1)], 3).unwrap(), r(-2, 1));
        assert_eq!(theorem_d_order(&[e(4, 1), e(4, 1)], 2).unwrap(), r(-1, 2));
    }

    #[test]
    fn bilinear_examples() {
        let one = r(1, 1);
        let res = bilinear_admissible(&-one, &-one, &one, &one, &INF, &e(2, 1), &e(2, 1), 2).unwrap();
        assert!(res.ok);
        assert_eq!(res.r, e(1, 1));
        assert_eq!(res.r2, e(2, 1));
        assert!(res.lorentz_window.is_none());
        assert!(matches!(
            bilinear_admissible(&-one, &-one, &one, &one, &e(2, 1), &e(1, 1), &e(1, 1), 2),
            Err(FioError::Hypothesis(_))
        ));
        let w = bilinear_admissible(&-one, &-one, &one, &one, &INF, &e(2, 1), &e(3, 2), 2).unwrap();
        let (lo, hi) = w.lorentz_window.unwrap();
        assert!(lo <= hi);
    }

    #[test]
    fn multilinear_examples() {
        let m = r(-1, 2);
        let res = theorem_d_admissible(&[m, m], &INF, &[e(2, 1), e(2, 1)], 2).unwrap();
        assert!(res.ok);
        assert_eq!(res.r, e(1, 1));
        let res = theorem_d_admissible(&[r(-3, 1), r(-1, 1)], &e(1, 1), &[e(2, 1), e(2, 1)], 2).unwrap();
        assert_eq!(res.ratio, r(4, 3));
        assert!(!res.ok);
        let res = theorem_d_admissible(&[r(-1, 1); 3], &INF, &[e(2, 1), e(2, 1), e(2, 1)], 2).unwrap();
        assert!(res.ok);
        assert_eq!(res.r, e(2, 3));
        // Direct evaluation of the square branch at (∞, 2): n(ρ−1)/2 − (n−1)(1/2 − 1/2) = 0.
        assert_eq!(res.bounds, vec![r(0, 1); 3]);
        assert!(theorem_d_admissible(&[r(0, 1)], &INF, &[e(2, 1)], 2).is_err());
    }

    #[test]
    fn float_api_matches_rational_api() {
        let (exact, _) = m_arc(&r(3, 4), &e(5, 1), &e(7, 4), 3).unwrap();
        let (float, _) = m_arc(&0.75, &Ext::Finite(5.0), &Ext::Finite(1.75), 3).unwrap();
        assert!((exact.to_f64() - float).abs() < 1e-12);
    }

    #[test]
    fn oscillatory_threshold() {
        assert_eq!(oscillatory_beta_threshold(&r(1, 2), &e(1, 1), 2).unwrap(), r(1, 1));
    }
}
