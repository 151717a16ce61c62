//! Exact admissible orders for a few exponent choices.

use fio_lab::thresholds::{
    bilinear_admissible, m_arc, parse_exponent, theorem_d_order, threshold_table, Ext, Rational,
};

fn main() -> fio_lab::Result<()> {
    let one = Rational::from_integer(1);
    for (p, q) in [("inf", "2"), ("2", "2"), ("inf", "inf"), ("inf", "1"), ("4", "3/2")] {
        let t = threshold_table(&one, &parse_exponent(p)?, &parse_exponent(q)?, 2)?;
        println!(
            "p = {p:>3}, q = {q:>3}: order {} ({:?} branch), linear order {}",
            t.m_arc, t.branch, t.theorem_a
        );
    }

    let two = Ext::int(2);
    let (m, _) = m_arc(&Rational::new(1, 2), &Ext::Infinite, &two, 3)?;
    println!("rho = 1/2, p = inf, q = 2, n = 3: {m}");

    let ok = bilinear_admissible(
        &Rational::new(-1, 1),
        &Rational::new(-1, 2),
        &one,
        &one,
        &Ext::Infinite,
        &two,
        &two,
        2,
    )?;
    println!(
        "bilinear pair (-1, -1/2): admissible = {}, target exponent r = {}",
        ok.ok, ok.r
    );

    let order = theorem_d_order(&[two.clone(), two.clone(), two], 2)?;
    println!("trilinear order at q = 2: {order}");
    Ok(())
}
