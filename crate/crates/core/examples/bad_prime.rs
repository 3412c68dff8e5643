//! Recovering Euler factor coefficients at a prime whose coefficients are
//! withheld, and picking the conductor out of a candidate list.

use lfunc::lseries::{dedekind_quadratic, riemann_zeta, ExpFactor};
use lfunc::solver::{search_conductor, solve_bad_prime, HidePrime};
use lfunc::{Number, Precision};
use std::sync::Arc;

fn main() -> lfunc::Result<()> {
    let prec = Precision::new(20);
    let mut desc = dedekind_quadratic(-4, prec.bits())?;
    desc.coeffs = Arc::new(HidePrime::new(desc.coeffs.clone(), 2));
    let sol = solve_bad_prime(&desc, 2, 2, &[], &prec, true)?;
    println!("Q(i) with the prime 2 hidden:");
    for (k, v) in sol.values.iter().enumerate() {
        println!("  a_{} = {:.20}", 2u64.pow(k as u32 + 1), v);
    }
    if let Some(ints) = &sol.integers {
        println!("  rounded: {ints:?}");
    }
    for w in &sol.warnings {
        println!("  {w}");
    }
    println!("  verification residual {:.1e}", sol.verification.max());

    let candidates: Vec<Number> = (1..=4).map(Number::int).collect();
    let zeta = riemann_zeta().with_exp_factor(ExpFactor::Conductor(Number::int(2)));
    let (n, trials) = search_conductor(&zeta, &candidates, &[], &prec)?;
    println!("conductor search for zeta:");
    for t in &trials {
        let outcome = match &t.outcome {
            Ok(r) => format!("residual {r:.1e}"),
            Err(e) => e.clone(),
        };
        println!(
            "  N = {}: {} {}",
            t.conductor,
            outcome,
            if t.passed { "PASS" } else { "" }
        );
    }
    println!("  selected N = {n}");
    Ok(())
}
