//! L(Δ, s) for the weight 12 cusp form: coefficients, functional equation,
//! and values at the critical integers.

use lfunc::lseries::{ramanujan_delta, LFunction, Tau};
use lfunc::Precision;

fn main() -> lfunc::Result<()> {
    let tau = Tau::new().values(12);
    println!(
        "tau(1..12) = {:?}",
        tau.iter().map(|t| t.to_string()).collect::<Vec<_>>()
    );

    let prec = Precision::new(25);
    let l = LFunction::prepare(&ramanujan_delta(), &prec)?;
    for t in [1.1, 1.5, 2.5] {
        println!(
            "functional equation residual at t = {t}: {:.1e}",
            l.feq_residual_f64(t)?.value.abs_f64()
        );
    }
    for k in 1..=11 {
        let v = l.value_f64(k as f64, 0.0)?;
        println!("L(Delta, {k:>2}) = {:.25}", v.value);
    }
    let v = l.value_f64(6.0, 10.0)?;
    println!("L(Delta, 6+10i) = {:.25}", v.value);
    for w in &v.warnings {
        println!("  {w}");
    }
    Ok(())
}
