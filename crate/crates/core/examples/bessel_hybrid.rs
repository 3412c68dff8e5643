//! φ(t) = 4K₀(2t) for the Γ-factor Γ(s/2)²: the automatic hybrid schedule,
//! a hand-picked one, and both expansions side by side near the crossover.

use lfunc::mellin_large::PhiEvaluator;
use lfunc::mellin_small::build_shape_from_numbers;
use lfunc::{HPComplex, Number, Precision};

fn main() -> lfunc::Result<()> {
    let prec = Precision::new(30);
    let zero: Number = "0".parse()?;
    let shape = build_shape_from_numbers(&[zero.clone(), zero], prec.bits(), None)?;

    let auto = PhiEvaluator::new(&shape, &prec)?;
    let sch = auto.schedule();
    println!("automatic schedule (eps = 1e{:.1})", sch.eps_log10);
    println!(
        "  thresholds {:?}",
        sch.thresholds.iter().map(|t| format!("{t:.3}")).collect::<Vec<_>>()
    );
    println!("  orders     {:?}", sch.orders);
    println!("  crossover residual 1e{:.1}", sch.crossover_residual_log10);

    let eps = (0.5f64).log10() - 10.0;
    let fixed = PhiEvaluator::with_schedule(&shape, &[12.0, 7.0, 2.0], &[6, 20], eps, &Precision::new(25))?;
    println!(
        "schedule (12, 7, 2)/(6, 20): crossover residual 1e{:.2}",
        fixed.schedule().crossover_residual_log10
    );

    println!("{:>6}  {:>40}  {:>40}", "t", "small-t series", "convergent n=20");
    for t in [1.0, 2.0, 3.0, 5.0] {
        let tt = HPComplex::from_f64(prec.bits(), t, 0.0);
        let wide = PhiEvaluator::with_schedule(&shape, &[t], &[], -40.0, &prec)?;
        println!(
            "{t:>6}  {:>40}  {:>40}",
            wide.taylor(&tt)?.re().to_string_radix(10, Some(30)),
            auto.convergent(&tt, 20)?.re().to_string_radix(10, Some(30)),
        );
    }
    for t in [0.5, 3.0, 10.0, 20.0] {
        println!("phi({t}) = {}", auto.eval_f64(t)?.to_string_digits(30));
    }
    Ok(())
}
