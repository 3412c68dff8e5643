//! Dedekind zeta functions of quadratic fields: the factorization
//! ζ_K = ζ · L(χ_D), and residues of a real quadratic field solved for.

use lfunc::lseries::{dedekind_quadratic, dirichlet, riemann_zeta, LFunction};
use lfunc::solver::{default_samples, solve_sign_residues};
use lfunc::{HPComplex, Number, Precision};

fn main() -> lfunc::Result<()> {
    let prec = Precision::new(25);
    let bits = prec.bits();

    let zk = LFunction::prepare(&dedekind_quadratic(-4, bits)?, &prec)?;
    let zeta = LFunction::prepare(&riemann_zeta(), &prec)?;
    let chi: Vec<Number> = ["1", "0", "-1", "0"]
        .iter()
        .map(|v| v.parse())
        .collect::<lfunc::Result<_>>()?;
    let l = LFunction::prepare(&dirichlet(chi, Some(Number::int(1)))?, &prec)?;
    println!("Q(i): zeta_K(s) - zeta(s) L(chi_-4, s)");
    for (re, im) in [(2.0, 0.0), (3.0, 0.0), (0.5, 2.0), (-0.5, 1.0)] {
        let a = zk.value_f64(re, im)?.value;
        let b = &zeta.value_f64(re, im)?.value * &l.value_f64(re, im)?.value;
        println!("  s = {re}+{im}i: |difference| = {:.1e}", (&a - &b).abs_f64());
    }

    // Q(√5): h = 1, fundamental unit (1+√5)/2. The completed function has
    // residue 2 log ε at s = 1.
    let desc = dedekind_quadratic(5, bits)?;
    let sol = solve_sign_residues(&desc, &default_samples(5), &prec)?;
    let golden = (&HPComplex::one(bits) + &HPComplex::from_i64(bits, 5).sqrt()).div_i64(2);
    let expected = golden.ln().mul_i64(2);
    for (loc, r) in &sol.residues {
        println!("Q(sqrt 5): residue at {:.3} = {:.25}", loc, r);
    }
    println!("2 log((1+sqrt 5)/2)       = {expected:.25}");
    Ok(())
}
