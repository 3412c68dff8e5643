//! Dirichlet L-functions: a real character with a known sign and a complex
//! one whose root number is recovered from the functional equation.

use lfunc::lseries::{dirichlet, LFunction};
use lfunc::solver::{default_samples, solve_sign_residues};
use lfunc::{HPComplex, Number, Precision};

fn chars(values: &[&str]) -> lfunc::Result<Vec<Number>> {
    values.iter().map(|v| v.parse()).collect()
}

fn main() -> lfunc::Result<()> {
    let prec = Precision::new(30);
    let bits = prec.bits();

    let chi4 = dirichlet(chars(&["1", "0", "-1", "0"])?, Some(Number::int(1)))?;
    let l = LFunction::prepare(&chi4, &prec)?;
    let v = l.value_f64(1.0, 0.0)?;
    println!("L(chi_-4, 1) = {:.30}", v.value);
    println!("pi/4         = {:.30}", HPComplex::pi(bits).div_i64(4));
    let catalan = l.value_f64(2.0, 0.0)?;
    println!("Catalan      = {:.30}", catalan.value);

    // χ mod 5 with χ(2) = i; odd, not real, so the dual series is its conjugate.
    let chi5 = dirichlet(chars(&["1", "i", "-i", "-1", "0"])?, None)?;
    let sol = solve_sign_residues(&chi5, &default_samples(4), &prec)?;
    println!("root number of chi mod 5 = {:.30}", sol.sign);
    println!("  |sign| - 1 = {:.1e}", sol.sign.abs_f64() - 1.0);
    println!(
        "  verification residual {:.1e} (tolerance {:.0e})",
        sol.verification.max(),
        sol.verification.tolerance
    );
    let l5 = LFunction::prepare(&sol.descriptor, &prec)?;
    println!("L(chi_5, 1) = {:.30}", l5.value_f64(1.0, 0.0)?.value);
    Ok(())
}
