//! Values, derivatives, trivial zeros and the pole of the Riemann zeta function.

use lfunc::lseries::{riemann_zeta, LFunction, LValue};
use lfunc::{HPComplex, Precision};

fn main() -> lfunc::Result<()> {
    let prec = Precision::new(40);
    let bits = prec.bits();
    let zeta = LFunction::prepare(&riemann_zeta(), &prec)?;

    let pi2_6 = HPComplex::pi(bits).square().div_i64(6);
    let z2 = zeta.value_f64(2.0, 0.0)?;
    println!("zeta(2)        = {:.40}", z2.value);
    println!("pi^2/6         = {pi2_6:.40}");
    println!("  estimated error {:.1e}, {} terms", z2.est_error, z2.terms_used);

    for (label, re, im, k) in [
        ("zeta(-1)", -1.0, 0.0, 0),
        ("zeta(-2)", -2.0, 0.0, 0),
        ("zeta(0)", 0.0, 0.0, 0),
        ("zeta'(0)", 0.0, 0.0, 1),
        ("zeta''(0)", 0.0, 0.0, 2),
        ("zeta(1/2+14.134725i)", 0.5, 14.134_725_141_734_695, 0),
    ] {
        let s = HPComplex::from_f64(bits, re, im);
        match zeta.l_value(&s, k)? {
            LValue::Value(r) => println!("{label:<22} = {:.30}  (± {:.1e})", r.value, r.est_error),
            LValue::Pole(p) => println!("{label:<22} : pole of order {}", p.order),
        }
    }

    if let LValue::Pole(p) = zeta.l_value(&HPComplex::one(bits), 0)? {
        println!(
            "zeta has a pole of order {} at 1 with residue {:.30}",
            p.order, p.residue
        );
    }

    let lstar = zeta.lstar(&HPComplex::from_i64(bits, 2))?;
    println!(
        "completed zeta at 2 = {:.30} (pi/6 = {:.30})",
        lstar.value,
        HPComplex::pi(bits).div_i64(6)
    );
    Ok(())
}
