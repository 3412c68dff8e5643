//! Derivatives of L(χ_-4, s) and a CSV table along the critical line.

use lfunc::cli::{csv_row, tabulate, CSV_HEADER};
use lfunc::lseries::{dirichlet, LFunction};
use lfunc::{HPComplex, Number, Precision};

fn main() -> lfunc::Result<()> {
    let prec = Precision::new(20);
    let bits = prec.bits();
    let chi: Vec<Number> = ["1", "0", "-1", "0"]
        .iter()
        .map(|v| v.parse())
        .collect::<lfunc::Result<_>>()?;
    let l = LFunction::prepare(&dirichlet(chi, Some(Number::int(1)))?, &prec)?;

    let s = HPComplex::from_f64(bits, 1.0, 0.0);
    for k in 0..4 {
        let v = l.l_value(&s, k)?.value()?;
        println!("d^{k}/ds^{k} L(chi_-4, s) at s = 1: {:.20}", v.value);
    }

    let from = HPComplex::from_f64(bits, 0.5, 0.0);
    let to = HPComplex::from_f64(bits, 0.5, 12.0);
    println!("{CSV_HEADER}");
    for (s, v, est) in tabulate(&l, &from, &to, 6, 0)? {
        println!("{}", csv_row(&s, v.as_ref(), est, 12));
    }
    Ok(())
}
