use super::TruncatedLaurentSeries;
use crate::mellin_small::GammaFactorShape;
use crate::numerics::{
    bernoulli_even, constants, digits_to_bits, near_nonpositive_integer, stirling_plan, HPComplex, Precision,
};

/// Laurent expansion of `Γ(z0 + ε)` with `terms` coefficients.
///
/// At a nonpositive integer the valuation is −1; elsewhere 0.
pub fn gamma_series(z0: &HPComplex, terms: usize, prec: &Precision) -> TruncatedLaurentSeries {
    let terms = terms.max(1);
    let plan_digits = prec.working_digits() + 3 + terms as u32;
    let bits = digits_to_bits(plan_digits).max(z0.prec());
    let plan = stirling_plan(plan_digits);

    let pole = near_nonpositive_integer(z0, prec.snap_log10());
    let z0 = match pole {
        Some(n) => HPComplex::from_i64(bits, n),
        None => z0.with_prec(bits),
    };
    let re = z0.re().to_f64();
    let shift = if re < plan.radius {
        (plan.radius - re).ceil() as i64
    } else {
        0
    };

    let w = z0.add_i64(shift);
    let u = TruncatedLaurentSeries::from_poly(&[w, HPComplex::one(bits)], terms, bits);
    let snap = prec.snap_log10();

    // ln Γ(u) = (u − ½) ln u − u + ½ ln 2π + Σ B_2k / (2k(2k−1)) u^(1−2k)
    let half = HPComplex::from_f64(bits, 0.5, 0.0);
    let lnu = u.ln().expect("shifted argument has positive real part");
    let mut lg = u
        .sub(&TruncatedLaurentSeries::constant(half.clone(), terms))
        .mul(&lnu)
        .sub(&u);
    let c = &constants(&Precision::new(plan_digits)).ln_2pi * &half;
    lg = lg.add(&TruncatedLaurentSeries::constant(c, terms));
    let one = TruncatedLaurentSeries::constant(HPComplex::one(bits), terms);
    let inv = one.div(&u, snap).expect("shifted argument is far from zero");
    let inv2 = inv.mul(&inv);
    let mut pow = inv;
    let bern = bernoulli_even(plan.terms + 1);
    for (k, b) in bern.iter().enumerate().skip(1).take(plan.terms) {
        let k = k as i64;
        let coef = HPComplex::from_rational(bits, b).div_i64(2 * k * (2 * k - 1));
        lg = lg.add(&pow.scale(&coef));
        pow = pow.mul(&inv2);
    }
    let shifted_gamma = lg.exp().expect("ln Γ series has no pole");

    // Divide by (z0+ε)(z0+1+ε)…(z0+shift−1+ε); the factor that vanishes at a pole is ε itself.
    let mut denom = TruncatedLaurentSeries::constant(HPComplex::one(bits), terms);
    for i in 0..shift {
        if pole == Some(-i) {
            continue;
        }
        let f = TruncatedLaurentSeries::from_poly(&[z0.add_i64(i), HPComplex::one(bits)], terms, bits);
        denom = denom.mul(&f);
    }
    let g = shifted_gamma.div(&denom, snap).expect("nonvanishing factors");
    let g = if pole.is_some() { g.shifted(-1) } else { g };
    let out_bits = prec.bits().max(bits);
    TruncatedLaurentSeries::new(
        g.valuation(),
        g.coeffs().iter().map(|c| c.with_prec(out_bits)).collect(),
    )
}

/// Laurent expansion of `γ(s0 + ε) = ∏ Γ((s0 + λ_j + ε)/2)`.
pub fn gamma_factor_series(
    shape: &GammaFactorShape,
    s0: &HPComplex,
    terms: usize,
    prec: &Precision,
) -> TruncatedLaurentSeries {
    let bits = prec.bits();
    let half = HPComplex::from_f64(bits, 0.5, 0.0);
    let mut acc = TruncatedLaurentSeries::constant(HPComplex::one(bits), terms.max(1));
    for lambda in shape.lambdas() {
        let z = &(s0 + lambda) * &half;
        let g = gamma_series(&z, terms, prec).scale_variable(&half);
        acc = acc.mul(&g);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mellin_small::build_shape;
    use crate::numerics::gamma;

    fn prec() -> Precision {
        Precision::new(40)
    }

    fn close(a: &HPComplex, b: &HPComplex, tol: f64) -> bool {
        (a - b).log10_abs() - b.log10_abs().max(0.0) < tol
    }

    #[test]
    fn gamma_at_one() {
        let p = prec();
        let bits = p.bits();
        let g = gamma_series(&HPComplex::one(bits), 2, &p);
        let eg = constants(&p).euler_gamma;
        assert_eq!(g.valuation(), 0);
        assert!(close(&g.coefficient(0).unwrap(), &HPComplex::one(bits), -45.0));
        assert!(close(&g.coefficient(1).unwrap(), &-&eg, -45.0));
    }

    #[test]
    fn gamma_at_zero_and_minus_one() {
        let p = prec();
        let bits = p.bits();
        let eg = constants(&p).euler_gamma;
        let g = gamma_series(&HPComplex::zero(bits), 2, &p);
        assert_eq!(g.valuation(), -1);
        assert!(close(&g.coefficient(-1).unwrap(), &HPComplex::one(bits), -45.0));
        assert!(close(&g.coefficient(0).unwrap(), &-&eg, -45.0));
        let g = gamma_series(&HPComplex::from_i64(bits, -1), 1, &p);
        assert_eq!(g.valuation(), -1);
        assert!(close(
            &g.coefficient(-1).unwrap(),
            &HPComplex::from_i64(bits, -1),
            -45.0
        ));
    }

    #[test]
    fn second_coefficient_at_one() {
        // Γ''(1)/2 = (γ² + π²/6)/2
        let p = prec();
        let bits = p.bits();
        let c = constants(&p);
        let g = gamma_series(&HPComplex::one(bits), 3, &p);
        let want = (&c.euler_gamma.square() + &c.pi.square().div_i64(6)).div_i64(2);
        assert!(close(&g.coefficient(2).unwrap(), &want, -45.0));
    }

    #[test]
    fn factor_series_examples() {
        let p = prec();
        let bits = p.bits();
        let zeta = build_shape(&[HPComplex::zero(bits)], None).unwrap();
        let g = gamma_factor_series(&zeta, &HPComplex::from_i64(bits, 2), 3, &p);
        assert_eq!(g.valuation(), 0);
        assert!(close(&g.coefficient(0).unwrap(), &HPComplex::one(bits), -45.0));
        let g = gamma_factor_series(&zeta, &HPComplex::one(bits), 3, &p);
        assert!(close(&g.coefficient(0).unwrap(), &HPComplex::pi(bits).sqrt(), -45.0));
        let bessel = build_shape(&[HPComplex::zero(bits), HPComplex::zero(bits)], None).unwrap();
        let g = gamma_factor_series(&bessel, &HPComplex::zero(bits), 3, &p);
        assert_eq!(g.valuation(), -2);
        // Γ(ε/2)² = 4/ε² + …
        assert!(close(&g.coefficient(-2).unwrap(), &HPComplex::from_i64(bits, 4), -45.0));
    }

    #[test]
    fn analytic_factor_matches_pointwise_gamma() {
        let p = prec();
        let bits = p.bits();
        let lambdas = [
            HPComplex::zero(bits),
            HPComplex::one(bits),
            HPComplex::from_f64(bits, 0.25, 0.0),
        ];
        let shape = build_shape(&lambdas, None).unwrap();
        let s0 = HPComplex::from_f64(bits, 0.75, 3.0);
        let g = gamma_factor_series(&shape, &s0, 2, &p);
        let mut want = HPComplex::one(bits);
        for l in &lambdas {
            want *= &gamma(&(&s0 + l).div_i64(2), &p).unwrap();
        }
        assert_eq!(g.valuation(), 0);
        assert!(close(
            &g.coefficient(0).unwrap(),
            &want,
            -(p.working_digits() as f64) + 4.0
        ));
    }
}
