//! Large-t asymptotics of φ and G, continued fractions, and the hybrid
//! evaluators that switch between expansions.

mod asymptotic;
mod cf;
mod coefficients;
mod field;
mod hybrid;

pub use asymptotic::{g_asym, phi_asym, AsymptoticSeries};
pub use cf::{cf_eval, series_to_cf, series_to_cf_partial, ContinuedFraction};
pub use coefficients::{
    delta_polys, m_coefficients, mu_derivative_coefficients, mu_jets, mu_polynomials, nu, symmetric_data, SymmetricData,
};
pub use field::Field;
pub use hybrid::{GEvaluator, HybridSchedule, PhiEvaluator};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mellin_small::{build_shape_from_numbers, GammaFactorShape};
    use crate::numerics::{HPComplex, Number, Precision};

    fn shape(lams: &[&str], bits: u32) -> GammaFactorShape {
        let nums: Vec<Number> = lams.iter().map(|x| x.parse().unwrap()).collect();
        build_shape_from_numbers(&nums, bits, None).unwrap()
    }

    fn rel(a: &HPComplex, b: &HPComplex) -> f64 {
        (a - b).log10_abs() - b.log10_abs()
    }

    #[test]
    fn zeta_phi_asymptotic_is_exact() {
        let p = Precision::new(30);
        let bits = p.bits();
        let sh = shape(&["0"], bits);
        let asym = AsymptoticSeries::phi(&sh, 10, &p);
        for n in [0, 3, 10] {
            let t = HPComplex::from_f64(bits, 2.5, 0.0);
            let got = phi_asym(&t, n, &asym).unwrap();
            let want = (-&t.square()).exp().mul_i64(2);
            assert!(rel(&got, &want) < -35.0);
        }
    }

    #[test]
    fn zeta_g_asymptotic_closed_form() {
        // G_2(3) = e^{−9}/9
        let p = Precision::new(30);
        let bits = p.bits();
        let sh = shape(&["0"], bits);
        let s = HPComplex::from_i64(bits, 2);
        let asym = AsymptoticSeries::g(&sh, &s, 0, 10, &p);
        let t = HPComplex::from_i64(bits, 3);
        let got = g_asym(&t, 5, &asym).unwrap();
        let want = (-&t.square()).exp().div_i64(9);
        assert!(rel(&got, &want) < -35.0);
    }

    #[test]
    fn zeta_schedule_degenerates() {
        let p = Precision::new(30);
        let sh = shape(&["0"], p.bits());
        let ev = PhiEvaluator::new(&sh, &p).unwrap();
        let sch = ev.schedule();
        assert!(!sch.taylor_only);
        assert!(sch.crossover_residual_log10 < -38.0);
        let t0 = sch.t0();
        let lead = ev.asymptotic().leading_log10(t0);
        assert!(lead < sch.eps_log10);
        assert!(ev.asymptotic().leading_log10(2.0 * t0) < lead);
    }

    #[test]
    fn bessel_hybrid_continuity() {
        let p = Precision::new(30);
        let bits = p.bits();
        let sh = shape(&["0", "0"], bits);
        let ev = PhiEvaluator::new(&sh, &p).unwrap();
        let sch = ev.schedule().clone();
        assert!(!sch.taylor_only, "{sch:?}");
        let table_range = sch.taylor_limit();
        for (i, &t) in sch.thresholds.iter().enumerate().skip(1) {
            let tt = HPComplex::from_f64(bits, t, 0.0);
            let far = ev.convergent(&tt, sch.orders[i - 1]).unwrap();
            let near = if t <= table_range {
                ev.taylor(&tt).unwrap()
            } else {
                let wide = PhiEvaluator::with_schedule(&sh, &[t], &[], sch.eps_log10, &p).unwrap();
                wide.taylor(&tt).unwrap()
            };
            assert!((&far - &near).log10_abs() <= sch.eps_log10, "t = {t}");
        }
    }
}
