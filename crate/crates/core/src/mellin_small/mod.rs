//! Small-t expansions of φ(t) and of ∂^k/∂s^k G_s(t).
//!
//! φ is expanded around the origin as a sum of `t^α (ln t)^β` terms whose
//! coefficients come from repeatedly dividing the Taylor window of the
//! Γ-factor by linear factors. Term-wise integration of the same expansion
//! gives G. Both series converge for every `t`, but the cancellation grows
//! like `exp(2d·t^(2/d))`, so tables are built at raised precision and
//! every evaluation checks how many digits it lost.

mod g;
mod shape;
mod table;

pub use g::{g_small, l_polynomial, GSmallEvaluator};
pub use shape::{build_shape, build_shape_from_numbers, GammaFactorShape};
pub use table::{cancellation_digits, compute_phi_coefficients, phi_small, terms_needed, PhiCoefficientTable};

#[cfg(test)]
mod tests {
    use rug::Float;

    use super::*;
    use crate::numerics::{constants, gamma, HPComplex, Number, Precision};

    fn shape(lams: &[&str], bits: u32) -> GammaFactorShape {
        let nums: Vec<Number> = lams.iter().map(|x| x.parse().unwrap()).collect();
        build_shape_from_numbers(&nums, bits, None).unwrap()
    }

    fn rel(a: &HPComplex, b: &HPComplex) -> f64 {
        (a - b).log10_abs() - b.log10_abs()
    }

    #[test]
    fn single_zero_coefficients() {
        let p = Precision::new(30);
        let bits = p.bits();
        let t = compute_phi_coefficients(&shape(&["0"], bits), 12, &p).unwrap();
        let mut fact = HPComplex::one(bits);
        for n in 1..=12usize {
            if n > 1 {
                fact = fact.mul_i64(n as i64 - 1);
            }
            let sign = if n % 2 == 1 { 2 } else { -2 };
            let want = HPComplex::from_i64(bits, sign).checked_div(&fact).unwrap();
            assert!(rel(t.coefficient(0, n, 1), &want) < -35.0, "n = {n}");
        }
    }

    #[test]
    fn double_zero_coefficients() {
        let p = Precision::new(30);
        let bits = p.bits();
        let eg = constants(&p).euler_gamma;
        let t = compute_phi_coefficients(&shape(&["0", "0"], bits), 3, &p).unwrap();
        assert!(rel(t.coefficient(0, 1, 2), &HPComplex::from_i64(bits, 4)) < -35.0);
        assert!(rel(t.coefficient(0, 1, 1), &eg.mul_i64(-4)) < -35.0);
        // t⁴ coefficient of 4K₀(2t) is −(2 ln t − 3 + 2γ)/2
        assert!(rel(t.coefficient(0, 3, 2), &HPComplex::one(bits)) < -35.0);
        let want = &HPComplex::from_f64(bits, 1.5, 0.0) - &eg;
        assert!(rel(t.coefficient(0, 3, 1), &want) < -35.0);
    }

    #[test]
    fn coefficient_decay() {
        let p = Precision::new(30);
        let bits = p.bits();
        for lams in [&["0"][..], &["0", "0"], &["0", "1"], &["0", "1", "1/6", "-1/6"]] {
            let sh = shape(lams, bits);
            let d = sh.d() as i32;
            let t = compute_phi_coefficients(&sh, 60, &p).unwrap();
            let mut worst = f64::NEG_INFINITY;
            for n in 1..=60 {
                let lf: f64 = (1..=n).map(|i| (i as f64).log10()).sum();
                for (j, class) in sh.classes().iter().enumerate() {
                    // (n!)^d |c^(n)| grows at most like n^{Σ_k (λ_k + m_j)/2}
                    let m = sh.base_exponents()[j].to_f64().0;
                    let b: f64 = sh.lambdas().iter().map(|l| (l.to_f64().0 + m) / 2.0).sum();
                    for k in 1..=class.len() {
                        let c = t.coefficient(j, n, k);
                        if !c.is_zero() {
                            let poly = b * (n as f64).log10();
                            worst = worst.max(c.log10_abs() + d as f64 * lf - poly);
                        }
                    }
                }
            }
            assert!(worst < 10.0, "{lams:?}: {worst}");
        }
    }

    #[test]
    fn phi_closed_form_single_zero() {
        let p = Precision::new(30);
        let bits = p.bits();
        let sh = shape(&["0"], bits);
        let table = PhiCoefficientTable::for_range(&sh, 2.0, &p).unwrap();
        for t in [0.5, 1.0, 2.0] {
            let tt = HPComplex::from_f64(bits, t, 0.0);
            let got = phi_small(&tt, &sh, &table, &p).unwrap();
            let want = (-&tt.square()).exp().mul_i64(2);
            assert!(rel(&got, &want) < -30.0, "t = {t}");
        }
    }

    #[test]
    fn phi_bessel_at_one() {
        // 4K₀(2) from the ascending series K₀(x) = −(ln(x/2)+γ)I₀(x) + Σ H_m (x/2)^{2m}/(m!)²
        let p = Precision::new(30);
        let bits = p.bits() + 64;
        let eg = Float::with_val(bits, rug::float::Constant::Euler);
        let mut i0 = Float::with_val(bits, 0);
        let mut h = Float::with_val(bits, 0);
        let mut term = Float::with_val(bits, 1);
        let mut harm = Float::with_val(bits, 0);
        for m in 0..80u32 {
            if m > 0 {
                term /= m * m;
                harm += Float::with_val(bits, 1) / m;
            }
            i0 += &term;
            h += Float::with_val(bits, &term * &harm);
        }
        let k0 = h - Float::with_val(bits, &eg * &i0);
        let want = HPComplex::from_real(&Float::with_val(bits, k0 * 4u32));

        let pb = Precision::new(30);
        let sh = shape(&["0", "0"], pb.bits());
        let table = PhiCoefficientTable::for_range(&sh, 1.0, &pb).unwrap();
        let got = phi_small(&HPComplex::one(pb.bits()), &sh, &table, &pb).unwrap();
        assert!(rel(&got, &want) < -30.0);
    }

    #[test]
    fn cancellation_is_reported() {
        let p = Precision::new(20);
        let bits = p.bits();
        let sh = shape(&["0"], bits);
        let thin = compute_phi_coefficients(&sh, 400, &p).unwrap();
        let t = HPComplex::from_f64(bits, 7.0, 0.0);
        assert!(matches!(thin.phi(&t), Err(crate::Error::Precision { .. })));
        let got = phi_small(&t, &sh, &thin, &p).unwrap();
        let want = (-&t.square()).exp().mul_i64(2);
        assert!(rel(&got, &want) < -20.0);
    }

    #[test]
    fn g_closed_form() {
        // G_2(t) = e^{−t²}/t² for λ = (0)
        let p = Precision::new(30);
        let bits = p.bits();
        let sh = shape(&["0"], bits);
        let s = HPComplex::from_i64(bits, 2);
        for t in [0.3, 1.0, 2.0] {
            let tt = HPComplex::from_f64(bits, t, 0.0);
            let got = g_small(&s, 0, &tt, &sh, &p).unwrap();
            let want = (-&tt.square()).exp().checked_div(&tt.square()).unwrap();
            assert!(rel(&got, &want) < -28.0, "t = {t}");
        }
    }

    #[test]
    fn g_tends_to_gamma() {
        let p = Precision::new(30);
        let bits = p.bits();
        let sh = shape(&["0"], bits);
        let s = HPComplex::from_i64(bits, 3);
        let t = HPComplex::from_f64(bits, 0.01, 0.0);
        let g = g_small(&s, 0, &t, &sh, &p).unwrap();
        let lim = &g * &t.powi(3);
        let want = gamma(&HPComplex::from_f64(bits, 1.5, 0.0), &p).unwrap();
        assert!((&lim - &want).log10_abs() < -4.0);
    }

    #[test]
    fn g_at_pole_of_gamma() {
        // G_0(1) = ∫_1^∞ 2e^{−x²} dx/x = E₁(1)
        let p = Precision::new(30);
        let bits = p.bits();
        let sh = shape(&["0"], bits);
        let g = g_small(&HPComplex::zero(bits), 0, &HPComplex::one(bits), &sh, &p).unwrap();
        // E₁(1) = −Ei(−1)
        let ei = Float::with_val(bits, Float::with_val(bits, -1).eint_ref());
        assert!(rel(&g, &-HPComplex::from_real(&ei)) < -28.0);
    }

    #[test]
    fn l_polynomial_matches_exact_integration() {
        // t^α (−1)^{i−1}(i−1)! L_{α,i,k}(ln t) = ∂^k_{s'} [t^{−s'} ∫_0^t x^{α+s'−1} (ln x)^{i−1} dx]
        // and the right side equals t^α Σ_b C(i−1,b) (ln t)^{i−1−b} (−1)^{b+k} (b+k)! / α^{b+k+1}.
        let bits = 200;
        for (alpha, i, k, t) in [
            (2.0, 1, 0, 0.7),
            (2.0, 2, 0, 0.4),
            (4.5, 2, 1, 1.3),
            (3.0, 3, 2, 0.5),
            (1.25, 2, 3, 0.9),
        ] {
            let a = HPComplex::from_f64(bits, alpha, 0.0);
            let lt = HPComplex::from_f64(bits, t, 0.0).ln();
            let poly = l_polynomial(&a, i, k, -30.0);
            let mut l = HPComplex::zero(bits);
            for c in poly.iter().rev() {
                l = &(&l * &lt) + c;
            }
            let mut fact = 1i64;
            for q in 1..i as i64 {
                fact *= q;
            }
            let sign = if (i - 1) % 2 == 0 { 1 } else { -1 };
            let lhs = l.mul_i64(sign * fact);

            let mut rhs = HPComplex::zero(bits);
            for b in 0..i {
                let binom = (0..b).fold(1i64, |acc, q| acc * (i as i64 - 1 - q as i64) / (q as i64 + 1));
                let mut f = 1i64;
                for q in 1..=(b + k) as i64 {
                    f *= q;
                }
                let sgn = if (b + k) % 2 == 0 { 1 } else { -1 };
                let term = lt
                    .powi((i - 1 - b) as i64)
                    .mul_i64(binom * f * sgn)
                    .checked_div(&a.powi((b + k + 1) as i64))
                    .unwrap();
                rhs += &term;
            }
            assert!((&lhs - &rhs).log10_abs() < -50.0, "{alpha} {i} {k}");
        }
    }
}
