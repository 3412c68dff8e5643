mod common;

use std::sync::OnceLock;

use common::*;
use lfunc::cli::{csv_row, parse_point};
use lfunc::lseries::{dirichlet, riemann_zeta, LFunction, Tau};
use lfunc::mellin_large::{cf_eval, m_coefficients, mu_polynomials, series_to_cf, symmetric_data};
use lfunc::numerics::gamma;
use lfunc::series::TruncatedLaurentSeries;
use lfunc::{HPComplex, Number, Precision};
use proptest::prelude::*;
use rug::{Integer, Rational};

fn zeta20() -> &'static LFunction {
    static L: OnceLock<LFunction> = OnceLock::new();
    L.get_or_init(|| LFunction::prepare(&riemann_zeta(), &Precision::new(20)).unwrap())
}

fn chi4_20() -> &'static LFunction {
    static L: OnceLock<LFunction> = OnceLock::new();
    L.get_or_init(|| {
        let v: Vec<Number> = ["1", "0", "-1", "0"].iter().map(|s| s.parse().unwrap()).collect();
        LFunction::prepare(&dirichlet(v, Some(Number::int(1))).unwrap(), &Precision::new(20)).unwrap()
    })
}

fn taus() -> &'static Vec<Integer> {
    static T: OnceLock<Vec<Integer>> = OnceLock::new();
    T.get_or_init(|| Tau::new().values(40_000))
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn gamma_recurrence(re in -6.0f64..6.0, im in -8.0f64..8.0) {
        prop_assume!(im.abs() > 0.05 || re > 0.05 || (re - re.round()).abs() > 0.05);
        let prec = Precision::new(30);
        let z = HPComplex::from_f64(prec.bits(), re, im);
        let g = gamma(&z, &prec).unwrap();
        let g1 = gamma(&z.add_i64(1), &prec).unwrap();
        prop_assert!(rel_err(&g1, &(&g * &z)) < 1e-28);
    }

    #[test]
    fn gamma_reflection(re in -3.0f64..3.0, im in -4.0f64..4.0) {
        prop_assume!(im.abs() > 0.05 || (re - re.round()).abs() > 0.05);
        let prec = Precision::new(30);
        let bits = prec.bits();
        let z = HPComplex::from_f64(bits, re, im);
        let lhs = &gamma(&z, &prec).unwrap() * &gamma(&(-&z).add_i64(1), &prec).unwrap();
        let pi = HPComplex::pi(bits);
        let rhs = pi.checked_div(&(&pi * &z).sin()).unwrap();
        prop_assert!(rel_err(&lhs, &rhs) < 1e-27);
    }

    #[test]
    fn gamma_matches_mpfr_on_reals(x in 0.01f64..30.0) {
        let prec = Precision::new(30);
        let bits = prec.bits();
        let got = gamma(&HPComplex::from_f64(bits, x, 0.0), &prec).unwrap();
        let want = HPComplex::from_real(&mpfr_gamma(x, bits));
        prop_assert!(rel_err(&got, &want) < 1e-28);
    }

    #[test]
    fn series_division_round_trips(
        a in prop::collection::vec(-5.0f64..5.0, 8),
        b in prop::collection::vec(-5.0f64..5.0, 8),
        va in -3i64..3,
        vb in -3i64..3,
    ) {
        prop_assume!(b[0].abs() > 0.1);
        let bits = 200;
        let f = TruncatedLaurentSeries::new(va, a.iter().map(|&x| HPComplex::from_f64(bits, x, 0.0)).collect());
        let g = TruncatedLaurentSeries::new(vb, b.iter().map(|&x| HPComplex::from_f64(bits, x, 0.3 * x)).collect());
        let q = f.div(&g, -50.0).unwrap();
        let back = q.mul(&g);
        prop_assert_eq!(back.valuation(), f.valuation());
        for e in f.valuation()..f.order() {
            let d = (&back.coefficient(e).unwrap() - &f.coefficient(e).unwrap()).abs_f64();
            prop_assert!(d < 1e-45, "e = {} d = {:e}", e, d);
        }
    }

    #[test]
    fn tau_is_multiplicative(m in 1u64..200, n in 1u64..200) {
        prop_assume!(gcd(m, n) == 1);
        let t = taus();
        let lhs = t[(m * n - 1) as usize].clone();
        prop_assert_eq!(lhs, Integer::from(&t[m as usize - 1] * &t[n as usize - 1]));
    }

    #[test]
    fn tau_hecke_at_primes(idx in 0usize..25) {
        let primes = [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97];
        let p = primes[idx];
        let t = taus();
        let tp = &t[p as usize - 1];
        let want = Integer::from(tp * tp) - Integer::from(Integer::u_pow_u(p as u32, 11));
        prop_assert_eq!(t[(p * p) as usize - 1].clone(), want);
    }

    #[test]
    fn zeta_functional_equation(t in 0.6f64..3.5) {
        let r = zeta20().feq_residual_f64(t).unwrap();
        prop_assert!(r.value.abs_f64() < 1e-17, "t = {} r = {:e}", t, r.value.abs_f64());
    }

    #[test]
    fn derivative_matches_central_difference(re in -1.0f64..3.0, im in -4.0f64..4.0) {
        let l = chi4_20();
        let bits = l.precision().bits();
        let s = HPComplex::from_f64(bits, re, im);
        let h = HPComplex::from_f64(bits, 1e-7, 0.0);
        let up = l.value(&(&s + &h)).unwrap().value;
        let down = l.value(&(&s - &h)).unwrap().value;
        let fd = (&up - &down).checked_div(&h.mul_i64(2)).unwrap();
        let d = l.l_value(&s, 1).unwrap().value().unwrap().value;
        prop_assert!((&fd - &d).abs_f64() < 1e-12 * (1.0 + d.abs_f64()));
    }

    #[test]
    fn csv_rows_round_trip(re in -5.0f64..5.0, im in -30.0f64..30.0, vr in -1e6f64..1e6, vi in -1e-6f64..1e-6) {
        let bits = 128;
        let s = HPComplex::from_f64(bits, re, im);
        let v = HPComplex::from_f64(bits, vr, vi);
        let row = csv_row(&s, Some(&v), 1e-20, 17);
        let f: Vec<f64> = row.split(',').map(parse_csv_f64).collect();
        prop_assert_eq!(f.len(), 5);
        for (got, want) in f[..4].iter().zip([re, im, vr, vi]) {
            prop_assert!((got - want).abs() <= 1e-15 * want.abs());
        }
        let back = parse_point(&format!("{}{:+}i", row.split(',').next().unwrap(), f[1]), bits).unwrap();
        prop_assert!((back.to_f64().0 - re).abs() <= 1e-15 * re.abs());
    }

    #[test]
    fn one_dimensional_asymptotics_are_trivial(num in -20i64..20, den in 1i64..9) {
        let lam = Rational::from((num, den));
        let m = m_coefficients(&symmetric_data(&[lam]), 12);
        prop_assert!(m[1..].iter().all(|x| x.cmp0().is_eq()));
        let bits = 150;
        let m = m_coefficients(&symmetric_data(&[HPComplex::from_f64(bits, num as f64 / den as f64, 0.0)]), 12);
        prop_assert!(m[1..].iter().all(|x| x.log10_abs() < -40.0));
    }

    #[test]
    fn mu_leading_coefficient(lams in prop::collection::vec((-8i64..8, 1i64..5), 1..5)) {
        let lams: Vec<Rational> = lams.iter().map(|&(a, b)| Rational::from((a, b))).collect();
        let mu = mu_polynomials(&symmetric_data(&lams), 10);
        for (n, p) in mu.iter().enumerate() {
            prop_assert_eq!(p[n].clone(), Rational::from((1, Integer::from(1) << n as u32)));
        }
    }

    #[test]
    fn continued_fraction_reexpands(c in prop::collection::vec(0.2f64..2.0, 10), signs in prop::collection::vec(any::<bool>(), 10)) {
        let bits = 256;
        let coeffs: Vec<HPComplex> = c.iter().zip(&signs)
            .map(|(&x, &s)| HPComplex::from_f64(bits, if s { x } else { -x }, 0.0))
            .collect();
        let cf = series_to_cf(&coeffs, 70).unwrap();
        // Rebuild the deepest convergent as a power series and compare.
        let n = cf.depth();
        let len = 12;
        let mut tail = TruncatedLaurentSeries::constant(cf.alphas[n].clone(), len);
        for j in (0..n).rev() {
            let mut mono = vec![HPComplex::zero(bits); len];
            mono[cf.exponents[j] as usize] = HPComplex::one(bits);
            let xk = TruncatedLaurentSeries::from_poly(&mono, len, bits);
            tail = TruncatedLaurentSeries::constant(cf.alphas[j].clone(), len).add(&xk.div(&tail, -60.0).unwrap());
        }
        let matched: u32 = cf.exponents[..n].iter().sum();
        prop_assert!(matched as usize >= n);
        for (i, want) in coeffs.iter().enumerate().take((matched as usize + 1).min(len)) {
            let got = tail.coefficient(i as i64).unwrap();
            prop_assert!((&got - want).abs_f64() < 1e-50, "order {}", i);
        }
        let x = HPComplex::from_f64(bits, 1e-4, 0.0);
        let direct = cf_eval(&cf, n, &x).unwrap();
        prop_assert!((&direct - &tail.eval(&x)).abs_f64() < 1e-30);
    }
}
