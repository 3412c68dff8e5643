//! Recovering unknown invariants from the theta transformation law.
//!
//! `Θ(1/t) − ϵ t^w Θ̂(t) + Σ r_j t^{p_j} = 0` is linear in the sign, in the
//! pole residues, and (writing `Θ = Σ_k a_{p^k} θ_k`) in the coefficients at a
//! single prime. Sampling `t` gives an overdetermined system, solved in the
//! least-squares sense and then re-checked at fresh points.

mod linalg;

use std::sync::Arc;

pub use linalg::{least_squares, LeastSquares};

use crate::error::{Error, Result};
use crate::lseries::{ExpFactor, LFunction, LFunctionDescriptor};
use crate::numerics::{HPComplex, Number, Precision};

/// `log10` of the largest acceptable residual: three digits short of the target.
pub fn tolerance_log10(prec: &Precision) -> f64 {
    -(prec.target_digits() as f64) + 3.0
}

/// `count` points spaced geometrically on `[1.1, 3]`.
pub fn default_samples(count: usize) -> Vec<f64> {
    let (lo, hi): (f64, f64) = (1.1, 3.0);
    if count <= 1 {
        return vec![lo];
    }
    (0..count)
        .map(|i| lo * (hi / lo).powf(i as f64 / (count - 1) as f64))
        .collect()
}

/// Three points interleaved with any default grid, used for verification.
pub fn fresh_samples() -> Vec<f64> {
    let (lo, hi): (f64, f64) = (1.1, 3.0);
    [0.17, 0.51, 0.83].iter().map(|f| lo * (hi / lo).powf(*f)).collect()
}

/// Residual checks of a solved system.
#[derive(Clone, Debug)]
pub struct Verification {
    /// `(t, |residual|)` at each fresh point.
    pub residuals: Vec<(f64, f64)>,
    pub tolerance: f64,
}

impl Verification {
    pub fn max(&self) -> f64 {
        self.residuals.iter().map(|r| r.1).fold(0.0, f64::max)
    }

    pub fn passed(&self) -> bool {
        self.max() <= self.tolerance
    }
}

fn verify(desc: &LFunctionDescriptor, prec: &Precision) -> Result<Verification> {
    let l = LFunction::prepare(desc, prec)?;
    let mut residuals = Vec::new();
    for t in fresh_samples() {
        residuals.push((t, l.feq_residual_f64(t)?.value.abs_f64()));
    }
    Ok(Verification {
        residuals,
        tolerance: 10f64.powf(tolerance_log10(prec)),
    })
}

fn check_condition(cond_log10: f64, prec: &Precision) -> Result<()> {
    let limit = prec.guard_digits() as f64 - 5.0;
    if cond_log10 > limit {
        return Err(Error::IllConditioned(cond_log10));
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct SignResidueSolution {
    pub sign: HPComplex,
    /// `(p_j, r_j)` for every pole, known or solved.
    pub residues: Vec<(HPComplex, HPComplex)>,
    /// Names of the unknowns, in column order.
    pub unknowns: Vec<String>,
    pub lsq_residual: f64,
    pub condition_log10: f64,
    pub verification: Verification,
    /// The input descriptor with the solved values filled in.
    pub descriptor: LFunctionDescriptor,
}

/// Solves for the unknown sign and pole residues of `desc`.
pub fn solve_sign_residues(
    desc: &LFunctionDescriptor,
    samples: &[f64],
    prec: &Precision,
) -> Result<SignResidueSolution> {
    let l = LFunction::prepare(desc, prec)?;
    let bits = prec.bits();
    let w = l.weight().clone();
    let sign_unknown = desc.sign.is_none();
    let unknown_poles: Vec<usize> = (0..desc.poles.len())
        .filter(|&j| desc.poles[j].residue.is_none())
        .collect();
    let mut unknowns = Vec::new();
    if sign_unknown {
        unknowns.push("sign".to_string());
    }
    for &j in &unknown_poles {
        unknowns.push(format!("residue at {}", desc.poles[j].location));
    }
    if samples.len() < unknowns.len() {
        return Err(Error::Unsupported(format!(
            "{} samples for {} unknowns",
            samples.len(),
            unknowns.len()
        )));
    }

    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for &tf in samples {
        let t = HPComplex::from_f64(bits, tf, 0.0);
        let inv = l.theta(&t.recip()?)?.value;
        let dual = &t.pow(&w) * &l.theta_dual(&t)?.value;
        let mut row = Vec::new();
        let mut b = inv;
        match &desc.sign {
            None => row.push(dual),
            Some(e) => b = &b - &(&e.to_hp(bits) * &dual),
        }
        for pole in &desc.poles {
            let tp = t.pow(&pole.location.to_hp(bits));
            match &pole.residue {
                None => row.push(-&tp),
                Some(r) => b = &b + &(&r.to_hp(bits) * &tp),
            }
        }
        rows.push(row);
        rhs.push(b);
    }
    let sol = least_squares(&rows, &rhs)?;
    check_condition(sol.condition_log10, prec)?;

    let mut solved = desc.clone();
    let mut it = sol.x.iter();
    if sign_unknown {
        solved.sign = Some(Number::Approx(it.next().expect("sign column").clone()));
    }
    for &j in &unknown_poles {
        solved.poles[j].residue = Some(Number::Approx(it.next().expect("residue column").clone()));
    }
    let verification = verify(&solved, prec)?;
    Ok(SignResidueSolution {
        sign: solved.sign.as_ref().expect("filled").to_hp(bits),
        residues: solved
            .poles
            .iter()
            .map(|p| (p.location.to_hp(bits), p.residue.as_ref().expect("filled").to_hp(bits)))
            .collect(),
        unknowns,
        lsq_residual: sol.residual,
        condition_log10: sol.condition_log10,
        verification,
        descriptor: solved,
    })
}

#[derive(Clone, Debug)]
pub struct BadPrimeSolution {
    pub p: u64,
    /// `a_p, a_{p^2}, …`: at least the `K` requested, more when higher
    /// powers are visible at the sampled `t`.
    pub values: Vec<HPComplex>,
    /// The same values rounded to integers, when integrality was requested.
    pub integers: Option<Vec<rug::Integer>>,
    pub lsq_residual: f64,
    pub condition_log10: f64,
    pub verification: Verification,
    pub warnings: Vec<String>,
}

/// `θ_k(x) = Σ_{p ∤ m} a_m φ(p^k m x)` for `k = 0 … k_max`, summed up to `n_cut`.
struct LocalThetas<'a> {
    l: &'a LFunction,
    p: u64,
    coeffs: Vec<(u64, HPComplex)>,
    n_cut: u64,
}

impl LocalThetas<'_> {
    fn eval(&self, x: &HPComplex, k: u32) -> Result<HPComplex> {
        let pk = self.p.pow(k);
        let mut acc = HPComplex::zero(x.prec());
        for (m, a) in &self.coeffs {
            if pk * m > self.n_cut {
                break;
            }
            let v = self.l.phi().eval(&x.mul_i64((pk * m) as i64))?;
            acc = &acc + &(a * &v);
        }
        Ok(acc)
    }

    /// `θ_k(1/(tA)) − ϵ t^w θ_k(t/A)`: the coefficient of `a_{p^k}` in the residual.
    fn column(&self, t: &HPComplex, eps: &HPComplex, k: u32) -> Result<HPComplex> {
        let a = self.l.exp_factor();
        let small = (t * a).recip()?;
        let large = t.checked_div(a)?;
        let tw = t.pow(self.l.weight());
        Ok(&self.eval(&small, k)? - &(&(eps * &tw) * &self.eval(&large, k)?))
    }
}

/// Recovers `a_p, …, a_{p^K}` of a multiplicative, self-dual L-function whose
/// other data is known. The coefficients the provider holds at multiples of
/// `p` are ignored. An empty `samples` picks a default grid sized to the
/// number of unknowns.
pub fn solve_bad_prime(
    desc: &LFunctionDescriptor,
    p: u64,
    k_max: u32,
    samples: &[f64],
    prec: &Precision,
    integer_coeffs: bool,
) -> Result<BadPrimeSolution> {
    if !crate::lseries::factorize(p).iter().all(|&(q, e)| q == p && e == 1) || p < 2 {
        return Err(Error::Validation {
            assumption: "bad prime",
            message: format!("{p} is not prime"),
        });
    }
    if !desc.is_self_dual() {
        return Err(Error::Unsupported(
            "bad-prime solving needs a self-dual descriptor".into(),
        ));
    }
    if !desc.coeffs.is_multiplicative() {
        return Err(Error::Validation {
            assumption: "coefficients",
            message: "bad-prime solving needs multiplicative coefficients".into(),
        });
    }
    if k_max == 0 {
        return Err(Error::Unsupported("K must be at least 1".into()));
    }
    let l = LFunction::prepare(desc, prec)?;
    let bits = prec.bits();
    let eps = desc
        .sign
        .as_ref()
        .ok_or_else(|| Error::UnknownParameter("sign".into()))?
        .to_hp(bits);
    let poles: Vec<(HPComplex, HPComplex)> = desc
        .poles
        .iter()
        .map(|q| {
            q.residue
                .as_ref()
                .map(|r| (q.location.to_hp(bits), r.to_hp(bits)))
                .ok_or_else(|| Error::UnknownParameter(format!("residue at {}", q.location)))
        })
        .collect::<Result<_>>()?;

    let a = l.exp_factor().to_f64().0;
    let grid = if samples.is_empty() {
        default_samples(2)
    } else {
        samples.to_vec()
    };
    let probes: Vec<f64> = grid.iter().copied().chain(fresh_samples()).collect();
    let t_lo = probes.iter().copied().fold(f64::INFINITY, f64::min);
    let t_hi = probes.iter().copied().fold(0.0, f64::max);
    let x_min = (1.0 / (t_hi * a)).min(t_lo / a);
    let n_cut = l.plan_truncation(x_min)? as u64;
    let mut coeffs = Vec::new();
    for m in 1..=n_cut {
        if m % p != 0 {
            let c = desc.coeffs.coefficient(m, bits)?;
            if !c.is_zero() {
                coeffs.push((m, c));
            }
        }
    }
    let thetas = LocalThetas {
        l: &l,
        p,
        coeffs,
        n_cut,
    };
    let tol = 10f64.powf(tolerance_log10(prec));

    // Every a_{p^k} whose column rises above the tolerance is an unknown,
    // whatever K the caller asked for.
    let magnitude = |k: u32| -> Result<f64> {
        let mut m = 0.0f64;
        for t in [t_lo, t_hi] {
            m = m.max(thetas.column(&HPComplex::from_f64(bits, t, 0.0), &eps, k)?.abs_f64());
        }
        Ok(m)
    };
    let mut k_eff = k_max;
    let mut k = k_max + 1;
    while p.checked_pow(k).is_some_and(|pk| pk <= n_cut) {
        if magnitude(k)? > tol {
            k_eff = k;
        }
        k += 1;
    }
    let mut warnings = Vec::new();
    if k_eff > k_max {
        warnings.push(format!(
            "a_{{{p}^k}} for k ≤ {k_eff} are not negligible at these t; all were solved for"
        ));
    }
    let samples = if samples.is_empty() {
        default_samples(k_eff as usize + 3)
    } else {
        samples.to_vec()
    };
    if samples.len() < k_eff as usize {
        return Err(Error::Unsupported(format!(
            "{} samples for {k_eff} unknowns",
            samples.len()
        )));
    }

    // rows[i][k − 1] multiplies a_{p^k}; rhs = −col_0 − Σ r t^p.
    let system = |ts: &[f64]| -> Result<(Vec<Vec<HPComplex>>, Vec<HPComplex>)> {
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for &tf in ts {
            let t = HPComplex::from_f64(bits, tf, 0.0);
            let row = (1..=k_eff)
                .map(|k| thetas.column(&t, &eps, k))
                .collect::<Result<Vec<_>>>()?;
            let mut b = -&thetas.column(&t, &eps, 0)?;
            for (loc, r) in &poles {
                b = &b - &(r * &t.pow(loc));
            }
            rows.push(row);
            rhs.push(b);
        }
        Ok((rows, rhs))
    };

    let (rows, rhs) = system(&samples)?;
    let full = least_squares(&rows, &rhs)?;
    check_condition(full.condition_log10, prec)?;

    let mut values = full.x.clone();
    let mut integers = None;
    if integer_coeffs {
        let threshold = -(prec.target_digits() as f64) / 3.0;
        let mut fixed: Vec<rug::Integer> = Vec::new();
        let mut current = full.x.clone();
        for k in 0..k_eff as usize {
            let v = &current[0];
            let (re, dre) = round(v.re());
            let (im, dim) = round(v.im());
            let dist = dre.max(dim);
            let dist_log10 = if dist == 0.0 { f64::NEG_INFINITY } else { dist.log10() };
            if dist_log10 > threshold || !im.is_zero() {
                return Err(Error::NonIntegral {
                    index: format!("a_{{{p}^{}}}", k + 1),
                    value: v.to_string_digits(15),
                    distance_log10: if im.is_zero() { dist_log10 } else { 0.0 },
                });
            }
            fixed.push(re);
            if k + 1 == k_eff as usize {
                break;
            }
            // Move the fixed column to the right-hand side and solve for the rest.
            let fixed_hp: Vec<HPComplex> = fixed
                .iter()
                .map(|z| HPComplex::from_rational(bits, &rug::Rational::from(z.clone())))
                .collect();
            let sub_rows: Vec<Vec<HPComplex>> = rows.iter().map(|r| r[fixed.len()..].to_vec()).collect();
            let sub_rhs: Vec<HPComplex> = rows
                .iter()
                .zip(&rhs)
                .map(|(r, b)| {
                    let mut b = b.clone();
                    for (c, z) in r.iter().zip(&fixed_hp) {
                        b = &b - &(c * z);
                    }
                    b
                })
                .collect();
            current = least_squares(&sub_rows, &sub_rhs)?.x;
        }
        values = fixed
            .iter()
            .map(|z| HPComplex::from_rational(bits, &rug::Rational::from(z.clone())))
            .collect();
        integers = Some(fixed);
    }

    let (check_rows, check_rhs) = system(&fresh_samples())?;
    let residuals = check_rows
        .iter()
        .zip(&check_rhs)
        .zip(fresh_samples())
        .map(|((r, b), t)| {
            let mut acc = -b;
            for (c, v) in r.iter().zip(&values) {
                acc = &acc + &(c * v);
            }
            (t, acc.abs_f64())
        })
        .collect();
    Ok(BadPrimeSolution {
        p,
        values,
        integers,
        lsq_residual: full.residual,
        condition_log10: full.condition_log10,
        verification: Verification {
            residuals,
            tolerance: tol,
        },
        warnings,
    })
}

fn round(x: &rug::Float) -> (rug::Integer, f64) {
    let r = x.clone().round();
    let dist = rug::Float::with_val(x.prec(), x - &r).abs().to_f64();
    (r.to_integer().expect("finite"), dist)
}

/// Outcome of trying one conductor.
#[derive(Clone, Debug)]
pub struct ConductorTrial {
    pub conductor: Number,
    /// Largest verification residual, or the error that stopped the trial.
    pub outcome: std::result::Result<f64, String>,
    pub passed: bool,
}

/// Tries each candidate conductor, solving for unknown sign/residues where
/// needed, and returns the unique one that verifies.
pub fn search_conductor(
    desc: &LFunctionDescriptor,
    candidates: &[Number],
    samples: &[f64],
    prec: &Precision,
) -> Result<(Number, Vec<ConductorTrial>)> {
    let mut trials = Vec::new();
    for n in candidates {
        let trial = desc.clone().with_exp_factor(ExpFactor::Conductor(n.clone()));
        let outcome = if trial.unknowns().is_empty() {
            verify(&trial, prec)
        } else {
            solve_sign_residues(&trial, samples, prec).map(|s| s.verification)
        };
        trials.push(match outcome {
            Ok(v) => ConductorTrial {
                conductor: n.clone(),
                outcome: Ok(v.max()),
                passed: v.passed(),
            },
            Err(e) => ConductorTrial {
                conductor: n.clone(),
                outcome: Err(e.to_string()),
                passed: false,
            },
        });
    }
    let passing: Vec<&ConductorTrial> = trials.iter().filter(|t| t.passed).collect();
    match passing.as_slice() {
        [one] => Ok((one.conductor.clone(), trials.clone())),
        [] => Err(Error::Validation {
            assumption: "functional equation",
            message: "no candidate conductor satisfies the functional equation".into(),
        }),
        many => Err(Error::Validation {
            assumption: "functional equation",
            message: format!(
                "{} candidate conductors pass: {}",
                many.len(),
                many.iter()
                    .map(|t| t.conductor.to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            ),
        }),
    }
}

/// A provider wrapper that hides the coefficients at multiples of `p`, for
/// checking that a solve does not lean on them.
#[derive(Debug)]
pub struct HidePrime {
    inner: Arc<dyn crate::lseries::CoefficientProvider>,
    p: u64,
}

impl HidePrime {
    pub fn new(inner: Arc<dyn crate::lseries::CoefficientProvider>, p: u64) -> Self {
        HidePrime { inner, p }
    }
}

impl crate::lseries::CoefficientProvider for HidePrime {
    fn coefficient(&self, n: u64, bits: u32) -> Result<HPComplex> {
        if n.is_multiple_of(self.p) {
            return Err(Error::UnknownParameter(format!("a_{n}")));
        }
        self.inner.coefficient(n, bits)
    }

    fn is_multiplicative(&self) -> bool {
        self.inner.is_multiplicative()
    }

    fn describe(&self) -> String {
        format!("{} without p = {}", self.inner.describe(), self.p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lseries::{dedekind_quadratic, ramanujan_delta, riemann_zeta, PoleSpec};

    #[test]
    fn zeta_sign() {
        let p = Precision::new(25);
        let d = riemann_zeta().with_sign(None);
        let s = solve_sign_residues(&d, &[1.2, 1.5, 2.0], &p).unwrap();
        assert!((&s.sign - &HPComplex::one(p.bits())).log10_abs() < -20.0);
        assert!(s.verification.passed());
    }

    #[test]
    fn zeta_sign_and_residues() {
        let p = Precision::new(25);
        let mut d = riemann_zeta().with_sign(None);
        d.poles = vec![PoleSpec::unknown(Number::int(0)), PoleSpec::unknown(Number::int(1))];
        let s = solve_sign_residues(&d, &default_samples(6), &p).unwrap();
        let bits = p.bits();
        assert!((&s.sign - &HPComplex::one(bits)).log10_abs() < -18.0);
        assert!((&s.residues[0].1 - &HPComplex::one(bits)).log10_abs() < -18.0);
        assert!((&s.residues[1].1 + &HPComplex::one(bits)).log10_abs() < -18.0);
        assert!(s.verification.passed(), "{:?}", s.verification);
    }

    #[test]
    fn delta_sign() {
        let p = Precision::new(20);
        let d = ramanujan_delta().with_sign(None);
        let s = solve_sign_residues(&d, &[1.2, 1.5, 2.0], &p).unwrap();
        assert!((&s.sign - &HPComplex::one(p.bits())).log10_abs() < -15.0);
    }

    #[test]
    fn zeta_hidden_five() {
        let p = Precision::new(25);
        let s = solve_bad_prime(&riemann_zeta(), 5, 1, &default_samples(4), &p, true).unwrap();
        assert_eq!(s.integers.unwrap(), vec![1]);
        assert!(s.verification.passed());
        // a_25 only shows up in Θ(1/t) as e^{−625π/t²}: invisible on [1.1, 3].
        assert!(matches!(
            solve_bad_prime(&riemann_zeta(), 5, 2, &default_samples(5), &p, true),
            Err(Error::IllConditioned(_))
        ));
        let wide: Vec<f64> = (0..6).map(|i| 2.0 * 6f64.powf(i as f64 / 5.0)).collect();
        let s = solve_bad_prime(&riemann_zeta(), 5, 2, &wide, &p, true).unwrap();
        assert_eq!(s.integers.unwrap(), vec![1, 1]);
    }

    #[test]
    fn q_i_hidden_two() {
        let p = Precision::new(20);
        let d = dedekind_quadratic(-4, p.bits()).unwrap();
        let hidden = LFunctionDescriptor {
            coeffs: Arc::new(HidePrime::new(d.coeffs.clone(), 2)),
            ..d
        };
        let s = solve_bad_prime(&hidden, 2, 2, &[], &p, true).unwrap();
        // a_8, a_16, … are still visible on [1.1, 3] and get solved too.
        let ints = s.integers.unwrap();
        assert!(ints.len() >= 2 && ints.iter().all(|z| *z == 1), "{ints:?}");
        assert!(s.verification.passed(), "{:?}", s.verification);
    }

    #[test]
    fn wrong_conductor_fails() {
        let p = Precision::new(20);
        let mut d = riemann_zeta().with_sign(None);
        d.poles = vec![PoleSpec::unknown(Number::int(0)), PoleSpec::unknown(Number::int(1))];
        let bad = d.clone().with_exp_factor(ExpFactor::Conductor(Number::int(2)));
        match solve_sign_residues(&bad, &default_samples(6), &p) {
            Ok(s) => assert!(!s.verification.passed()),
            Err(Error::IllConditioned(_)) => {}
            Err(e) => panic!("{e}"),
        }
        let (n, _) = search_conductor(
            &d,
            &[Number::int(1), Number::int(2), Number::int(3)],
            &default_samples(6),
            &p,
        )
        .unwrap();
        assert_eq!(n, Number::int(1));
    }
}
