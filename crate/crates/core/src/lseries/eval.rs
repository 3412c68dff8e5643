use std::sync::Arc;

use super::coeffs::CoefficientProvider;
use super::descriptor::LFunctionDescriptor;
use crate::error::{Error, Result};
use crate::mellin_large::{GEvaluator, HybridSchedule, PhiEvaluator};
use crate::mellin_small::{build_shape_from_numbers, GammaFactorShape};
use crate::numerics::{factorial, HPComplex, Precision};
use crate::series::{gamma_factor_series, TruncatedLaurentSeries};

const MAX_TERMS: usize = 10_000_000;
const LN10: f64 = std::f64::consts::LN_10;

/// A computed quantity with its error budget.
#[derive(Clone, Debug)]
pub struct EvaluationReport {
    pub value: HPComplex,
    /// Estimated absolute error.
    pub est_error: f64,
    pub terms_used: usize,
    pub working_digits_used: u32,
    pub warnings: Vec<String>,
}

/// `L^{(k)}` at a pole of `L`.
#[derive(Clone, Debug)]
pub struct PoleReport {
    pub location: HPComplex,
    pub order: usize,
    /// Coefficient of `ε^{−1}` in `L(s + ε)`.
    pub residue: HPComplex,
    pub est_error: f64,
}

#[derive(Clone, Debug)]
pub enum LValue {
    Value(EvaluationReport),
    Pole(PoleReport),
}

impl LValue {
    pub fn value(self) -> Result<EvaluationReport> {
        match self {
            LValue::Value(r) => Ok(r),
            LValue::Pole(p) => Err(Error::Pole(p.location.to_string_digits(20))),
        }
    }
}

/// One side of the functional equation: coefficients, exponential factor
/// and the constant of the growth bound.
#[derive(Clone, Debug)]
struct Side {
    coeffs: Arc<dyn CoefficientProvider>,
    a: HPComplex,
    a_f64: f64,
    growth_c: f64,
}

/// A descriptor bound to a precision, with its φ evaluator built.
#[derive(Clone, Debug)]
pub struct LFunction {
    desc: LFunctionDescriptor,
    prec: Precision,
    shape: GammaFactorShape,
    direct: Side,
    dual: Side,
    weight: HPComplex,
    sign: Option<HPComplex>,
    poles: Vec<(HPComplex, Option<HPComplex>)>,
    phi: PhiEvaluator,
}

fn growth_constant(p: &dyn CoefficientProvider, alpha: f64, given: Option<f64>) -> Result<f64> {
    if let Some(c) = given {
        return Ok(c);
    }
    let top = p.max_index().unwrap_or(100).min(100);
    let mut c: f64 = 1.0;
    // Hidden or missing entries are skipped; only the bound matters here.
    for n in 1..=top {
        if let Ok(a) = p.coefficient(n, 64) {
            c = c.max(a.abs_f64() / (n as f64).powf(alpha));
        }
    }
    Ok(c)
}

/// Relative accuracy of an evaluator below its last threshold, and the
/// relative accuracy of the convergents above it.
fn relative_errors(schedule: &HybridSchedule, lead: impl Fn(f64) -> f64, prec: &Precision) -> (f64, f64) {
    let taylor = -(prec.target_digits() as f64) - 3.0;
    let asym = if schedule.taylor_only {
        taylor
    } else {
        schedule.eps_log10 - lead(schedule.taylor_limit()).min(0.0)
    };
    (taylor, asym.max(taylor))
}

/// `Σ_{n ≤ n_cut} a_n f(n x_1)` with an error estimate.
struct SumResult {
    value: HPComplex,
    est: f64,
    terms: usize,
}

impl LFunction {
    pub fn prepare(desc: &LFunctionDescriptor, prec: &Precision) -> Result<Self> {
        desc.validate()?;
        let bits = prec.bits();
        let d = desc.d();
        let shape = build_shape_from_numbers(&desc.lambdas, bits, None)?;
        let side = |coeffs: &Arc<dyn CoefficientProvider>, a: HPComplex| -> Result<Side> {
            Ok(Side {
                growth_c: growth_constant(coeffs.as_ref(), desc.growth, desc.growth_constant)?,
                coeffs: coeffs.clone(),
                a_f64: a.to_f64().0,
                a,
            })
        };
        let direct = side(&desc.coeffs, desc.exp_factor.value(d, bits))?;
        let dual = side(desc.dual_provider(), desc.dual_exp().value(d, bits))?;
        let phi = PhiEvaluator::new(&shape, prec)?;
        Ok(LFunction {
            prec: *prec,
            shape,
            direct,
            dual,
            weight: desc.weight.to_hp(bits),
            sign: desc.sign.as_ref().map(|s| s.to_hp(bits)),
            poles: desc
                .poles
                .iter()
                .map(|p| (p.location.to_hp(bits), p.residue.as_ref().map(|r| r.to_hp(bits))))
                .collect(),
            phi,
            desc: desc.clone(),
        })
    }

    pub fn descriptor(&self) -> &LFunctionDescriptor {
        &self.desc
    }

    pub fn precision(&self) -> &Precision {
        &self.prec
    }

    pub fn shape(&self) -> &GammaFactorShape {
        &self.shape
    }

    pub fn phi(&self) -> &PhiEvaluator {
        &self.phi
    }

    /// `A`.
    pub fn exp_factor(&self) -> &HPComplex {
        &self.direct.a
    }

    /// `Â`.
    pub fn dual_exp_factor(&self) -> &HPComplex {
        &self.dual.a
    }

    pub fn weight(&self) -> &HPComplex {
        &self.weight
    }

    fn sign(&self) -> Result<&HPComplex> {
        self.sign.as_ref().ok_or_else(|| Error::UnknownParameter("sign".into()))
    }

    fn known_poles(&self) -> Result<Vec<(HPComplex, HPComplex)>> {
        self.poles
            .iter()
            .map(|(p, r)| {
                r.clone()
                    .map(|r| (p.clone(), r))
                    .ok_or_else(|| Error::UnknownParameter(format!("residue at {}", p.to_string_digits(10))))
            })
            .collect()
    }

    /// Smallest `n_cut` such that `C n^α |f(n x_1)|` has dropped below
    /// `10^{tol_log10 − 1}` for three consecutive `n`.
    fn cut(side: &Side, alpha: f64, x1: f64, lead: &dyn Fn(f64) -> f64, tol_log10: f64) -> Result<usize> {
        let bound = |n: usize| side.growth_c.log10() + alpha * (n as f64).log10() + lead(n as f64 * x1);
        let goal = tol_log10 - 1.0;
        let mut prev = f64::INFINITY;
        for n in 1..MAX_TERMS {
            let b = bound(n);
            if b < goal && b <= prev && n as f64 * x1 >= 1.0 {
                return Ok(n + 2);
            }
            prev = b;
        }
        Err(Error::Truncation(format!(
            "no truncation point below {MAX_TERMS} terms"
        )))
    }

    /// `n_cut` for a sum whose smallest argument is `t_min`, at the target accuracy.
    pub fn plan_truncation(&self, t_min: f64) -> Result<usize> {
        let asym = self.phi.asymptotic();
        Self::cut(
            &self.direct,
            self.desc.growth,
            t_min,
            &|x| asym.leading_log10(x),
            self.prec.eps_log10(),
        )
    }

    fn sum(
        side: &Side,
        bits: u32,
        x1: &HPComplex,
        n_cut: usize,
        f: &dyn Fn(&HPComplex) -> Result<HPComplex>,
        errs: &dyn Fn(f64, f64) -> f64,
    ) -> Result<SumResult> {
        if let Some(m) = side.coeffs.max_index() {
            if (n_cut as u64) > m {
                return Err(Error::Truncation(format!(
                    "{n_cut} coefficients needed, {} supplies {m}",
                    side.coeffs.describe()
                )));
            }
        }
        let x1f = x1.to_f64().0;
        let mut acc = HPComplex::zero(bits);
        let mut est = 0.0;
        for n in 1..=n_cut {
            let a = side.coeffs.coefficient(n as u64, bits)?;
            if a.is_zero() {
                continue;
            }
            let x = x1.mul_i64(n as i64);
            let v = f(&x)?;
            let term = &a * &v;
            est += errs(n as f64 * x1f, term.abs_f64());
            acc = &acc + &term;
        }
        Ok(SumResult {
            value: acc,
            est,
            terms: n_cut,
        })
    }

    fn theta_side(&self, side: &Side, t: &HPComplex) -> Result<EvaluationReport> {
        let x1 = t.checked_div(&side.a)?;
        let x1f = x1.to_f64().0;
        if x1f.is_nan() || x1f <= 0.0 {
            return Err(Error::Validation {
                assumption: "theta argument",
                message: "t must be a positive real".into(),
            });
        }
        let asym = self.phi.asymptotic();
        let lead = |x: f64| asym.leading_log10(x);
        let n_cut = Self::cut(side, self.desc.growth, x1f, &lead, self.prec.eps_log10())?;
        let sch = self.phi.schedule();
        let (rel_taylor, rel_asym) = relative_errors(sch, lead, &self.prec);
        let t0 = sch.t0();
        let limit = sch.taylor_limit();
        let c = side.growth_c;
        let alpha = self.desc.growth;
        let errs = |x: f64, mag: f64| {
            if x >= t0 {
                c * (x / x1f).powf(alpha) * 10f64.powf(lead(x))
            } else if x > limit {
                mag * 10f64.powf(rel_asym)
            } else {
                mag * 10f64.powf(rel_taylor)
            }
        };
        let s = Self::sum(side, self.prec.bits(), &x1, n_cut, &|x| self.phi.eval(x), &errs)?;
        let tail = c * ((n_cut + 1) as f64).powf(alpha + 1.0) * 10f64.powf(lead((n_cut + 1) as f64 * x1f));
        Ok(EvaluationReport {
            value: s.value,
            est_error: s.est + tail + 10f64.powf(-(self.prec.working_digits() as f64)),
            terms_used: s.terms,
            working_digits_used: self.prec.working_digits(),
            warnings: Vec::new(),
        })
    }

    /// `Θ(t) = Σ a_n φ(nt/A)`.
    pub fn theta(&self, t: &HPComplex) -> Result<EvaluationReport> {
        self.theta_side(&self.direct, t)
    }

    /// `Θ̂(t) = Σ â_n φ(nt/Â)`.
    pub fn theta_dual(&self, t: &HPComplex) -> Result<EvaluationReport> {
        self.theta_side(&self.dual, t)
    }

    pub fn theta_f64(&self, t: f64) -> Result<EvaluationReport> {
        self.theta(&HPComplex::from_f64(self.prec.bits(), t, 0.0))
    }

    /// `Θ(1/t) − ϵ t^w Θ̂(t) + Σ r_j t^{p_j}`, which vanishes exactly when the
    /// functional equation holds.
    pub fn feq_residual(&self, t: &HPComplex) -> Result<EvaluationReport> {
        let eps = self.sign()?.clone();
        let poles = self.known_poles()?;
        let inv = self.theta(&t.recip()?)?;
        let dual = self.theta_dual(t)?;
        let tw = t.pow(&self.weight);
        let mut v = &inv.value - &(&(&eps * &tw) * &dual.value);
        for (p, r) in &poles {
            v = &v + &(r * &t.pow(p));
        }
        let scale = (&eps * &tw).abs_f64();
        Ok(EvaluationReport {
            value: v,
            est_error: inv.est_error + scale * dual.est_error,
            terms_used: inv.terms_used + dual.terms_used,
            working_digits_used: self.prec.working_digits(),
            warnings: Vec::new(),
        })
    }

    pub fn feq_residual_f64(&self, t: f64) -> Result<EvaluationReport> {
        self.feq_residual(&HPComplex::from_f64(self.prec.bits(), t, 0.0))
    }

    /// Digits lost to `|γ(s)|` decaying like `exp(−π d |Im s| / 4)`.
    fn im_loss(&self, s: &HPComplex) -> u32 {
        let im = s.im().to_f64().abs();
        (std::f64::consts::PI * self.shape.d() as f64 * im / 4.0 / LN10).ceil() as u32
    }

    /// `Σ_n a_n ∂^k G_s(n/A)` at precision `prec`.
    fn g_sum(&self, side: &Side, s: &HPComplex, k: usize, prec: &Precision) -> Result<SumResult> {
        let g = GEvaluator::new(&self.shape.with_prec(prec.bits()), s, k, prec)?;
        let asym = g.asymptotic();
        let lead = |x: f64| asym.leading_log10(x);
        let x1 = side.a.with_prec(prec.bits()).recip()?;
        let x1f = 1.0 / side.a_f64;
        let n_cut = Self::cut(side, self.desc.growth, x1f, &lead, prec.eps_log10())?;
        let sch = g.schedule();
        let (rel_taylor, rel_asym) = relative_errors(sch, lead, prec);
        let t0 = sch.t0();
        let limit = sch.taylor_limit();
        let c = side.growth_c;
        let alpha = self.desc.growth;
        let errs = |x: f64, mag: f64| {
            if x >= t0 {
                c * (x / x1f).powf(alpha) * 10f64.powf(lead(x))
            } else if x > limit {
                mag * 10f64.powf(rel_asym)
            } else {
                mag * 10f64.powf(rel_taylor)
            }
        };
        let mut r = Self::sum(side, prec.bits(), &x1, n_cut, &|x| g.eval(x), &errs)?;
        r.est += c * ((n_cut + 1) as f64).powf(alpha + 1.0) * 10f64.powf(lead((n_cut + 1) as f64 * x1f));
        Ok(r)
    }

    /// Taylor coefficients `c_i`, `i ≤ order`, of the entire part
    /// `Σ a_n G_{s+ε}(n/A) + ϵ Σ â_n G_{w−s−ε}(n/Â)`.
    fn entire_window(&self, s: &HPComplex, order: usize, prec: &Precision) -> Result<(Vec<HPComplex>, f64, usize)> {
        let eps = self.sign()?.with_prec(prec.bits());
        let w = self.weight.with_prec(prec.bits());
        let s = s.with_prec(prec.bits());
        let s_dual = &w - &s;
        let symmetric = self.desc.is_self_dual()
            && (&s_dual - &s).log10_abs() < prec.snap_log10()
            && (&self.direct.a - &self.dual.a).is_zero();
        let mut out = Vec::with_capacity(order + 1);
        let mut est = 0.0;
        let mut terms = 0;
        for i in 0..=order {
            let direct = self.g_sum(&self.direct, &s, i, prec)?;
            let flip = if i % 2 == 0 { eps.clone() } else { -&eps };
            let (dual_value, dual_est, dual_terms) = if symmetric {
                (direct.value.clone(), direct.est, 0)
            } else {
                let r = self.g_sum(&self.dual, &s_dual, i, prec)?;
                (r.value, r.est, r.terms)
            };
            let total = &direct.value + &(&flip * &dual_value);
            let fact = HPComplex::from_rational(prec.bits(), &rug::Rational::from(factorial(i as u32)));
            out.push(total.checked_div(&fact)?);
            est = f64::max(est, (direct.est + eps.abs_f64() * dual_est) / fact.abs_f64());
            terms += direct.terms + dual_terms;
        }
        Ok((out, est, terms))
    }

    fn pole_index(&self, s: &HPComplex, prec: &Precision) -> Option<usize> {
        self.poles
            .iter()
            .position(|(p, _)| (p - s).log10_abs() < prec.snap_log10())
    }

    /// Working precision for an evaluation at `s`, raised for large `|Im s|`.
    fn precision_at(&self, s: &HPComplex) -> (Precision, Vec<String>) {
        let extra = self.im_loss(s);
        let mut warnings = Vec::new();
        if extra > 0 {
            warnings.push(format!("raised working precision by {extra} digits for Im(s)"));
        }
        (self.prec.raised(extra), warnings)
    }

    /// Re-run `f` at higher precision while its error estimate exceeds the target.
    fn with_retry<T>(
        &self,
        s: &HPComplex,
        f: impl Fn(&Precision) -> Result<(T, f64)>,
    ) -> Result<(T, f64, Precision, Vec<String>)> {
        let (mut prec, mut warnings) = self.precision_at(s);
        let target = -(self.prec.target_digits() as f64);
        let mut last = None;
        for _ in 0..3 {
            let (v, est) = f(&prec)?;
            if est.log10() <= target || est == 0.0 {
                return Ok((v, est, prec, warnings));
            }
            let short = (est.log10() - target).ceil() as u32 + 3;
            warnings.push(format!(
                "error estimate {est:.1e} above target at {} digits; retrying with {short} more",
                prec.working_digits()
            ));
            last = Some((v, est, prec));
            prec = prec.raised(short);
        }
        let (v, est, prec) = last.expect("at least one attempt");
        warnings.push(format!("error estimate {est:.1e} exceeds the requested accuracy"));
        Ok((v, est, prec, warnings))
    }

    /// `∂^k L*(s)`.
    pub fn lstar_deriv(&self, s: &HPComplex, k: usize) -> Result<EvaluationReport> {
        let poles = self.known_poles()?;
        if let Some(j) = self.pole_index(s, &self.prec) {
            return Err(Error::Pole(format!("L* at {}", poles[j].0.to_string_digits(15))));
        }
        let ((v, terms), est, prec, warnings) = self.with_retry(s, |prec| {
            let bits = prec.bits();
            let eps = self.sign()?.with_prec(bits);
            let w = self.weight.with_prec(bits);
            let s = s.with_prec(bits);
            let direct = self.g_sum(&self.direct, &s, k, prec)?;
            let dual = self.g_sum(&self.dual, &(&w - &s), k, prec)?;
            let flip = if k.is_multiple_of(2) { eps.clone() } else { -&eps };
            let mut v = &direct.value + &(&flip * &dual.value);
            let kf = HPComplex::from_rational(bits, &rug::Rational::from(factorial(k as u32)));
            for (p, r) in &poles {
                let diff = &p.with_prec(bits) - &s;
                v = &v + &(&(&r.with_prec(bits) * &kf) * &diff.powi(-(k as i64) - 1));
            }
            Ok(((v, direct.terms + dual.terms), direct.est + eps.abs_f64() * dual.est))
        })?;
        Ok(EvaluationReport {
            value: v.with_prec(self.prec.bits()),
            est_error: est,
            terms_used: terms,
            working_digits_used: prec.working_digits(),
            warnings,
        })
    }

    pub fn lstar(&self, s: &HPComplex) -> Result<EvaluationReport> {
        self.lstar_deriv(s, 0)
    }

    /// `L^{(k)}(s)` from the Laurent window of `L*(s + ε) / (A^{s+ε} γ(s + ε))`.
    pub fn l_value(&self, s: &HPComplex, k: usize) -> Result<LValue> {
        let poles = self.known_poles()?;
        self.sign()?;
        let pole = self.pole_index(s, &self.prec);
        let s = match pole {
            Some(j) => poles[j].0.clone(),
            None => s.clone(),
        };
        let p_ord = pole.is_some() as i64;
        let m = self.shape.pole_order(&s, self.prec.snap_log10()) as i64;
        let vq = m - p_ord;
        let k_i = k as i64;
        if k_i < vq {
            return Ok(LValue::Value(EvaluationReport {
                value: HPComplex::zero(self.prec.bits()),
                est_error: 0.0,
                terms_used: 0,
                working_digits_used: self.prec.working_digits(),
                warnings: vec![format!("zero of order {vq} forced by the gamma factor")],
            }));
        }
        let order = k_i - m;
        let len = (k_i - vq + 1) as usize;

        let ((q, terms), est, prec, warnings) = self.with_retry(&s, |prec| {
            let bits = prec.bits();
            let s = s.with_prec(bits);
            let (window, est, terms) = if order >= 0 {
                self.entire_window(&s, order as usize, prec)?
            } else {
                (Vec::new(), 0.0, 0)
            };
            let mut num = Vec::with_capacity(len);
            if let Some(j) = pole {
                num.push(-&poles[j].1.with_prec(bits));
            }
            for (i, c) in window.iter().enumerate() {
                let mut c = c.clone();
                for (l, (p, r)) in poles.iter().enumerate() {
                    if Some(l) == pole {
                        continue;
                    }
                    let diff = &p.with_prec(bits) - &s;
                    c = &c + &(&r.with_prec(bits) * &diff.powi(-(i as i64) - 1));
                }
                num.push(c);
            }
            let num = TruncatedLaurentSeries::new(-p_ord, num);

            let a = self.direct.a.with_prec(bits);
            let ln_a = a.ln();
            let mut exp_coeffs = Vec::with_capacity(len);
            let mut c = a.pow(&s);
            for i in 0..len {
                exp_coeffs.push(c.clone());
                c = (&c * &ln_a).div_i64(i as i64 + 1);
            }
            let a_series = TruncatedLaurentSeries::new(0, exp_coeffs);
            let gamma = gamma_factor_series(&self.shape.with_prec(bits), &s, len, prec);
            let den = a_series.mul(&gamma);
            let lead = den.coeffs()[0].abs_f64();
            let q = num.div(&den, prec.snap_log10())?;
            let kf = factorial(k as u32).to_f64();
            Ok(((q, terms), est * kf / lead))
        })?;

        if q.valuation() < 0 {
            return Ok(LValue::Pole(PoleReport {
                location: s,
                order: (-q.valuation()) as usize,
                residue: q.coefficient(-1)?.with_prec(self.prec.bits()),
                est_error: est,
            }));
        }
        let kf = HPComplex::from_rational(prec.bits(), &rug::Rational::from(factorial(k as u32)));
        let v = &q.coefficient(k_i)? * &kf;
        Ok(LValue::Value(EvaluationReport {
            value: v.with_prec(self.prec.bits()),
            est_error: est,
            terms_used: terms,
            working_digits_used: prec.working_digits(),
            warnings,
        }))
    }

    /// `L(s)`, failing at a pole.
    pub fn value(&self, s: &HPComplex) -> Result<EvaluationReport> {
        self.l_value(s, 0)?.value()
    }

    pub fn value_f64(&self, re: f64, im: f64) -> Result<EvaluationReport> {
        self.value(&HPComplex::from_f64(self.prec.bits(), re, im))
    }
}

/// `Θ(t)` for a descriptor.
pub fn theta(desc: &LFunctionDescriptor, t: &HPComplex, prec: &Precision) -> Result<EvaluationReport> {
    LFunction::prepare(desc, prec)?.theta(t)
}

/// Functional-equation residual at `t`.
pub fn feq_residual(desc: &LFunctionDescriptor, t: &HPComplex, prec: &Precision) -> Result<EvaluationReport> {
    LFunction::prepare(desc, prec)?.feq_residual(t)
}

/// `∂^k L*(s)`.
pub fn lstar_deriv(desc: &LFunctionDescriptor, s: &HPComplex, k: usize, prec: &Precision) -> Result<EvaluationReport> {
    LFunction::prepare(desc, prec)?.lstar_deriv(s, k)
}

/// `L^{(k)}(s)` or the pole it sits on.
pub fn l_value(desc: &LFunctionDescriptor, s: &HPComplex, k: usize, prec: &Precision) -> Result<LValue> {
    LFunction::prepare(desc, prec)?.l_value(s, k)
}

/// Number of terms of `Θ` needed when the smallest argument is `t_min`.
pub fn plan_truncation(desc: &LFunctionDescriptor, t_min: f64, prec: &Precision) -> Result<usize> {
    LFunction::prepare(desc, prec)?.plan_truncation(t_min)
}
