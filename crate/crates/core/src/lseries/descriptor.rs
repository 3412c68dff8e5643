use std::fmt;
use std::sync::Arc;

use rug::Float;

use super::coeffs::{CoefficientProvider, DedekindQuadratic, Dirichlet, One, Tau};
use crate::error::{Error, Result};
use crate::numerics::{HPComplex, Number};

/// `A` given directly, or through a conductor `N` as `A = √N / π^{d/2}`.
#[derive(Clone, Debug, PartialEq)]
pub enum ExpFactor {
    Conductor(Number),
    Direct(Number),
}

impl ExpFactor {
    pub fn value(&self, d: usize, bits: u32) -> HPComplex {
        match self {
            ExpFactor::Direct(a) => a.to_hp(bits),
            ExpFactor::Conductor(n) => {
                let pi = HPComplex::pi(bits);
                let half_d = Float::with_val(bits, d as f64 / 2.0);
                let denom = pi.ln().mul_real(&half_d).exp();
                n.to_hp(bits).sqrt().checked_div(&denom).expect("π^{d/2} ≠ 0")
            }
        }
    }
}

impl fmt::Display for ExpFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExpFactor::Conductor(n) => write!(f, "conductor {n}"),
            ExpFactor::Direct(a) => write!(f, "A {a}"),
        }
    }
}

/// A simple pole of `L*` at `location`. The stored `residue` is the value
/// `r` for which `L*(s) − r/(location − s)` is regular there, i.e. minus the
/// usual residue; for ζ this gives `r = 1` at 0 and `r = −1` at 1.
#[derive(Clone, Debug, PartialEq)]
pub struct PoleSpec {
    pub location: Number,
    pub residue: Option<Number>,
}

impl PoleSpec {
    pub fn new(location: Number, residue: Number) -> Self {
        PoleSpec {
            location,
            residue: Some(residue),
        }
    }

    pub fn unknown(location: Number) -> Self {
        PoleSpec {
            location,
            residue: None,
        }
    }
}

/// Everything needed to evaluate one L-function.
///
/// With `dual_coeffs` absent the functional equation is `L*(s) = ϵ L*(w − s)`;
/// otherwise the right-hand side uses the series `â_n` (and `Â` when given).
/// `sign = None` or a pole residue of `None` marks an unknown to be solved for.
#[derive(Clone, Debug)]
pub struct LFunctionDescriptor {
    pub coeffs: Arc<dyn CoefficientProvider>,
    pub dual_coeffs: Option<Arc<dyn CoefficientProvider>>,
    pub weight: Number,
    pub sign: Option<Number>,
    pub exp_factor: ExpFactor,
    pub lambdas: Vec<Number>,
    pub poles: Vec<PoleSpec>,
    /// `α` in `|a_n| ≤ C n^α`.
    pub growth: f64,
    /// `C`; estimated from the first coefficients when absent.
    pub growth_constant: Option<f64>,
    pub dual_exp_factor: Option<ExpFactor>,
    pub dual_poles: Option<Vec<PoleSpec>>,
}

impl LFunctionDescriptor {
    /// A self-dual descriptor with sign 1, no poles and bounded coefficients.
    pub fn new(
        coeffs: Arc<dyn CoefficientProvider>,
        weight: Number,
        lambdas: Vec<Number>,
        exp_factor: ExpFactor,
    ) -> Self {
        LFunctionDescriptor {
            coeffs,
            dual_coeffs: None,
            weight,
            sign: Some(Number::int(1)),
            exp_factor,
            lambdas,
            poles: Vec::new(),
            growth: 0.0,
            growth_constant: None,
            dual_exp_factor: None,
            dual_poles: None,
        }
    }

    pub fn with_sign(mut self, sign: Option<Number>) -> Self {
        self.sign = sign;
        self
    }

    pub fn with_pole(mut self, pole: PoleSpec) -> Self {
        self.poles.push(pole);
        self
    }

    pub fn with_growth(mut self, alpha: f64) -> Self {
        self.growth = alpha;
        self
    }

    pub fn with_growth_constant(mut self, c: f64) -> Self {
        self.growth_constant = Some(c);
        self
    }

    pub fn with_dual(mut self, dual: Arc<dyn CoefficientProvider>) -> Self {
        self.dual_coeffs = Some(dual);
        self
    }

    pub fn with_exp_factor(mut self, a: ExpFactor) -> Self {
        self.exp_factor = a;
        self
    }

    pub fn d(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_self_dual(&self) -> bool {
        self.dual_coeffs.is_none()
    }

    /// `â_n`: the dual series, or `a_n` itself.
    pub fn dual_provider(&self) -> &Arc<dyn CoefficientProvider> {
        self.dual_coeffs.as_ref().unwrap_or(&self.coeffs)
    }

    pub fn dual_exp(&self) -> &ExpFactor {
        self.dual_exp_factor.as_ref().unwrap_or(&self.exp_factor)
    }

    pub fn unknowns(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.sign.is_none() {
            out.push("sign".to_string());
        }
        for p in &self.poles {
            if p.residue.is_none() {
                out.push(format!("residue at {}", p.location));
            }
        }
        out
    }

    /// Checks the structural assumptions: a non-empty Γ-factor, a positive
    /// exponential factor, polynomially bounded coefficients, distinct
    /// simple poles, and dual pole data consistent with the functional equation.
    pub fn validate(&self) -> Result<()> {
        if self.lambdas.is_empty() {
            return Err(Error::Validation {
                assumption: "gamma factor",
                message: "at least one lambda is required".into(),
            });
        }
        let bits = 128;
        let d = self.d();
        for (label, a) in [("A", &self.exp_factor), ("dual A", self.dual_exp())] {
            let v = a.value(d, bits);
            if !v.im().is_zero() || *v.re() <= 0 || !v.is_finite() {
                return Err(Error::Validation {
                    assumption: "exponential factor",
                    message: format!("{label} must be a positive real, got {a}"),
                });
            }
        }
        if !self.growth.is_finite() || self.growth < 0.0 {
            return Err(Error::Validation {
                assumption: "coefficient growth",
                message: format!("growth exponent {} must be finite and nonnegative", self.growth),
            });
        }
        let locs: Vec<HPComplex> = self.poles.iter().map(|p| p.location.to_hp(bits)).collect();
        for i in 0..locs.len() {
            for j in 0..i {
                if (&locs[i] - &locs[j]).log10_abs() < -20.0 {
                    return Err(Error::Validation {
                        assumption: "simple poles",
                        message: format!("pole {} listed twice", self.poles[i].location),
                    });
                }
            }
        }
        self.check_dual_poles(bits)
    }

    /// Poles of `L̂*` implied by those of `L*`: `w − p` with `r̂ = −r/ϵ`.
    pub fn implied_dual_poles(&self, bits: u32) -> Option<Vec<(HPComplex, HPComplex)>> {
        let eps = self.sign.as_ref()?.to_hp(bits);
        let w = self.weight.to_hp(bits);
        self.poles
            .iter()
            .map(|p| {
                let r = p.residue.as_ref()?.to_hp(bits);
                Some((&w - &p.location.to_hp(bits), -&r.checked_div(&eps).ok()?))
            })
            .collect()
    }

    fn check_dual_poles(&self, bits: u32) -> Result<()> {
        let (Some(given), Some(implied)) = (&self.dual_poles, self.implied_dual_poles(bits)) else {
            return Ok(());
        };
        let bad = || Error::Validation {
            assumption: "functional equation",
            message: "dual poles are inconsistent with the poles, weight and sign".into(),
        };
        if given.len() != implied.len() {
            return Err(bad());
        }
        for g in given {
            let loc = g.location.to_hp(bits);
            let Some((_, r)) = implied.iter().find(|(q, _)| (q - &loc).log10_abs() < -20.0) else {
                return Err(bad());
            };
            if let Some(res) = &g.residue {
                let res = res.to_hp(bits);
                if (&res - r).log10_abs() > -20.0 + r.log10_abs().max(0.0) {
                    return Err(bad());
                }
            }
        }
        Ok(())
    }
}

/// The Riemann ζ-function.
pub fn riemann_zeta() -> LFunctionDescriptor {
    LFunctionDescriptor::new(
        Arc::new(One),
        Number::int(1),
        vec![Number::int(0)],
        ExpFactor::Conductor(Number::int(1)),
    )
    .with_pole(PoleSpec::new(Number::int(0), Number::int(1)))
    .with_pole(PoleSpec::new(Number::int(1), Number::int(-1)))
}

/// `L(χ, s)` for a primitive character mod `M` given by its values `χ(1) … χ(M)`.
/// The dual series is the conjugate character; `sign` is the root number if known.
pub fn dirichlet(values: Vec<Number>, sign: Option<Number>) -> Result<LFunctionDescriptor> {
    let chi = Dirichlet::new(values)?;
    let m = chi.modulus();
    let minus_one = chi.coefficient(m.saturating_sub(1).max(1), 64)?;
    let odd = minus_one.to_f64().0 < 0.0;
    let real = chi.values().iter().all(Number::is_real);
    let dual = chi.conjugate();
    let mut desc = LFunctionDescriptor::new(
        Arc::new(chi),
        Number::int(1),
        vec![Number::int(odd as i64)],
        ExpFactor::Conductor(Number::int(m as i64)),
    )
    .with_sign(sign);
    if !real {
        desc.dual_coeffs = dual;
    }
    Ok(desc)
}

/// Class number of the imaginary quadratic order of discriminant `d < 0`,
/// by counting reduced primitive forms.
pub fn class_number(d: i64) -> u64 {
    assert!(d < 0);
    let mut h = 0;
    let mut a = 1i64;
    while 3 * a * a <= -d {
        for b in -a + 1..=a {
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (c == a && b < 0) {
                continue;
            }
            if gcd(gcd(a, b.abs()), c) == 1 {
                h += 1;
            }
        }
        a += 1;
    }
    h
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Dedekind ζ of the quadratic field of discriminant `D`. For imaginary
/// fields the pole data comes from the class number formula; for real ones
/// the residues are left unknown.
pub fn dedekind_quadratic(disc: i64, bits: u32) -> Result<LFunctionDescriptor> {
    let provider = DedekindQuadratic::new(disc)?;
    let lambdas = if disc < 0 {
        vec![Number::int(0), Number::int(1)]
    } else {
        vec![Number::int(0), Number::int(0)]
    };
    let desc = LFunctionDescriptor::new(
        Arc::new(provider),
        Number::int(1),
        lambdas,
        ExpFactor::Conductor(Number::int(disc.abs())),
    )
    .with_growth(0.5);
    if disc > 0 {
        return Ok(desc
            .with_pole(PoleSpec::unknown(Number::int(0)))
            .with_pole(PoleSpec::unknown(Number::int(1))));
    }
    // Residue of L* at 1 is 2√π h / w.
    let w = match disc {
        -3 => 6,
        -4 => 4,
        _ => 2,
    };
    let r = HPComplex::pi(bits)
        .sqrt()
        .mul_i64(2 * class_number(disc) as i64)
        .div_i64(w);
    Ok(desc
        .with_pole(PoleSpec::new(Number::int(0), Number::Approx(r.clone())))
        .with_pole(PoleSpec::new(Number::int(1), Number::Approx(-&r))))
}

/// The weight 12 cusp form Δ, `a_n = τ(n)`.
pub fn ramanujan_delta() -> LFunctionDescriptor {
    LFunctionDescriptor::new(
        Arc::new(Tau::new()),
        Number::int(12),
        vec![Number::int(0), Number::int(1)],
        ExpFactor::Conductor(Number::int(1)),
    )
    .with_growth(6.0)
    .with_growth_constant(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_numbers() {
        for (d, h) in [
            (-3, 1),
            (-4, 1),
            (-7, 1),
            (-15, 2),
            (-20, 2),
            (-23, 3),
            (-47, 5),
            (-56, 4),
        ] {
            assert_eq!(class_number(d), h, "D = {d}");
        }
    }

    #[test]
    fn zeta_descriptor_shape() {
        let z = riemann_zeta();
        z.validate().unwrap();
        let a = z.exp_factor.value(1, 128);
        let want = HPComplex::pi(128).sqrt().recip().unwrap();
        assert!((&a - &want).log10_abs() < -35.0);
        assert!(z.unknowns().is_empty());
    }

    #[test]
    fn validation_failures() {
        let z = riemann_zeta().with_pole(PoleSpec::new(Number::int(1), Number::int(3)));
        assert!(matches!(
            z.validate(),
            Err(Error::Validation {
                assumption: "simple poles",
                ..
            })
        ));
        let z = riemann_zeta().with_exp_factor(ExpFactor::Direct(Number::int(-1)));
        assert!(matches!(
            z.validate(),
            Err(Error::Validation {
                assumption: "exponential factor",
                ..
            })
        ));
        let mut z = riemann_zeta();
        z.dual_poles = Some(vec![
            PoleSpec::new(Number::int(1), Number::int(-1)),
            PoleSpec::new(Number::int(0), Number::int(1)),
        ]);
        z.validate().unwrap();
        z.dual_poles = Some(vec![PoleSpec::new(Number::int(1), Number::int(1))]);
        assert!(z.validate().is_err());
    }

    #[test]
    fn dirichlet_parity() {
        let v = |s: &[&str]| s.iter().map(|x| x.parse().unwrap()).collect::<Vec<Number>>();
        let odd = dirichlet(v(&["1", "0", "-1", "0"]), Some(Number::int(1))).unwrap();
        assert_eq!(odd.lambdas, vec![Number::int(1)]);
        assert!(odd.is_self_dual());
        let even = dirichlet(v(&["1", "-1", "-1", "1", "0"]), Some(Number::int(1))).unwrap();
        assert_eq!(even.lambdas, vec![Number::int(0)]);
        let complex = dirichlet(v(&["1", "i", "-i", "-1", "0"]), None).unwrap();
        assert!(!complex.is_self_dual());
    }
}
