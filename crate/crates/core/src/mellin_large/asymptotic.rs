use rug::Rational;

use super::{
    cf_eval, m_coefficients, mu_derivative_coefficients, series_to_cf_partial, symmetric_data, ContinuedFraction,
    SymmetricData,
};
use crate::error::Result;
use crate::mellin_small::GammaFactorShape;
use crate::numerics::{bits_to_digits, HPComplex, Precision};

/// A large-t expansion `scale · e^{−d u} u^{κ+shift} C_n(1/u)`, `u = t^{2/d}`,
/// with the series already turned into a continued fraction.
#[derive(Clone, Debug)]
pub struct AsymptoticSeries {
    d: usize,
    kappa: HPComplex,
    shift: i64,
    scale: HPComplex,
    coeffs: Vec<HPComplex>,
    cf: ContinuedFraction,
    bits: u32,
}

/// Bits the expansion is built at: half as many again as the caller's.
fn build_bits(prec: &Precision) -> u32 {
    prec.bits() + prec.bits() / 2
}

fn scale_factor(d: usize, bits: u32, with_two: bool) -> HPComplex {
    let two_pi = HPComplex::pi(bits).mul_i64(2);
    let p = two_pi
        .ln()
        .mul_real(&rug::Float::with_val(bits, (d as f64 - 1.0) / 2.0))
        .exp();
    let v = p
        .checked_div(&HPComplex::from_i64(bits, d as i64).sqrt())
        .expect("d ≥ 1");
    if with_two {
        v.mul_i64(2)
    } else {
        v
    }
}

impl AsymptoticSeries {
    /// Expansion of φ with `n_terms + 1` coefficients `M_0 … M_{n_terms}`.
    pub fn phi(shape: &GammaFactorShape, n_terms: usize, prec: &Precision) -> Self {
        let bits = build_bits(prec);
        let (m, kappa) = match shape.exact_lambdas() {
            Some(ex) => {
                let sym: SymmetricData<Rational> = symmetric_data(ex);
                let m = m_coefficients(&sym, n_terms);
                (
                    m.iter().map(|r| HPComplex::from_rational(bits, r)).collect(),
                    HPComplex::from_rational(bits, &sym.kappa),
                )
            }
            None => {
                let lams: Vec<HPComplex> = shape.lambdas().iter().map(|l| l.with_prec(bits)).collect();
                let sym = symmetric_data(&lams);
                (m_coefficients(&sym, n_terms), sym.kappa.clone())
            }
        };
        Self::from_coeffs(shape.d(), kappa, 0, scale_factor(shape.d(), bits, true), m, bits)
    }

    /// Expansion of `∂^k/∂s^k G_s` with coefficients `∂^k μ_{n+k}(s)`.
    pub fn g(shape: &GammaFactorShape, s: &HPComplex, k: usize, n_terms: usize, prec: &Precision) -> Self {
        let bits = build_bits(prec);
        let sh = shape.with_prec(bits);
        let sym = symmetric_data(sh.lambdas());
        let beta = mu_derivative_coefficients(&sym, &s.with_prec(bits), k, n_terms);
        Self::from_coeffs(
            shape.d(),
            sym.kappa.clone(),
            -1 - k as i64,
            scale_factor(shape.d(), bits, false),
            beta,
            bits,
        )
    }

    fn from_coeffs(
        d: usize,
        kappa: HPComplex,
        shift: i64,
        scale: HPComplex,
        coeffs: Vec<HPComplex>,
        bits: u32,
    ) -> Self {
        let cf = series_to_cf_partial(&coeffs, bits_to_digits(bits));
        AsymptoticSeries {
            d,
            kappa,
            shift,
            scale,
            coeffs,
            cf,
            bits,
        }
    }

    pub fn coefficients(&self) -> &[HPComplex] {
        &self.coeffs
    }

    pub fn continued_fraction(&self) -> &ContinuedFraction {
        &self.cf
    }

    pub fn depth(&self) -> usize {
        self.cf.depth()
    }

    fn u(&self, t: &HPComplex) -> HPComplex {
        let t = t.with_prec(self.bits);
        t.ln().div_i64(self.d as i64).mul_i64(2).exp()
    }

    fn prefactor(&self, u: &HPComplex) -> HPComplex {
        let e = &(&self.kappa.add_i64(self.shift) * &u.ln()) - &u.mul_i64(self.d as i64);
        &self.scale * &e.exp()
    }

    /// `n`-th approximant at `t`.
    pub fn eval(&self, t: &HPComplex, n: usize) -> Result<HPComplex> {
        let u = self.u(t);
        let x = u.recip()?;
        let c = cf_eval(&self.cf, n, &x)?;
        Ok(&self.prefactor(&u) * &c)
    }

    /// Truncated asymptotic sum `Σ_{i≤n} c_i u^{−i}` instead of the fraction.
    pub fn eval_series(&self, t: &HPComplex, n: usize) -> Result<HPComplex> {
        let u = self.u(t);
        let x = u.recip()?;
        let mut acc = HPComplex::zero(self.bits);
        for c in self.coeffs[..=n.min(self.coeffs.len() - 1)].iter().rev() {
            acc = &(&acc * &x) + c;
        }
        Ok(&self.prefactor(&u) * &acc)
    }

    /// `log10 |scale · α_0 · e^{−d u} u^{κ+shift}|` in double precision.
    pub fn leading_log10(&self, t: f64) -> f64 {
        let d = self.d as f64;
        let u = t.powf(2.0 / d);
        let k = self.kappa.re().to_f64() + self.shift as f64;
        let ln = self.scale.abs_f64().ln() + self.cf.alphas[0].abs_f64().ln() - d * u + k * u.ln();
        ln / std::f64::consts::LN_10
    }
}

/// `φ_n(t)` from a prepared expansion.
pub fn phi_asym(t: &HPComplex, n: usize, asym: &AsymptoticSeries) -> Result<HPComplex> {
    asym.eval(t, n)
}

/// `∂^k/∂s^k G_s(t)` at order `n` from a prepared expansion.
pub fn g_asym(t: &HPComplex, n: usize, asym: &AsymptoticSeries) -> Result<HPComplex> {
    asym.eval(t, n)
}
