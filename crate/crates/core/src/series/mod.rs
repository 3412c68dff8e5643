//! Truncated Laurent series in one local variable `ε`, and series-valued
//! expansions of Γ and of the gamma factor.
//!
//! A series with valuation `v` and coefficients `c_0 … c_{L-1}` stands for
//! `Σ c_i ε^(v+i) + O(ε^(v+L))`. Every operation narrows the window to what
//! its inputs actually determine, so high-order garbage never leaks through.

mod gamma;

pub use gamma::{gamma_factor_series, gamma_series};

use crate::error::{Error, Result};
use crate::numerics::HPComplex;

#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedLaurentSeries {
    valuation: i64,
    coeffs: Vec<HPComplex>,
}

impl TruncatedLaurentSeries {
    /// # Panics
    /// If `coeffs` is empty.
    pub fn new(valuation: i64, coeffs: Vec<HPComplex>) -> Self {
        assert!(!coeffs.is_empty(), "a series window holds at least one term");
        TruncatedLaurentSeries { valuation, coeffs }
    }

    /// An exact polynomial `Σ p_i ε^i`, known through `ε^(len-1)`.
    pub fn from_poly(poly: &[HPComplex], len: usize, bits: u32) -> Self {
        let coeffs = (0..len.max(1))
            .map(|i| poly.get(i).cloned().unwrap_or_else(|| HPComplex::zero(bits)))
            .collect();
        TruncatedLaurentSeries::new(0, coeffs)
    }

    pub fn constant(c: HPComplex, len: usize) -> Self {
        let bits = c.prec();
        let mut coeffs = vec![HPComplex::zero(bits); len.max(1)];
        coeffs[0] = c;
        TruncatedLaurentSeries::new(0, coeffs)
    }

    pub fn valuation(&self) -> i64 {
        self.valuation
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// First exponent not determined by the window.
    pub fn order(&self) -> i64 {
        self.valuation + self.coeffs.len() as i64
    }

    pub fn coeffs(&self) -> &[HPComplex] {
        &self.coeffs
    }

    pub fn prec(&self) -> u32 {
        self.coeffs.iter().map(HPComplex::prec).max().unwrap_or(64)
    }

    /// Coefficient of `ε^e`; zero below the valuation, an error past the window.
    pub fn coefficient(&self, e: i64) -> Result<HPComplex> {
        if e < self.valuation {
            return Ok(HPComplex::zero(self.prec()));
        }
        if e >= self.order() {
            return Err(Error::Window {
                exponent: e,
                low: self.valuation,
                high: self.order(),
            });
        }
        Ok(self.coeffs[(e - self.valuation) as usize].clone())
    }

    /// Drops exactly-zero leading coefficients (keeping at least one term).
    pub fn normalized(mut self) -> Self {
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        let lead = lead.min(self.coeffs.len() - 1);
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.valuation += lead as i64;
        }
        self
    }

    pub fn truncated(mut self, len: usize) -> Self {
        self.coeffs.truncate(len.max(1));
        self
    }

    /// Multiplication by `ε^k`.
    pub fn shifted(mut self, k: i64) -> Self {
        self.valuation += k;
        self
    }

    pub fn neg(&self) -> Self {
        TruncatedLaurentSeries::new(self.valuation, self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, c: &HPComplex) -> Self {
        TruncatedLaurentSeries::new(self.valuation, self.coeffs.iter().map(|x| x * c).collect())
    }

    /// `f(c·ε)`.
    pub fn scale_variable(&self, c: &HPComplex) -> Self {
        let bits = self.prec().max(c.prec());
        let mut pow = c.powi(self.valuation);
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for x in &self.coeffs {
            coeffs.push(x * &pow);
            pow *= c;
        }
        let _ = bits;
        TruncatedLaurentSeries::new(self.valuation, coeffs)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, true)
    }

    fn combine(&self, other: &Self, subtract: bool) -> Self {
        let v = self.valuation.min(other.valuation);
        let order = self.order().min(other.order());
        let bits = self.prec().max(other.prec());
        let coeffs = (v..order)
            .map(|e| {
                let a = self.coefficient(e).unwrap_or_else(|_| HPComplex::zero(bits));
                let b = other.coefficient(e).unwrap_or_else(|_| HPComplex::zero(bits));
                if subtract {
                    a - b
                } else {
                    a + b
                }
            })
            .collect();
        TruncatedLaurentSeries::new(v, coeffs)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let len = self.len().min(other.len());
        let bits = self.prec().max(other.prec());
        let coeffs = (0..len)
            .map(|n| {
                let mut acc = HPComplex::zero(bits);
                for i in 0..=n {
                    acc += &(&self.coeffs[i] * &other.coeffs[n - i]);
                }
                acc
            })
            .collect();
        TruncatedLaurentSeries::new(self.valuation + other.valuation, coeffs)
    }

    /// `self / other`. The divisor's leading coefficient must be clearly nonzero:
    /// a leading term below `10^snap_log10` relative to the divisor's scale is
    /// reported rather than guessed.
    pub fn div(&self, other: &Self, snap_log10: f64) -> Result<Self> {
        let b = other.clone().normalized();
        if b.coeffs.iter().all(HPComplex::is_zero) {
            return Err(Error::DivisionByZeroSeries);
        }
        let scale = b
            .coeffs
            .iter()
            .map(HPComplex::log10_abs)
            .fold(f64::NEG_INFINITY, f64::max);
        let lead = b.coeffs[0].log10_abs();
        if lead - scale < snap_log10 {
            return Err(Error::PossiblyZeroLeading(lead));
        }
        let len = self.len().min(b.len());
        let bits = self.prec().max(b.prec());
        let inv0 = b.coeffs[0].recip()?;
        let mut q: Vec<HPComplex> = Vec::with_capacity(len);
        for n in 0..len {
            let mut acc = self.coeffs[n].with_prec(bits);
            for i in 1..=n {
                acc -= &(&b.coeffs[i] * &q[n - i]);
            }
            q.push(&acc * &inv0);
        }
        Ok(TruncatedLaurentSeries::new(self.valuation - b.valuation, q))
    }

    /// Re-expresses a series with nonnegative valuation at valuation 0.
    fn at_valuation_zero(&self) -> Result<Self> {
        if self.valuation < 0 {
            return Err(Error::Window {
                exponent: self.valuation,
                low: 0,
                high: self.order(),
            });
        }
        let bits = self.prec();
        let coeffs = (0..self.order())
            .map(|e| self.coefficient(e).expect("inside window"))
            .collect::<Vec<_>>();
        let coeffs = if coeffs.is_empty() {
            vec![HPComplex::zero(bits)]
        } else {
            coeffs
        };
        Ok(TruncatedLaurentSeries::new(0, coeffs))
    }

    /// `exp(f)` for `f` without negative powers.
    pub fn exp(&self) -> Result<Self> {
        let f = self.at_valuation_zero()?;
        let n = f.len();
        let mut h = Vec::with_capacity(n);
        h.push(f.coeffs[0].exp());
        for m in 1..n {
            let mut acc = HPComplex::zero(f.prec());
            for k in 1..=m {
                acc += &(&f.coeffs[k].mul_i64(k as i64) * &h[m - k]);
            }
            h.push(acc.div_i64(m as i64));
        }
        Ok(TruncatedLaurentSeries::new(0, h))
    }

    /// Principal `ln(f)` for `f` with nonzero constant term.
    pub fn ln(&self) -> Result<Self> {
        let f = self.at_valuation_zero()?;
        let f0 = &f.coeffs[0];
        if f0.is_zero() {
            return Err(Error::DivisionByZeroSeries);
        }
        let inv0 = f0.recip()?;
        let n = f.len();
        let mut g: Vec<HPComplex> = Vec::with_capacity(n);
        g.push(f0.ln());
        for m in 1..n {
            let mut acc = f.coeffs[m].mul_i64(m as i64);
            for k in 1..m {
                acc -= &(&g[k].mul_i64(k as i64) * &f.coeffs[m - k]);
            }
            g.push((&acc * &inv0).div_i64(m as i64));
        }
        Ok(TruncatedLaurentSeries::new(0, g))
    }

    /// Term-wise `d/dε`.
    pub fn derivative(&self) -> Self {
        let coeffs: Vec<HPComplex> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c.mul_i64(self.valuation + i as i64))
            .collect();
        TruncatedLaurentSeries::new(self.valuation - 1, coeffs)
    }

    /// Sum of the stored terms at a concrete `ε`.
    pub fn eval(&self, eps: &HPComplex) -> HPComplex {
        let mut acc = HPComplex::zero(self.prec().max(eps.prec()));
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * eps) + c;
        }
        &acc * &eps.powi(self.valuation)
    }
}

/// Constant term of the Laurent expansion: `f(S)*` at the expansion point.
pub fn star_extract(f: &TruncatedLaurentSeries) -> Result<HPComplex> {
    f.coefficient(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    const BITS: u32 = 200;
    const SNAP: f64 = -25.0;

    fn c(x: f64) -> HPComplex {
        HPComplex::from_f64(BITS, x, 0.0)
    }

    fn close(a: &HPComplex, b: &HPComplex) -> bool {
        (a - b).log10_abs() < -50.0
    }

    #[test]
    fn inverse_epsilon_times_epsilon() {
        let inv = TruncatedLaurentSeries::new(-1, vec![c(1.0)]);
        let eps = TruncatedLaurentSeries::new(1, vec![c(1.0)]);
        let p = inv.mul(&eps);
        assert_eq!(p.valuation(), 0);
        assert_eq!(p.len(), 1);
        assert!(close(&p.coefficient(0).unwrap(), &c(1.0)));
    }

    #[test]
    fn geometric_series() {
        let one = TruncatedLaurentSeries::constant(c(1.0), 4);
        let d = TruncatedLaurentSeries::from_poly(&[c(1.0), c(-1.0)], 4, BITS);
        let q = one.div(&d, SNAP).unwrap();
        assert_eq!(q.len(), 4);
        for e in 0..4 {
            assert!(close(&q.coefficient(e).unwrap(), &c(1.0)));
        }
    }

    #[test]
    fn pole_step_of_the_coefficient_recursion() {
        // (2/ε) / ((ε-2)/2) = -2/ε - 1 - ε/2 - …
        let a = TruncatedLaurentSeries::new(-1, vec![c(2.0), c(0.0), c(0.0)]);
        let b = TruncatedLaurentSeries::from_poly(&[c(-1.0), c(0.5)], 3, BITS);
        let q = a.div(&b, SNAP).unwrap();
        assert_eq!(q.valuation(), -1);
        assert!(close(&q.coefficient(-1).unwrap(), &c(-2.0)));
        assert!(close(&q.coefficient(0).unwrap(), &c(-1.0)));
        assert!(close(&q.coefficient(1).unwrap(), &c(-0.5)));
    }

    #[test]
    fn windows_narrow() {
        let a = TruncatedLaurentSeries::from_poly(&[c(1.0)], 5, BITS);
        let b = TruncatedLaurentSeries::from_poly(&[c(2.0)], 3, BITS);
        assert_eq!(a.mul(&b).len(), 3);
        let shifted = b.clone().shifted(1);
        let s = a.add(&shifted);
        assert_eq!(s.order(), 4);
        assert!(matches!(s.coefficient(4), Err(Error::Window { .. })));
    }

    #[test]
    fn division_by_zero_series() {
        let a = TruncatedLaurentSeries::constant(c(1.0), 3);
        let z = TruncatedLaurentSeries::from_poly(&[], 3, BITS);
        assert_eq!(a.div(&z, SNAP), Err(Error::DivisionByZeroSeries));
    }

    #[test]
    fn possibly_zero_leading_is_reported() {
        let a = TruncatedLaurentSeries::constant(c(1.0), 3);
        let b = TruncatedLaurentSeries::from_poly(&[c(1e-40), c(1.0)], 3, BITS);
        assert!(matches!(a.div(&b, SNAP), Err(Error::PossiblyZeroLeading(_))));
    }

    #[test]
    fn star_extraction() {
        let g = c(0.5772156649);
        let f = TruncatedLaurentSeries::new(-1, vec![c(1.0), -&g, c(0.25)]);
        assert!(close(&star_extract(&f).unwrap(), &-&g));
        let f = TruncatedLaurentSeries::from_poly(&[c(3.0)], 2, BITS);
        assert!(close(&star_extract(&f).unwrap(), &c(3.0)));
        let f = TruncatedLaurentSeries::new(-2, vec![c(5.0), c(2.0), c(7.0)]);
        assert!(close(&star_extract(&f).unwrap(), &c(7.0)));
        let f = TruncatedLaurentSeries::new(-3, vec![c(5.0), c(2.0)]);
        assert!(matches!(star_extract(&f), Err(Error::Window { .. })));
    }

    #[test]
    fn exp_of_log() {
        let f = TruncatedLaurentSeries::from_poly(&[c(2.0), c(-0.5), c(3.0), c(0.125)], 6, BITS);
        let back = f.ln().unwrap().exp().unwrap();
        for e in 0..6 {
            assert!(close(&back.coefficient(e).unwrap(), &f.coefficient(e).unwrap()));
        }
    }
}
