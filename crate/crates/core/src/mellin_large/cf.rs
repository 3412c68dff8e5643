use crate::error::{Error, Result};
use crate::numerics::HPComplex;

/// `α_0 + x^{k_0}/(α_1 + x^{k_1}/(α_2 + …))`.
#[derive(Clone, Debug)]
pub struct ContinuedFraction {
    pub alphas: Vec<HPComplex>,
    pub exponents: Vec<u32>,
    /// The expansion ended with an exactly-zero remainder.
    pub terminated: bool,
}

impl ContinuedFraction {
    /// Largest usable convergent order.
    pub fn depth(&self) -> usize {
        self.alphas.len() - 1
    }
}

/// Builds the continued fraction of `Σ c_n x^n`.
///
/// `p_n = B_n/A_n` is carried as a pair of series; each step costs one
/// linear pass, so the whole expansion is quadratic in the input length.
/// Coefficients below `10^(-digits+5)` of their neighbourhood count as
/// zero. A leading coefficient between that and `10^(-digits/2)` cannot be
/// classified and raises [`Error::Degenerate`].
pub fn series_to_cf(coeffs: &[HPComplex], digits: u32) -> Result<ContinuedFraction> {
    build(coeffs, digits, true)
}

/// Like [`series_to_cf`] but stops quietly at the first unclassifiable
/// coefficient, keeping the convergents built so far.
pub fn series_to_cf_partial(coeffs: &[HPComplex], digits: u32) -> ContinuedFraction {
    build(coeffs, digits, false).expect("partial construction does not fail")
}

fn build(coeffs: &[HPComplex], digits: u32, strict: bool) -> Result<ContinuedFraction> {
    assert!(!coeffs.is_empty(), "need at least one coefficient");
    let bits = coeffs[0].prec();
    let zero_log = -(digits as f64) + 5.0;
    let doubt_log = -(digits as f64) / 2.0;

    let mut b: Vec<HPComplex> = coeffs.to_vec();
    let mut a: Vec<HPComplex> = vec![HPComplex::zero(bits); coeffs.len()];
    a[0] = HPComplex::one(bits);
    let mut alphas = Vec::new();
    let mut exponents = Vec::new();
    loop {
        let alpha = b[0].checked_div(&a[0])?;
        // r = B − αA, with noise-level entries flushed to zero
        let mut r = Vec::with_capacity(b.len());
        let mut rel = Vec::with_capacity(b.len());
        for (bi, ai) in b.iter().zip(&a) {
            let prod = &alpha * ai;
            let scale = bi.log10_abs().max(prod.log10_abs());
            let v = bi - &prod;
            let q = v.log10_abs() - scale;
            if v.is_zero() || q < zero_log {
                r.push(HPComplex::zero(bits));
                rel.push(f64::NEG_INFINITY);
            } else {
                r.push(v);
                rel.push(q);
            }
        }
        alphas.push(alpha);
        let Some(lead) = r.iter().skip(1).position(|c| !c.is_zero()).map(|i| i + 1) else {
            let terminated = r.len() > 1;
            return Ok(ContinuedFraction {
                alphas,
                exponents,
                terminated,
            });
        };
        if rel[lead] < doubt_log {
            if strict {
                return Err(Error::Degenerate(alphas.len()));
            }
            break;
        }
        exponents.push(lead as u32);
        // p_{n+1} = A/(r/x^lead); the window shrinks by `lead`
        b = a[..a.len() - lead].to_vec();
        a = r[lead..].to_vec();
    }
    Ok(ContinuedFraction {
        alphas,
        exponents,
        terminated: false,
    })
}

/// Convergent `C_n(x)`, evaluated innermost-out. Orders beyond the
/// available depth use the deepest convergent.
pub fn cf_eval(cf: &ContinuedFraction, n: usize, x: &HPComplex) -> Result<HPComplex> {
    let n = n.min(cf.depth());
    let mut v = cf.alphas[n].clone();
    for i in (0..n).rev() {
        let num = x.powi(cf.exponents[i] as i64);
        v = &cf.alphas[i] + &num.checked_div(&v)?;
    }
    Ok(v)
}
