use super::GammaFactorShape;
use crate::error::{Error, Result};
use crate::numerics::{ln_factorial, HPComplex, Precision};
use crate::series::{gamma_factor_series, TruncatedLaurentSeries};

/// Laurent coefficients `c^(n)_{j,k}` of the small-t expansion of φ.
#[derive(Clone, Debug)]
pub struct PhiCoefficientTable {
    shape: GammaFactorShape,
    prec: Precision,
    target_digits: u32,
    n_max: usize,
    /// `coeffs[j][n-1][k-1] = c^(n)_{j,k}`
    coeffs: Vec<Vec<Vec<HPComplex>>>,
}

/// Builds `c^(1) … c^(n_max)` for every class at exactly `prec`.
pub fn compute_phi_coefficients(
    shape: &GammaFactorShape,
    n_max: usize,
    prec: &Precision,
) -> Result<PhiCoefficientTable> {
    let bits = prec.bits();
    let shape = shape.with_prec(bits);
    let half = HPComplex::from_f64(bits, 0.5, 0.0);
    let snap = prec.snap_log10();
    let mut coeffs = Vec::with_capacity(shape.classes().len());
    for (j, class) in shape.classes().iter().enumerate() {
        let l = class.len();
        let m = &shape.base_exponents()[j];
        let mut c: TruncatedLaurentSeries = gamma_factor_series(&shape, m, l, prec);
        let mut rows = Vec::with_capacity(n_max);
        for n in 1..=n_max as i64 {
            for (k, lambda) in shape.lambdas().iter().enumerate() {
                if class.contains(&k) {
                    let a = 1 + shape.offset(k) - n;
                    if a == 0 {
                        c = c.shifted(-1).scale(&HPComplex::from_i64(bits, 2));
                        continue;
                    }
                    let f = TruncatedLaurentSeries::from_poly(&[HPComplex::from_i64(bits, a), half.clone()], l, bits);
                    c = c.div(&f, snap)?;
                } else {
                    let a = (&(lambda + m) * &half).add_i64(-n);
                    let f = TruncatedLaurentSeries::from_poly(&[a, half.clone()], l, bits);
                    c = c.div(&f, snap)?;
                }
            }
            let row = (1..=l as i64).map(|k| c.coefficient(-k)).collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        coeffs.push(rows);
    }
    Ok(PhiCoefficientTable {
        shape,
        prec: *prec,
        target_digits: prec.target_digits(),
        n_max,
        coeffs,
    })
}

/// Rough log of the largest summand of the small-t series at `t`, against
/// log of the result, both natural logs.
fn growth_estimate(d: usize, t: f64) -> (f64, f64) {
    let d = d as f64;
    let lt = t.max(1e-300).ln();
    let mut peak = f64::NEG_INFINITY;
    let mut n = 1.0f64;
    loop {
        let v = 2.0 * n * lt - d * ln_factorial((n - 1.0) as usize);
        peak = peak.max(v);
        if n.powf(d) > 4.0 * t * t + 4.0 {
            break;
        }
        n += 1.0;
    }
    (peak, -d * t.powf(2.0 / d))
}

/// Extra working digits the small-t series loses to cancellation at `t`.
pub fn cancellation_digits(d: usize, t: f64) -> u32 {
    let (peak, result) = growth_estimate(d, t);
    ((peak - result) / std::f64::consts::LN_10).max(0.0).ceil() as u32
}

/// Number of series terms needed at `t` for `digits` correct digits.
pub fn terms_needed(d: usize, t: f64, digits: u32) -> usize {
    let df = d as f64;
    let lt = t.max(1e-300).ln();
    let target = -(digits as f64 + 3.0) * std::f64::consts::LN_10 - df * t.powf(2.0 / df);
    let mut n = 1usize;
    loop {
        let v = 2.0 * n as f64 * lt - df * ln_factorial(n.saturating_sub(1)) + 2.0 * df;
        if (n as f64).powf(df) >= 2.0 * t * t && v < target {
            return n + 4;
        }
        n += 1;
    }
}

impl PhiCoefficientTable {
    /// A table good for `0 < t ≤ t_max` at `out`'s target, with the working
    /// precision raised to absorb the cancellation expected at `t_max`.
    pub fn for_range(shape: &GammaFactorShape, t_max: f64, out: &Precision) -> Result<Self> {
        let extra = cancellation_digits(shape.d(), t_max) + 5;
        let prec = out.raised(extra);
        let n_max = terms_needed(shape.d(), t_max, prec.working_digits());
        let mut table = compute_phi_coefficients(shape, n_max, &prec)?;
        table.target_digits = out.target_digits();
        Ok(table)
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn shape(&self) -> &GammaFactorShape {
        &self.shape
    }

    pub fn precision(&self) -> &Precision {
        &self.prec
    }

    /// `c^(n)_{j,k}`.
    pub fn coefficient(&self, j: usize, n: usize, k: usize) -> &HPComplex {
        &self.coeffs[j][n - 1][k - 1]
    }

    pub(crate) fn rows(&self, j: usize) -> &[Vec<HPComplex>] {
        &self.coeffs[j]
    }

    /// Digits of cancellation the table can absorb before results fall
    /// below the caller's target.
    pub(crate) fn loss_budget(&self) -> f64 {
        self.prec.working_digits() as f64 - self.target_digits as f64 - 3.0
    }

    pub fn phi(&self, t: &HPComplex) -> Result<HPComplex> {
        let bits = self.prec.bits();
        let t = t.with_prec(bits);
        let lt = t.ln();
        let neg_lt = -&lt;
        let t2 = t.square();
        let d = self.shape.d() as f64;
        let tf = t.abs_f64();
        let n_min = (2.0 * tf * tf).powf(1.0 / d).ceil().max(1.0) as usize;
        let tol = -(self.prec.working_digits() as f64);

        let mut total = HPComplex::zero(bits);
        let mut peak = f64::NEG_INFINITY;
        for (j, rows) in self.coeffs.iter().enumerate() {
            let l = rows.first().map_or(0, Vec::len);
            let mut w = Vec::with_capacity(l);
            let mut p = HPComplex::one(bits);
            for k in 0..l {
                if k > 0 {
                    p = (&p * &neg_lt).div_i64(k as i64);
                }
                w.push(p.clone());
            }
            let prefactor = (&-&self.shape.base_exponents()[j] * &lt).exp();
            let pf_log = prefactor.log10_abs();
            let mut sum = HPComplex::zero(bits);
            let mut pow = HPComplex::one(bits);
            let mut done = false;
            for (n, row) in rows.iter().enumerate() {
                let n = n + 1;
                pow *= &t2;
                let mut term = HPComplex::zero(bits);
                for (c, wk) in row.iter().zip(&w) {
                    term += &(c * wk);
                }
                term *= &pow;
                let mag = term.log10_abs();
                sum += &term;
                peak = peak.max(mag + pf_log);
                if n >= n_min && mag + 0.31 < tol + sum.log10_abs() {
                    done = true;
                    break;
                }
            }
            if !done {
                return Err(Error::Truncation(format!(
                    "small-t series for phi needs more than {} terms at t = {:.3e}",
                    self.n_max, tf
                )));
            }
            total += &(&sum * &prefactor);
        }
        self.check_loss(peak, &total)?;
        Ok(total)
    }

    pub(crate) fn check_loss(&self, peak: f64, result: &HPComplex) -> Result<()> {
        let lost = peak - result.log10_abs();
        if lost > self.loss_budget() {
            return Err(Error::Precision {
                lost,
                available: self.prec.working_digits(),
            });
        }
        Ok(())
    }
}

/// φ(t) by the small-t series, retrying at doubled guard on cancellation.
pub fn phi_small(
    t: &HPComplex,
    shape: &GammaFactorShape,
    table: &PhiCoefficientTable,
    prec: &Precision,
) -> Result<HPComplex> {
    match table.phi(t) {
        Err(Error::Precision { .. }) => {
            let t_max = t.abs_f64();
            let raised = prec.with_doubled_guard().raised(cancellation_digits(shape.d(), t_max));
            let bigger = PhiCoefficientTable::for_range(shape, t_max, &raised)?;
            bigger.phi(t).map(|v| v.with_prec(prec.bits()))
        }
        other => other.map(|v| v.with_prec(prec.bits())),
    }
}
