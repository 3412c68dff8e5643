use super::{GammaFactorShape, PhiCoefficientTable};
use crate::error::{Error, Result};
use crate::numerics::{HPComplex, Precision};
use crate::series::{gamma_factor_series, TruncatedLaurentSeries};

/// Coefficients of `L_{α,i,k}(x) = k! Σ_{r<i} C(r−i, k) α^(r−i−k) (−x)^r / r!`,
/// lowest degree first. Zero when `α` is (numerically) zero.
pub fn l_polynomial(alpha: &HPComplex, i: usize, k: usize, snap_log10: f64) -> Vec<HPComplex> {
    let bits = alpha.prec();
    if alpha.log10_abs() < snap_log10 {
        return vec![HPComplex::zero(bits); i];
    }
    let inv = alpha.recip().expect("alpha is nonzero");
    let i = i as i64;
    (0..i)
        .map(|r| {
            // k!·C(r−i, k) as a falling factorial
            let mut ff: i64 = 1;
            for q in 0..k as i64 {
                ff *= r - i - q;
            }
            let mut c = inv.powi(i + k as i64 - r).mul_i64(ff);
            for q in 1..=r {
                c = c.div_i64(q);
            }
            if r % 2 == 1 {
                c = -c;
            }
            c
        })
        .collect()
}

/// `∂^k/∂s^k G_s(t)` at fixed `(s, k)` by the small-t expansion, with the
/// per-term polynomials in `ln t` prepared once.
#[derive(Clone, Debug)]
pub struct GSmallEvaluator {
    s: HPComplex,
    k: usize,
    prec: Precision,
    loss_budget: f64,
    /// Laurent window of γ(s+ε) reaching ε^k.
    gamma: TruncatedLaurentSeries,
    /// Per class: `(m_j, polys[n-1][r])`.
    classes: Vec<(HPComplex, Vec<Vec<HPComplex>>)>,
    n_min_scale: f64,
}

impl GSmallEvaluator {
    pub fn new(table: &PhiCoefficientTable, s: &HPComplex, k: usize) -> Self {
        let prec = *table.precision();
        let bits = prec.bits();
        let shape: &GammaFactorShape = table.shape();
        let s = s.with_prec(bits);
        let snap = prec.snap_log10();
        let order = shape.pole_order(&s, snap);
        let gamma = gamma_factor_series(shape, &s, k + order + 1, &prec);

        let mut classes = Vec::with_capacity(shape.classes().len());
        for (j, m) in shape.base_exponents().iter().enumerate() {
            let rows = table.rows(j);
            let l = rows.first().map_or(0, Vec::len);
            let polys = rows
                .iter()
                .enumerate()
                .map(|(n, row)| {
                    let alpha = (&s - m).add_i64(2 * (n as i64 + 1));
                    let mut q = vec![HPComplex::zero(bits); l];
                    for (i, c) in row.iter().enumerate() {
                        let lp = l_polynomial(&alpha, i + 1, k, snap);
                        for (r, coef) in lp.iter().enumerate() {
                            q[r] += &(c * coef);
                        }
                    }
                    q
                })
                .collect();
            classes.push((m.clone(), polys));
        }
        GSmallEvaluator {
            s,
            k,
            prec,
            loss_budget: table.loss_budget(),
            gamma,
            classes,
            n_min_scale: shape.d() as f64,
        }
    }

    pub fn s(&self) -> &HPComplex {
        &self.s
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn precision(&self) -> &Precision {
        &self.prec
    }

    /// `k!·[ε^k](γ(s+ε) t^(−s−ε))`: the starred derivative of γ(S)/t^S.
    pub fn star_term(&self, lt: &HPComplex) -> HPComplex {
        let bits = self.prec.bits();
        let v = self.gamma.valuation();
        let k = self.k as i64;
        let neg_lt = -lt;
        let mut acc = HPComplex::zero(bits);
        let mut w = HPComplex::one(bits);
        for e in 0..=(k - v) {
            if e > 0 {
                w = (&w * &neg_lt).div_i64(e);
            }
            let g = self.gamma.coefficient(k - e).expect("window reaches ε^k");
            acc += &(&g * &w);
        }
        for q in 2..=k {
            acc = acc.mul_i64(q);
        }
        &acc * &(&-&self.s * lt).exp()
    }

    pub fn eval(&self, t: &HPComplex) -> Result<HPComplex> {
        let bits = self.prec.bits();
        let t = t.with_prec(bits);
        let lt = t.ln();
        let t2 = t.square();
        let tf = t.abs_f64();
        let n_min = (2.0 * tf * tf).powf(1.0 / self.n_min_scale).ceil().max(1.0) as usize;
        let tol = -(self.prec.working_digits() as f64);

        let star = self.star_term(&lt);
        let mut peak = star.log10_abs();
        let mut tilde = HPComplex::zero(bits);
        for (m, polys) in &self.classes {
            let prefactor = (&-m * &lt).exp();
            let pf_log = prefactor.log10_abs();
            let mut sum = HPComplex::zero(bits);
            let mut pow = HPComplex::one(bits);
            let mut done = false;
            for (n, q) in polys.iter().enumerate() {
                pow *= &t2;
                let mut p = HPComplex::zero(bits);
                for c in q.iter().rev() {
                    p = &(&p * &lt) + c;
                }
                let term = &p * &pow;
                let mag = term.log10_abs();
                sum += &term;
                peak = peak.max(mag + pf_log);
                if n + 1 >= n_min && mag + 0.31 < tol + sum.log10_abs() {
                    done = true;
                    break;
                }
            }
            if !done {
                return Err(Error::Truncation(format!(
                    "small-t series for G needs more than {} terms at t = {tf:.3e}",
                    polys.len()
                )));
            }
            tilde += &(&sum * &prefactor);
        }
        let value = &star - &tilde;
        let lost = peak - value.log10_abs();
        if lost > self.loss_budget {
            return Err(Error::Precision {
                lost,
                available: self.prec.working_digits(),
            });
        }
        Ok(value)
    }
}

/// One-shot `∂^k/∂s^k G_s(t)` by the small-t expansion.
pub fn g_small(
    s: &HPComplex,
    k: usize,
    t: &HPComplex,
    shape: &GammaFactorShape,
    prec: &Precision,
) -> Result<HPComplex> {
    let mut p = *prec;
    for _ in 0..4 {
        let table = PhiCoefficientTable::for_range(shape, t.abs_f64(), &p)?;
        match GSmallEvaluator::new(&table, s, k).eval(t) {
            Err(Error::Precision { lost, .. }) => {
                p = p.raised(lost.ceil() as u32);
            }
            other => return other.map(|v| v.with_prec(prec.bits())),
        }
    }
    Err(Error::Precision {
        lost: f64::INFINITY,
        available: p.working_digits(),
    })
}
