use super::AsymptoticSeries;
use crate::error::{Error, Result};
use crate::mellin_small::{cancellation_digits, GSmallEvaluator, GammaFactorShape, PhiCoefficientTable};
use crate::numerics::{HPComplex, Precision};

const RATIO: f64 = 0.6;
const LOG10_2: f64 = std::f64::consts::LOG10_2;

/// Where each expansion is used.
///
/// `thresholds = [t_0, t_1, …, t_K]` decrease; on `[t_i, t_{i−1})` the
/// convergent of order `orders[i−1]` is used, below `t_K` the small-t
/// series, and above `t_0` the value is taken to be zero.
#[derive(Clone, Debug, PartialEq)]
pub struct HybridSchedule {
    pub eps_log10: f64,
    pub thresholds: Vec<f64>,
    pub orders: Vec<usize>,
    /// `log10 |small(t_K) − asymptotic(t_K)|`; `-inf` when they agree exactly.
    pub crossover_residual_log10: f64,
    /// The continued fractions were abandoned and the small-t series covers `(0, t_0]`.
    pub taylor_only: bool,
}

impl HybridSchedule {
    pub fn t0(&self) -> f64 {
        self.thresholds[0]
    }

    /// Largest `t` evaluated with the small-t series.
    pub fn taylor_limit(&self) -> f64 {
        if self.taylor_only {
            self.thresholds[0]
        } else {
            *self.thresholds.last().expect("t_0 always present")
        }
    }

    fn order_for(&self, t: f64) -> Option<usize> {
        if self.taylor_only {
            return None;
        }
        (1..self.thresholds.len())
            .find(|&i| t >= self.thresholds[i])
            .map(|i| self.orders[i - 1])
    }
}

/// Smallest `t` past which the leading asymptotic term stays below `ε/2`.
fn find_t0(asym: &AsymptoticSeries, eps_log10: f64) -> f64 {
    let goal = eps_log10 - LOG10_2;
    let mut hi = 1.0;
    while asym.leading_log10(hi) >= goal || asym.leading_log10(hi * 1.5) >= goal {
        hi *= 1.5;
    }
    let mut lo = hi / 1.5;
    if asym.leading_log10(lo) < goal {
        lo = 1e-3;
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if asym.leading_log10(mid) < goal {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Smallest even `n` at which consecutive convergents have settled to `ε/2`.
fn settle_order(asym: &AsymptoticSeries, t: f64, eps_log10: f64, cap: usize, bits: u32) -> Option<usize> {
    let tt = HPComplex::from_f64(bits, t, 0.0);
    let goal = eps_log10 - LOG10_2;
    let cap = cap.min(asym.depth().saturating_sub(2));
    let mut cache: Vec<Option<HPComplex>> = vec![None; cap + 3];
    let mut get = |n: usize| -> Option<HPComplex> {
        if cache[n].is_none() {
            cache[n] = asym.eval(&tt, n).ok();
        }
        cache[n].clone()
    };
    let mut n = 0;
    while n <= cap {
        if let (Some(a), Some(b), Some(c)) = (get(n), get(n + 1), get(n + 2)) {
            if (&a - &b).log10_abs() < goal && (&a - &c).log10_abs() < goal {
                return Some(n);
            }
        }
        n += 2;
    }
    None
}

/// Thresholds and orders for an expansion, before the small side is built.
fn plan(asym: &AsymptoticSeries, d: usize, eps_log10: f64, prec: &Precision) -> (Vec<f64>, Vec<usize>) {
    let t0 = find_t0(asym, eps_log10);
    let cap = 4 * prec.working_digits() as usize;
    let affordable = prec.working_digits() / 2;
    let mut thresholds = vec![t0];
    let mut orders = Vec::new();
    let mut t = t0;
    loop {
        t *= RATIO;
        if t < 0.5 {
            break;
        }
        match settle_order(asym, t, eps_log10, cap, prec.bits()) {
            Some(n) => {
                thresholds.push(t);
                orders.push(n);
            }
            None => break,
        }
        if cancellation_digits(d, t) <= affordable {
            break;
        }
    }
    (thresholds, orders)
}

struct Parts<S> {
    small: S,
    schedule: HybridSchedule,
}

/// Builds the small side for `t_K`, runs the crossover check there and,
/// unless `strict`, falls back to the small side alone on failure.
fn assemble<S>(
    asym: &AsymptoticSeries,
    thresholds: Vec<f64>,
    orders: Vec<usize>,
    eps_log10: f64,
    prec: &Precision,
    strict: bool,
    build: impl Fn(f64) -> Result<S>,
    eval: impl Fn(&S, &HPComplex) -> Result<HPComplex>,
) -> Result<Parts<S>> {
    let mut schedule = HybridSchedule {
        eps_log10,
        thresholds,
        orders,
        crossover_residual_log10: f64::NEG_INFINITY,
        taylor_only: false,
    };
    if schedule.orders.is_empty() {
        schedule.taylor_only = true;
    } else {
        let t_k = schedule.taylor_limit();
        let small = build(t_k)?;
        let tt = HPComplex::from_f64(prec.bits(), t_k, 0.0);
        let taylor = eval(&small, &tt)?;
        let far = asym.eval(&tt, *schedule.orders.last().expect("nonempty"))?;
        let residual = (&taylor - &far).log10_abs();
        schedule.crossover_residual_log10 = residual;
        if residual <= eps_log10 {
            return Ok(Parts { small, schedule });
        }
        if strict {
            return Err(Error::Crossover {
                t: t_k,
                residual,
                eps: eps_log10,
            });
        }
        schedule.taylor_only = true;
    }
    let small = build(schedule.t0())?;
    Ok(Parts { small, schedule })
}

fn dispatch(
    t: &HPComplex,
    small: impl Fn(&HPComplex) -> Result<HPComplex>,
    asym: &AsymptoticSeries,
    schedule: &HybridSchedule,
    bits: u32,
) -> Result<HPComplex> {
    let tf = t.abs_f64();
    if tf > schedule.t0() {
        return Ok(HPComplex::zero(bits));
    }
    let v = match schedule.order_for(tf) {
        Some(n) => asym.eval(t, n)?,
        None => small(t)?,
    };
    Ok(v.with_prec(bits))
}

/// φ(t) for all `t > 0`: small-t series, continued-fraction convergents,
/// or zero, following a [`HybridSchedule`].
#[derive(Clone, Debug)]
pub struct PhiEvaluator {
    shape: GammaFactorShape,
    table: PhiCoefficientTable,
    asym: AsymptoticSeries,
    schedule: HybridSchedule,
    prec: Precision,
}

impl PhiEvaluator {
    /// Accuracy `10^eps_log10`, defaulting to halfway into the guard digits.
    pub fn new(shape: &GammaFactorShape, prec: &Precision) -> Result<Self> {
        Self::with_eps(shape, prec.eps_log10(), prec)
    }

    pub fn with_eps(shape: &GammaFactorShape, eps_log10: f64, prec: &Precision) -> Result<Self> {
        let asym = AsymptoticSeries::phi(shape, 4 * prec.working_digits() as usize + 3, prec);
        let (thresholds, orders) = plan(&asym, shape.d(), eps_log10, prec);
        Self::finish(shape, asym, thresholds, orders, eps_log10, prec, false)
    }

    /// A caller-chosen schedule; fails with [`Error::Crossover`] if the
    /// small and large expansions disagree at the last threshold.
    pub fn with_schedule(
        shape: &GammaFactorShape,
        thresholds: &[f64],
        orders: &[usize],
        eps_log10: f64,
        prec: &Precision,
    ) -> Result<Self> {
        assert_eq!(thresholds.len(), orders.len() + 1, "one order per interval");
        let n = orders.iter().copied().max().unwrap_or(0) + 3;
        let asym = AsymptoticSeries::phi(shape, n, prec);
        Self::finish(shape, asym, thresholds.to_vec(), orders.to_vec(), eps_log10, prec, true)
    }

    fn finish(
        shape: &GammaFactorShape,
        asym: AsymptoticSeries,
        thresholds: Vec<f64>,
        orders: Vec<usize>,
        eps_log10: f64,
        prec: &Precision,
        strict: bool,
    ) -> Result<Self> {
        let parts = assemble(
            &asym,
            thresholds,
            orders,
            eps_log10,
            prec,
            strict,
            |t_max| PhiCoefficientTable::for_range(shape, t_max, prec),
            |table, t| table.phi(t),
        )?;
        Ok(PhiEvaluator {
            shape: shape.clone(),
            table: parts.small,
            asym,
            schedule: parts.schedule,
            prec: *prec,
        })
    }

    pub fn schedule(&self) -> &HybridSchedule {
        &self.schedule
    }

    pub fn shape(&self) -> &GammaFactorShape {
        &self.shape
    }

    pub fn asymptotic(&self) -> &AsymptoticSeries {
        &self.asym
    }

    pub fn precision(&self) -> &Precision {
        &self.prec
    }

    pub fn eval(&self, t: &HPComplex) -> Result<HPComplex> {
        dispatch(t, |t| self.table.phi(t), &self.asym, &self.schedule, self.prec.bits())
    }

    pub fn eval_f64(&self, t: f64) -> Result<HPComplex> {
        self.eval(&HPComplex::from_f64(self.prec.bits(), t, 0.0))
    }

    /// The small-t series alone (valid up to the table's range).
    pub fn taylor(&self, t: &HPComplex) -> Result<HPComplex> {
        self.table.phi(t).map(|v| v.with_prec(self.prec.bits()))
    }

    /// `φ_n(t)`.
    pub fn convergent(&self, t: &HPComplex, n: usize) -> Result<HPComplex> {
        self.asym.eval(t, n).map(|v| v.with_prec(self.prec.bits()))
    }
}

/// `∂^k/∂s^k G_s(t)` for all `t > 0` at a fixed `(s, k)`.
#[derive(Clone, Debug)]
pub struct GEvaluator {
    small: GSmallEvaluator,
    asym: AsymptoticSeries,
    schedule: HybridSchedule,
    prec: Precision,
}

/// A small-t G evaluator whose table has enough digits at `t_max`.
fn build_g_small(
    shape: &GammaFactorShape,
    s: &HPComplex,
    k: usize,
    t_max: f64,
    prec: &Precision,
) -> Result<GSmallEvaluator> {
    let mut p = *prec;
    let probe = HPComplex::from_f64(prec.bits(), t_max, 0.0);
    for _ in 0..6 {
        let table = PhiCoefficientTable::for_range(shape, t_max, &p)?;
        let ev = GSmallEvaluator::new(&table, s, k);
        match ev.eval(&probe) {
            Err(Error::Precision { lost, .. }) => {
                let short = lost - table_budget(prec, &table);
                p = p.raised(short.max(0.0).ceil() as u32 + 5);
            }
            Err(e) => return Err(e),
            Ok(_) => return Ok(ev),
        }
    }
    Err(Error::Precision {
        lost: f64::INFINITY,
        available: p.working_digits(),
    })
}

fn table_budget(out: &Precision, table: &PhiCoefficientTable) -> f64 {
    table.precision().working_digits() as f64 - out.target_digits() as f64 - 3.0
}

impl GEvaluator {
    pub fn new(shape: &GammaFactorShape, s: &HPComplex, k: usize, prec: &Precision) -> Result<Self> {
        Self::with_eps(shape, s, k, prec.eps_log10(), prec)
    }

    pub fn with_eps(
        shape: &GammaFactorShape,
        s: &HPComplex,
        k: usize,
        eps_log10: f64,
        prec: &Precision,
    ) -> Result<Self> {
        let asym = AsymptoticSeries::g(shape, s, k, 4 * prec.working_digits() as usize + 3, prec);
        let (thresholds, orders) = plan(&asym, shape.d(), eps_log10, prec);
        let parts = assemble(
            &asym,
            thresholds,
            orders,
            eps_log10,
            prec,
            false,
            |t_max| build_g_small(shape, s, k, t_max, prec),
            |ev, t| ev.eval(t),
        )?;
        Ok(GEvaluator {
            small: parts.small,
            asym,
            schedule: parts.schedule,
            prec: *prec,
        })
    }

    pub fn schedule(&self) -> &HybridSchedule {
        &self.schedule
    }

    pub fn s(&self) -> &HPComplex {
        self.small.s()
    }

    pub fn k(&self) -> usize {
        self.small.k()
    }

    pub fn asymptotic(&self) -> &AsymptoticSeries {
        &self.asym
    }

    pub fn precision(&self) -> &Precision {
        &self.prec
    }

    pub fn eval(&self, t: &HPComplex) -> Result<HPComplex> {
        dispatch(t, |t| self.small.eval(t), &self.asym, &self.schedule, self.prec.bits())
    }

    pub fn eval_f64(&self, t: f64) -> Result<HPComplex> {
        self.eval(&HPComplex::from_f64(self.prec.bits(), t, 0.0))
    }

    pub fn taylor(&self, t: &HPComplex) -> Result<HPComplex> {
        self.small.eval(t).map(|v| v.with_prec(self.prec.bits()))
    }

    pub fn convergent(&self, t: &HPComplex, n: usize) -> Result<HPComplex> {
        self.asym.eval(t, n).map(|v| v.with_prec(self.prec.bits()))
    }
}
