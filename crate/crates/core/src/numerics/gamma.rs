use std::sync::RwLock;

use rug::float::Constant;
use rug::{Float, Integer, Rational};

use super::{bits_to_digits, HPComplex, Precision};
use crate::error::{Error, Result};

static BERNOULLI: RwLock<Vec<Rational>> = RwLock::new(Vec::new());

/// Even-index Bernoulli numbers `B_0, B_2, …, B_{2(count-1)}`, computed once and shared.
pub fn bernoulli_even(count: usize) -> Vec<Rational> {
    {
        let cache = BERNOULLI.read().expect("bernoulli cache poisoned");
        if cache.len() >= count {
            return cache[..count].to_vec();
        }
    }
    let mut cache = BERNOULLI.write().expect("bernoulli cache poisoned");
    if cache.len() < count {
        *cache = bernoulli_table(2 * count);
    }
    cache[..count].to_vec()
}

/// All `B_{2k}` for `2k < n` via the Akiyama–Tanigawa transform.
fn bernoulli_table(n: usize) -> Vec<Rational> {
    let mut row: Vec<Rational> = Vec::with_capacity(n + 1);
    let mut out = Vec::with_capacity(n / 2 + 1);
    for m in 0..=n {
        row.push(Rational::from((1, m as u32 + 1)));
        for j in (1..=m).rev() {
            let diff = Rational::from(&row[j - 1] - &row[j]);
            row[j - 1] = diff * Rational::from(j as u32);
        }
        if m % 2 == 0 {
            out.push(row[0].clone());
        }
    }
    out
}

/// The constants every other module leans on.
#[derive(Clone, Debug)]
pub struct Constants {
    pub pi: HPComplex,
    pub ln_2pi: HPComplex,
    pub euler_gamma: HPComplex,
}

pub fn constants(prec: &Precision) -> Constants {
    let bits = prec.bits();
    let pi = Float::with_val(bits, Constant::Pi);
    let ln_2pi = Float::with_val(bits, Float::with_val(bits, &pi * 2u32).ln_ref());
    Constants {
        pi: HPComplex::from_real(&pi),
        ln_2pi: HPComplex::from_real(&ln_2pi),
        euler_gamma: HPComplex::from_real(&Float::with_val(bits, Constant::Euler)),
    }
}

/// Shift radius and number of Stirling terms for a given number of digits.
///
/// For `|z| >= radius` the truncated series (with `terms` Bernoulli terms)
/// reaches `10^-digits`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct StirlingPlan {
    pub radius: f64,
    pub terms: usize,
}

pub(crate) fn stirling_plan(digits: u32) -> StirlingPlan {
    let digits = digits as f64 + 3.0;
    let radius = (0.4 * digits + 5.0).ceil();
    // |B_2k| / (2k(2k-1) R^(2k-1)) via log of |B_2k| ≈ 2 (2k)! / (2π)^(2k)
    let ln10 = std::f64::consts::LN_10;
    let mut k = 1usize;
    loop {
        let two_k = 2.0 * k as f64;
        let ln_b = (2.0f64).ln() + ln_factorial(2 * k) - two_k * (2.0 * std::f64::consts::PI).ln();
        let ln_term = ln_b - (two_k * (two_k - 1.0)).ln() - (two_k - 1.0) * radius.ln();
        if ln_term < -digits * ln10 || k > 4000 {
            return StirlingPlan { radius, terms: k };
        }
        k += 1;
    }
}

pub(crate) fn ln_factorial(n: usize) -> f64 {
    (1..=n).map(|i| (i as f64).ln()).sum()
}

/// If `z` sits within `10^snap_log10` of a nonpositive integer, return that integer.
pub(crate) fn near_nonpositive_integer(z: &HPComplex, snap_log10: f64) -> Option<i64> {
    let (n, diff) = z.nearest_integer();
    if n <= 0 && diff.log10_abs() < snap_log10 {
        Some(n)
    } else {
        None
    }
}

/// `ln Γ(w)` by Stirling's series; valid when `Re w >= plan.radius`.
pub(crate) fn ln_gamma_stirling(w: &HPComplex, plan: StirlingPlan) -> HPComplex {
    let bits = w.prec();
    let consts_ln_2pi = {
        let pi = Float::with_val(bits, Constant::Pi);
        HPComplex::from_real(&Float::with_val(bits, Float::with_val(bits, &pi * 2u32).ln_ref()))
    };
    let half = HPComplex::from_f64(bits, 0.5, 0.0);
    let mut acc = &(&(w - &half) * &w.ln()) - w;
    acc += &(&consts_ln_2pi * &half);
    let inv = w.recip().expect("stirling argument is far from zero");
    let inv2 = inv.square();
    let bern = bernoulli_even(plan.terms + 1);
    let mut pow = inv;
    for (k, b) in bern.iter().enumerate().skip(1).take(plan.terms) {
        let k = k as i64;
        let c = HPComplex::from_rational(bits, b).div_i64(2 * k * (2 * k - 1));
        acc += &(&c * &pow);
        pow *= &inv2;
    }
    acc
}

/// Γ(z) for complex `z` off the poles.
///
/// Shifts `z` right by `m` until Stirling's series converges to working precision,
/// then divides out `z(z+1)…(z+m-1)`.
pub fn gamma(z: &HPComplex, prec: &Precision) -> Result<HPComplex> {
    let bits = prec.bits().max(z.prec());
    let z = z.with_prec(bits);
    if let Some(n) = near_nonpositive_integer(&z, prec.snap_log10()) {
        return Err(Error::Pole(n.to_string()));
    }
    let plan = stirling_plan(bits_to_digits(bits));
    let re = z.re().to_f64();
    let shift = if re < plan.radius {
        (plan.radius - re).ceil() as i64
    } else {
        0
    };
    let w = z.add_i64(shift);
    let lg = ln_gamma_stirling(&w, plan);
    let mut denom = HPComplex::one(bits);
    for k in 0..shift {
        denom *= &z.add_i64(k);
    }
    lg.exp().checked_div(&denom)
}

/// `n!` as an exact integer.
pub fn factorial(n: u32) -> Integer {
    Integer::from(Integer::factorial(n))
}
