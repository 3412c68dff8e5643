//! Reference values computed independently of the library's algorithms.
#![allow(dead_code)]

use lfunc::mellin_small::{build_shape_from_numbers, GammaFactorShape};
use lfunc::{HPComplex, Number};
use rug::float::Constant;
use rug::{Complete, Float, Integer, Rational};

pub fn shape(lambdas: &[&str], bits: u32) -> GammaFactorShape {
    let l: Vec<Number> = lambdas.iter().map(|s| s.parse().unwrap()).collect();
    build_shape_from_numbers(&l, bits, None).unwrap()
}

pub fn rel_err(got: &HPComplex, want: &HPComplex) -> f64 {
    (got - want).abs_f64() / want.abs_f64()
}

/// `K₀(x)` from `−(ln(x/2) + γ) I₀(x) + Σ (x²/4)^k H_k / (k!)²`, summed at
/// `bits` to absorb the cancellation for large `x`.
pub fn bessel_k0_series(x: f64, bits: u32) -> Float {
    let x = Float::with_val(bits, x);
    let q = Float::with_val(bits, &x * &x) / 4;
    let mut term = Float::with_val(bits, 1);
    let mut i0 = Float::with_val(bits, 1);
    let mut h = Float::with_val(bits, 0);
    let mut tail = Float::with_val(bits, 0);
    let eps = Float::with_val(bits, Float::i_exp(1, -(bits as i32)));
    let mut k = 1u32;
    loop {
        term *= &q;
        term /= k * k;
        h += Float::with_val(bits, 1) / k;
        i0 += &term;
        let add = Float::with_val(bits, &term * &h);
        tail += &add;
        if add < Float::with_val(bits, &tail * &eps) && k > 2 {
            break;
        }
        k += 1;
    }
    let euler = Float::with_val(bits, Constant::Euler);
    let ln = Float::with_val(bits, &x / 2).ln();
    -(ln + euler) * i0 + tail
}

/// Optimally truncated large-`x` expansion `√(π/2x) e^{−x} Σ c_k x^{−k}` with
/// `c_k = ∏_{j≤k} −(2j−1)² / (8j)`. Returns the value and the smallest term.
pub fn bessel_k0_asymptotic(x: f64, bits: u32) -> (Float, f64) {
    let xf = Float::with_val(bits, x);
    let mut term = Float::with_val(bits, 1);
    let mut sum = Float::with_val(bits, 1);
    let mut smallest = 1.0f64;
    for j in 1..200u32 {
        let next = Float::with_val(bits, &term * -(((2 * j - 1) * (2 * j - 1)) as f64)) / (8 * j) / &xf;
        if next.clone().abs() > term.clone().abs() {
            break;
        }
        term = next;
        smallest = term.to_f64().abs();
        sum += &term;
    }
    let pi = Float::with_val(bits, Constant::Pi);
    let pre = Float::with_val(bits, pi / (2 * xf.clone())).sqrt() * Float::with_val(bits, -xf).exp();
    (pre * sum, smallest)
}

/// Bernoulli numbers `B_0 … B_n` from `Σ_{k<m+1} C(m+1,k) B_k = 0`.
pub fn bernoulli(n: usize) -> Vec<Rational> {
    let mut b = vec![Rational::from(1)];
    for m in 1..=n {
        let mut acc = Rational::new();
        for (k, bk) in b.iter().enumerate() {
            acc += Rational::from(Integer::binomial_u(m as u32 + 1, k as u32).complete() * bk);
        }
        b.push(-acc / (m as u32 + 1));
    }
    b
}

/// `τ(1) … τ(n)` by expanding `q ∏_{m≥1} (1 − q^m)^24` one factor at a time.
pub fn tau_naive(n: usize) -> Vec<Integer> {
    let mut poly = vec![Integer::from(0); n];
    poly[0] = Integer::from(1); // coefficient of q^1
    for m in 1..n {
        for _ in 0..24 {
            for i in (m..n).rev() {
                let sub = poly[i - m].clone();
                poly[i] -= sub;
            }
        }
    }
    poly
}

/// `r₂(n)/4`: lattice points on `x² + y² = n`, divided by the four units.
pub fn gaussian_count(n: u64) -> i64 {
    let mut c = 0;
    let r = (n as f64).sqrt() as i64 + 1;
    for x in -r..=r {
        for y in -r..=r {
            if (x * x + y * y) as u64 == n {
                c += 1;
            }
        }
    }
    c / 4
}

/// `∫_1^∞ φ(t u) u^{s−1} (ln u)^k du` by exp-sinh quadrature with
/// `u = 1 + exp(π/2 · sinh τ)`.
pub fn g_quadrature(phi: impl Fn(&HPComplex) -> HPComplex, t: f64, s: &HPComplex, k: u32, bits: u32) -> HPComplex {
    let h = 1.0 / 64.0;
    let t = HPComplex::from_f64(bits, t, 0.0);
    let half_pi = HPComplex::pi(bits).div_i64(2);
    let mut acc = HPComplex::zero(bits);
    let sm1 = s.add_i64(-1);
    let mut j = (-6.0 / h) as i64;
    while (j as f64) * h <= 4.0 {
        let tau = HPComplex::from_f64(bits, j as f64 * h, 0.0);
        let sinh = (&tau.exp() - &(-&tau).exp()).div_i64(2);
        let cosh = (&tau.exp() + &(-&tau).exp()).div_i64(2);
        let x = (&half_pi * &sinh).exp();
        let u = x.add_i64(1);
        let jac = &(&x * &half_pi) * &cosh;
        let mut f = &phi(&(&t * &u)) * &u.pow(&sm1);
        if k > 0 {
            f = &f * &u.ln().powi(k as i64);
        }
        acc += &(&f * &jac);
        j += 1;
    }
    acc.mul_real(&Float::with_val(bits, h))
}

pub fn mpfr_gamma(x: f64, bits: u32) -> Float {
    Float::with_val(bits, x).gamma()
}

pub fn parse_csv_f64(field: &str) -> f64 {
    field.parse().expect("numeric CSV field")
}
