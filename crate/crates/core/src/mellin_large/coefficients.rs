use rug::ops::Pow;
use rug::{Integer, Rational};

use super::Field;
use crate::numerics::HPComplex;

/// Elementary symmetric functions of the λ's and the modified ones that
/// enter the asymptotic recursions.
#[derive(Clone, Debug)]
pub struct SymmetricData<F> {
    pub d: usize,
    /// `S_0 … S_d`
    pub s: Vec<F>,
    /// `S̃_0 … S̃_{d+1}` with `S̃_{d+1} = 0`
    pub s_tilde: Vec<F>,
    /// `(1 − d + S_1)/2`
    pub kappa: F,
}

fn binomial(n: u64, k: u64) -> Integer {
    Integer::from(Integer::binomial_u(n as u32, k as u32))
}

pub fn symmetric_data<F: Field>(lambdas: &[F]) -> SymmetricData<F> {
    let d = lambdas.len();
    assert!(d >= 1, "at least one lambda");
    let one = lambdas[0].one_like();
    // ∏ (1 + λ_j x)
    let mut s = vec![one.clone()];
    for l in lambdas {
        let mut next = s.clone();
        next.push(one.zero_like());
        for (m, c) in s.iter().enumerate() {
            next[m + 1] = next[m + 1].add(&c.mul(l));
        }
        s = next;
    }
    let neg_s1 = one.zero_like().sub(&s[1]);
    let mut s_tilde = Vec::with_capacity(d + 2);
    for m in 0..=d {
        let mut acc = one.zero_like();
        let mut pow = one.clone();
        for k in 0..=m {
            let e = m as i64 - 1 - k as i64;
            let dpow = if e >= 0 {
                Rational::from(Integer::from(Integer::u_pow_u(d as u32, e as u32)))
            } else {
                Rational::from((1, Integer::from(Integer::u_pow_u(d as u32, (-e) as u32))))
            };
            let c = Rational::from(binomial((k + d - m) as u64, k as u64)) * dpow;
            acc = acc.add(&pow.mul(&s[m - k]).scale(&c));
            pow = pow.mul(&neg_s1);
        }
        s_tilde.push(acc);
    }
    s_tilde.push(one.zero_like());
    let kappa = one
        .lift(&Rational::from(1 - d as i64))
        .add(&s[1])
        .scale(&Rational::from((1, 2)));
    SymmetricData { d, s, s_tilde, kappa }
}

/// `Δ_0 … Δ_{k_max}` with `(sinh t/t)^x = Σ Δ_k(x) t^{2k}`, as coefficient
/// vectors in `x` (lowest degree first).
pub fn delta_polys(k_max: usize) -> Vec<Vec<Rational>> {
    // ln(sinh t / t) = Σ_{k≥1} l_k t^{2k}
    let n = k_max + 1;
    let mut f = Vec::with_capacity(n);
    let mut fact = Integer::from(1);
    for k in 0..n {
        if k > 0 {
            fact *= (2 * k) as u32 * (2 * k + 1) as u32;
        }
        f.push(Rational::from((1, fact.clone())));
    }
    // g = ln f via k g_k = k f_k − Σ_{j=1}^{k−1} j g_j f_{k−j}
    let mut g = vec![Rational::new(); n];
    for k in 1..n {
        let mut acc = Rational::from(&f[k] * k as u32);
        for j in 1..k {
            acc -= Rational::from(&g[j] * &f[k - j]) * j as u32;
        }
        g[k] = acc / k as u32;
    }
    // E = exp(x g): k E_k = x Σ_{j=1}^k j g_j E_{k−j}
    let mut out: Vec<Vec<Rational>> = vec![vec![Rational::from(1)]];
    for k in 1..n {
        let mut poly = vec![Rational::new(); k + 1];
        for j in 1..=k {
            let c = Rational::from(&g[j] * j as u32);
            for (i, e) in out[k - j].iter().enumerate() {
                poly[i + 1] += Rational::from(&c * e);
            }
        }
        for c in poly.iter_mut() {
            *c /= k as u32;
        }
        out.push(poly);
    }
    out
}

fn eval_rational_poly(p: &[Rational], x: i64) -> Rational {
    let mut acc = Rational::new();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// `ν_p(n)` for `1 ≤ p ≤ d+1`.
///
/// All the λ-dependence sits in the `S̃_m`; the rest is an exact rational
/// that is computed here and lifted once.
pub fn nu<F: Field>(sym: &SymmetricData<F>, deltas: &[Vec<Rational>], p: usize, n: i64) -> F {
    let d = sym.d as i64;
    let pi = p as i64;
    let mut acc = sym.s_tilde[0].zero_like();
    for m in 0..=p.min(sym.d + 1) {
        if sym.s_tilde[m].is_zero() {
            continue;
        }
        let mut prod = Integer::from(1);
        for j in m as i64..pi {
            prod *= d - j;
        }
        if prod == 0 {
            continue;
        }
        let mut inner = Rational::new();
        let base = Rational::from(2 * n - pi + 1);
        for k in 0..=((p - m) / 2) {
            let e = (p - m - 2 * k) as u32;
            let pow = base.clone().pow(e);
            let fact = Integer::from(Integer::factorial(e));
            inner += pow / fact * eval_rational_poly(&deltas[k], d - pi);
        }
        let c = Rational::from(prod) * inner;
        acc = acc.add(&sym.s_tilde[m].scale(&c));
    }
    let two_d_p = Integer::from(Integer::u_pow_u(2 * sym.d as u32, p as u32));
    acc.scale(&Rational::from((-d, two_d_p)))
}

/// Table of `ν_p(n)` for `p = 1 … d+1`, `n = 0 … n_max`.
fn nu_table<F: Field>(sym: &SymmetricData<F>, n_max: usize) -> Vec<Vec<F>> {
    let deltas = delta_polys(sym.d + 2);
    (0..=n_max)
        .map(|n| (1..=sym.d + 1).map(|p| nu(sym, &deltas, p, n as i64)).collect())
        .collect()
}

/// `M_0 … M_{n_max}` of the asymptotic series of φ:
/// `M_n = (1/n) Σ_{p=1}^d ν_{p+1}(n) M_{n−p}`.
pub fn m_coefficients<F: Field>(sym: &SymmetricData<F>, n_max: usize) -> Vec<F> {
    let nus = nu_table(sym, n_max);
    let one = sym.s[0].one_like();
    let mut m = vec![one];
    for n in 1..=n_max {
        let mut acc = m[0].zero_like();
        for p in 1..=sym.d.min(n) {
            acc = acc.add(&nus[n][p].mul(&m[n - p]));
        }
        m.push(acc.scale(&Rational::from((1, n as u32))));
    }
    m
}

/// The factor multiplying `μ_{n−p}` in the μ recursion, split as
/// `a + b·s`.
fn mu_step<F: Field>(sym: &SymmetricData<F>, nus: &[F], n: usize, p: usize) -> (F, F) {
    let d = sym.d as i64;
    let shift = sym.s[1]
        .lift(&Rational::from(-d - 2 * (n as i64 - p as i64) - 1))
        .add(&sym.s[1])
        .scale(&Rational::from((1, 2 * d)));
    let a = nus[p].sub(&shift.mul(&nus[p - 1]));
    let b = nus[p - 1].scale(&Rational::from((-1, 2)));
    (a, b)
}

/// `μ_0(s) … μ_{n_max}(s)` as polynomials in `s` (lowest degree first).
pub fn mu_polynomials<F: Field>(sym: &SymmetricData<F>, n_max: usize) -> Vec<Vec<F>> {
    let nus = nu_table(sym, n_max);
    let zero = sym.s[0].zero_like();
    let mut mu: Vec<Vec<F>> = vec![vec![sym.s[0].one_like()]];
    for n in 1..=n_max {
        let mut acc = vec![zero.clone(); n + 1];
        for p in 1..=sym.d.min(n) {
            let (a, b) = mu_step(sym, &nus[n], n, p);
            for (i, c) in mu[n - p].iter().enumerate() {
                acc[i] = acc[i].add(&a.mul(c));
                acc[i + 1] = acc[i + 1].add(&b.mul(c));
            }
        }
        let inv = Rational::from((1, n as u32));
        mu.push(acc.iter().map(|c| c.scale(&inv)).collect());
    }
    mu
}

/// Taylor jets `μ_n(s+δ) = Σ_{i≤order} j_{n,i} δ^i` for `n = 0 … n_max`.
pub fn mu_jets(sym: &SymmetricData<HPComplex>, s: &HPComplex, order: usize, n_max: usize) -> Vec<Vec<HPComplex>> {
    let nus = nu_table(sym, n_max);
    let bits = s.prec();
    let zero = HPComplex::zero(bits);
    let len = order + 1;
    let mut one = vec![zero.clone(); len];
    one[0] = HPComplex::one(bits);
    let mut mu = vec![one];
    for n in 1..=n_max {
        let mut acc = vec![zero.clone(); len];
        for p in 1..=sym.d.min(n) {
            let (a, b) = mu_step(sym, &nus[n], n, p);
            let a = &a + &(&b * s);
            for (i, c) in mu[n - p].iter().enumerate() {
                acc[i] += &(&a * c);
                if i + 1 < len {
                    acc[i + 1] += &(&b * c);
                }
            }
        }
        mu.push(acc.iter().map(|c| c.div_i64(n as i64)).collect());
    }
    mu
}

/// `β_n = ∂^k μ_{n+k}(s)/∂s^k` for `n = 0 … n_max`.
pub fn mu_derivative_coefficients(
    sym: &SymmetricData<HPComplex>,
    s: &HPComplex,
    k: usize,
    n_max: usize,
) -> Vec<HPComplex> {
    let jets = mu_jets(sym, s, k, n_max + k);
    let mut kf = 1i64;
    for q in 2..=k as i64 {
        kf *= q;
    }
    jets[k..].iter().map(|j| j[k].mul_i64(kf)).collect()
}
