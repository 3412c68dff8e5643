use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use rug::Integer;

use crate::error::{Error, Result};
use crate::numerics::{HPComplex, Number};

/// Pull-based source of Dirichlet coefficients `n ↦ a_n`, `n ≥ 1`.
pub trait CoefficientProvider: Send + Sync + fmt::Debug {
    fn coefficient(&self, n: u64, bits: u32) -> Result<HPComplex>;

    /// Largest index that can be served, if bounded.
    fn max_index(&self) -> Option<u64> {
        None
    }

    /// `a_{mn} = a_m a_n` whenever `gcd(m, n) = 1`.
    fn is_multiplicative(&self) -> bool {
        false
    }

    /// The sequence `n ↦ conj(a_n)`, if the provider can produce it.
    fn conjugate(&self) -> Option<Arc<dyn CoefficientProvider>> {
        None
    }

    fn describe(&self) -> String;
}

pub(crate) fn check_index(n: u64, max: Option<u64>) -> Result<()> {
    if n == 0 {
        return Err(Error::Truncation("coefficients are indexed from 1".into()));
    }
    match max {
        Some(m) if n > m => Err(Error::Truncation(format!(
            "coefficient a_{n} requested but only a_1…a_{m} are available"
        ))),
        _ => Ok(()),
    }
}

/// `a_n = 1`.
#[derive(Clone, Debug, Default)]
pub struct One;

impl CoefficientProvider for One {
    fn coefficient(&self, n: u64, bits: u32) -> Result<HPComplex> {
        check_index(n, None)?;
        Ok(HPComplex::one(bits))
    }

    fn is_multiplicative(&self) -> bool {
        true
    }

    fn conjugate(&self) -> Option<Arc<dyn CoefficientProvider>> {
        Some(Arc::new(One))
    }

    fn describe(&self) -> String {
        "builtin:one".into()
    }
}

/// A periodic sequence `a_n = v[(n − 1) mod M]`, typically a Dirichlet character.
#[derive(Clone, Debug)]
pub struct Dirichlet {
    values: Vec<Number>,
}

impl Dirichlet {
    /// `values[i]` is `χ(i + 1)`.
    pub fn new(values: Vec<Number>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Validation {
                assumption: "coefficients",
                message: "empty value table".into(),
            });
        }
        Ok(Dirichlet { values })
    }

    pub fn modulus(&self) -> u64 {
        self.values.len() as u64
    }

    pub fn values(&self) -> &[Number] {
        &self.values
    }

    fn value(&self, n: u64) -> &Number {
        &self.values[((n - 1) % self.modulus()) as usize]
    }

    /// Complete multiplicativity checked on the value table.
    fn completely_multiplicative(&self) -> bool {
        let m = self.modulus();
        let bits = 128;
        (1..=m).all(|a| {
            (1..=m).all(|b| {
                let lhs = self.value(a * b).to_hp(bits);
                let rhs = &self.value(a).to_hp(bits) * &self.value(b).to_hp(bits);
                (&lhs - &rhs).log10_abs() < -30.0
            })
        })
    }
}

impl CoefficientProvider for Dirichlet {
    fn coefficient(&self, n: u64, bits: u32) -> Result<HPComplex> {
        check_index(n, None)?;
        Ok(self.value(n).to_hp(bits))
    }

    fn is_multiplicative(&self) -> bool {
        self.completely_multiplicative()
    }

    fn conjugate(&self) -> Option<Arc<dyn CoefficientProvider>> {
        Some(Arc::new(Dirichlet {
            values: self.values.iter().map(Number::conj).collect(),
        }))
    }

    fn describe(&self) -> String {
        let v: Vec<String> = self.values.iter().map(|x| x.to_string()).collect();
        format!("builtin:dirichlet:{}:{}", self.modulus(), v.join(","))
    }
}

/// Kronecker symbol `(D/n)`.
pub fn kronecker(d: i64, n: u64) -> i32 {
    if n == 0 {
        return if d.unsigned_abs() == 1 { 1 } else { 0 };
    }
    let mut n = n;
    let mut result = 1i32;
    let twos = n.trailing_zeros();
    n >>= twos;
    if twos > 0 {
        if d % 2 == 0 {
            return 0;
        }
        let r = d.rem_euclid(8);
        if twos % 2 == 1 && (r == 3 || r == 5) {
            result = -result;
        }
    }
    // Jacobi symbol (d mod n / n) for odd n.
    let mut a = d.rem_euclid(n as i64) as u64;
    let mut m = n;
    while a != 0 {
        while a.is_multiple_of(2) {
            a /= 2;
            if m % 8 == 3 || m % 8 == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut m);
        if a % 4 == 3 && m % 4 == 3 {
            result = -result;
        }
        a %= m;
    }
    if m == 1 {
        result
    } else {
        0
    }
}

/// Dedekind ζ of a quadratic field: `a_n = Σ_{m | n} (D/m)`.
#[derive(Clone, Debug)]
pub struct DedekindQuadratic {
    disc: i64,
}

impl DedekindQuadratic {
    pub fn new(disc: i64) -> Result<Self> {
        let r = disc.rem_euclid(4);
        if disc == 0 || disc == 1 || !(r == 0 || r == 1) {
            return Err(Error::Validation {
                assumption: "coefficients",
                message: format!("{disc} is not a quadratic discriminant"),
            });
        }
        Ok(DedekindQuadratic { disc })
    }

    pub fn discriminant(&self) -> i64 {
        self.disc
    }
}

impl CoefficientProvider for DedekindQuadratic {
    fn coefficient(&self, n: u64, bits: u32) -> Result<HPComplex> {
        check_index(n, None)?;
        let mut sum = 0i64;
        let mut m = 1u64;
        while m * m <= n {
            if n.is_multiple_of(m) {
                sum += kronecker(self.disc, m) as i64;
                if m * m != n {
                    sum += kronecker(self.disc, n / m) as i64;
                }
            }
            m += 1;
        }
        Ok(HPComplex::from_i64(bits, sum))
    }

    fn is_multiplicative(&self) -> bool {
        true
    }

    fn conjugate(&self) -> Option<Arc<dyn CoefficientProvider>> {
        Some(Arc::new(self.clone()))
    }

    fn describe(&self) -> String {
        format!("builtin:dedekind-quadratic:{}", self.disc)
    }
}

/// Ramanujan's `τ(n)`, from `q ∏ (1 − q^m)^24`, expanded on demand.
#[derive(Debug, Default)]
pub struct Tau {
    cache: Mutex<Vec<Integer>>,
}

impl Tau {
    pub fn new() -> Self {
        Self::default()
    }

    /// `τ(1) … τ(n)`.
    pub fn values(&self, n: usize) -> Vec<Integer> {
        self.with_table(n, |t| t[..n].to_vec())
    }

    pub fn value(&self, n: usize) -> Integer {
        self.with_table(n, |t| t[n - 1].clone())
    }

    fn with_table<R>(&self, n: usize, f: impl FnOnce(&[Integer]) -> R) -> R {
        let mut cache = self.cache.lock().expect("tau cache poisoned");
        if cache.len() < n {
            *cache = tau_table(n.max(2 * cache.len()).max(64));
        }
        f(&cache)
    }
}

/// `τ(1) … τ(n)` as the coefficients of `f^8`, `f = ∏(1 − q^m)^3 = Σ_k (−1)^k (2k+1) q^{k(k+1)/2}`.
///
/// `g = f^8` obeys `n g_n = Σ_{k≥1} (9k − n) f_k g_{n−k}`; `f` has `O(√n)` terms.
fn tau_table(n: usize) -> Vec<Integer> {
    let mut f = Vec::new();
    let mut k = 1usize;
    while k * (k + 1) / 2 < n {
        let v = Integer::from(2 * k + 1);
        f.push((k * (k + 1) / 2, if k.is_multiple_of(2) { v } else { -v }));
        k += 1;
    }
    let mut g = vec![Integer::from(1)];
    for m in 1..n {
        let mut acc = Integer::new();
        for (e, fe) in &f {
            if *e > m {
                break;
            }
            let w = 9 * *e as i64 - m as i64;
            acc += Integer::from(fe * &g[m - e]) * w;
        }
        acc /= m as u64;
        g.push(acc);
    }
    g
}

impl CoefficientProvider for Tau {
    fn coefficient(&self, n: u64, bits: u32) -> Result<HPComplex> {
        check_index(n, None)?;
        let r = rug::Rational::from(self.value(n as usize));
        Ok(HPComplex::from_rational(bits, &r))
    }

    fn is_multiplicative(&self) -> bool {
        true
    }

    fn conjugate(&self) -> Option<Arc<dyn CoefficientProvider>> {
        Some(Arc::new(Tau::new()))
    }

    fn describe(&self) -> String {
        "builtin:tau".into()
    }
}

/// An explicit finite list, `values[n − 1] = a_n`.
#[derive(Clone, Debug)]
pub struct Table {
    values: Vec<Number>,
    label: String,
}

impl Table {
    pub fn new(values: Vec<Number>, label: impl Into<String>) -> Self {
        Table {
            values,
            label: label.into(),
        }
    }

    pub fn values(&self) -> &[Number] {
        &self.values
    }
}

impl CoefficientProvider for Table {
    fn coefficient(&self, n: u64, bits: u32) -> Result<HPComplex> {
        check_index(n, self.max_index())?;
        Ok(self.values[n as usize - 1].to_hp(bits))
    }

    fn max_index(&self) -> Option<u64> {
        Some(self.values.len() as u64)
    }

    fn conjugate(&self) -> Option<Arc<dyn CoefficientProvider>> {
        Some(Arc::new(Table {
            values: self.values.iter().map(Number::conj).collect(),
            label: format!("conj({})", self.label),
        }))
    }

    fn describe(&self) -> String {
        self.label.clone()
    }
}

/// Coefficients synthesised from local factors: `L_p(s) = 1/F_p(p^{−s})`
/// with `F_p(X) = 1 + c_1 X + … + c_r X^r`.
#[derive(Clone, Debug)]
pub struct EulerProduct {
    factors: BTreeMap<u64, Vec<Number>>,
    limit: u64,
    label: String,
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `n = ∏ p^e`, primes increasing.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

impl EulerProduct {
    /// `factors[p] = [c_1, …, c_r]`. `max_index` is one below the first missing prime.
    pub fn new(factors: BTreeMap<u64, Vec<Number>>, label: impl Into<String>) -> Result<Self> {
        if let Some(&p) = factors.keys().find(|&&p| !is_prime(p)) {
            return Err(Error::Validation {
                assumption: "coefficients",
                message: format!("Euler factor given at non-prime {p}"),
            });
        }
        let mut q = 2;
        while factors.contains_key(&q) {
            q += 1;
            while !is_prime(q) {
                q += 1;
            }
        }
        Ok(EulerProduct {
            factors,
            limit: q - 1,
            label: label.into(),
        })
    }

    pub fn factor(&self, p: u64) -> Option<&[Number]> {
        self.factors.get(&p).map(Vec::as_slice)
    }

    /// `a_{p^e}` from the power series of `1/F_p`.
    fn prime_power(&self, p: u64, e: u32, bits: u32) -> HPComplex {
        let c: Vec<HPComplex> = self.factors[&p].iter().map(|x| x.to_hp(bits)).collect();
        let mut b = vec![HPComplex::one(bits)];
        for k in 1..=e as usize {
            let mut acc = HPComplex::zero(bits);
            for (i, ci) in c.iter().enumerate().take(k) {
                acc = &acc - &(ci * &b[k - 1 - i]);
            }
            b.push(acc);
        }
        b.pop().expect("nonempty")
    }
}

impl CoefficientProvider for EulerProduct {
    /// Served for every `n` whose prime factors all have a listed factor,
    /// beyond `max_index` too.
    fn coefficient(&self, n: u64, bits: u32) -> Result<HPComplex> {
        check_index(n, None)?;
        let mut acc = HPComplex::one(bits);
        for (p, e) in factorize(n) {
            if !self.factors.contains_key(&p) {
                return Err(Error::Truncation(format!("no Euler factor at {p} for a_{n}")));
            }
            acc = &acc * &self.prime_power(p, e, bits);
        }
        Ok(acc)
    }

    fn max_index(&self) -> Option<u64> {
        Some(self.limit)
    }

    fn is_multiplicative(&self) -> bool {
        true
    }

    fn conjugate(&self) -> Option<Arc<dyn CoefficientProvider>> {
        Some(Arc::new(EulerProduct {
            factors: self
                .factors
                .iter()
                .map(|(p, c)| (*p, c.iter().map(Number::conj).collect()))
                .collect(),
            limit: self.limit,
            label: format!("conj({})", self.label),
        }))
    }

    fn describe(&self) -> String {
        self.label.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(p: &dyn CoefficientProvider, n: u64) -> f64 {
        p.coefficient(n, 64).unwrap().to_f64().0
    }

    #[test]
    fn kronecker_minus_four() {
        let want = [1, 0, -1, 0, 1, 0, -1, 0];
        for (n, w) in (1..=8).zip(want) {
            assert_eq!(kronecker(-4, n), w, "n = {n}");
        }
        assert_eq!(kronecker(5, 2), -1);
        assert_eq!(kronecker(5, 4), 1);
        assert_eq!(kronecker(-3, 2), -1);
        assert_eq!(kronecker(8, 3), -1);
    }

    #[test]
    fn dedekind_q_i() {
        let z = DedekindQuadratic::new(-4).unwrap();
        // r_2(n)/4
        let want = [1.0, 1.0, 0.0, 1.0, 2.0, 0.0, 0.0, 1.0, 1.0, 2.0];
        for (n, w) in (1..=10).zip(want) {
            assert_eq!(re(&z, n), w);
        }
        assert!(DedekindQuadratic::new(3).is_err());
    }

    #[test]
    fn tau_small_values() {
        let t = Tau::new();
        let v = t.values(12);
        let want: [i64; 12] = [
            1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920, 534612, -370944,
        ];
        for (a, b) in v.iter().zip(want) {
            assert_eq!(*a, b);
        }
    }

    #[test]
    fn euler_product_of_zeta_q_i() {
        let mut f = BTreeMap::new();
        f.insert(2, vec![Number::int(-1)]);
        for p in [3u64, 7, 11, 19, 23] {
            f.insert(p, vec![Number::int(0), Number::int(-1)]);
        }
        for p in [5u64, 13, 17] {
            f.insert(p, vec![Number::int(-2), Number::int(1)]);
        }
        let e = EulerProduct::new(f, "test").unwrap();
        assert_eq!(e.max_index(), Some(28));
        let z = DedekindQuadratic::new(-4).unwrap();
        for n in 1..=28 {
            assert_eq!(re(&e, n), re(&z, n), "n = {n}");
        }
        assert!(e.coefficient(29, 64).is_err());
    }

    #[test]
    fn dirichlet_multiplicativity() {
        let chi = Dirichlet::new(["1", "0", "-1", "0"].iter().map(|s| s.parse().unwrap()).collect()).unwrap();
        assert!(chi.is_multiplicative());
        assert_eq!(re(&chi, 7), -1.0);
        let junk = Dirichlet::new(["1", "2", "3"].iter().map(|s| s.parse().unwrap()).collect()).unwrap();
        assert!(!junk.is_multiplicative());
    }
}
