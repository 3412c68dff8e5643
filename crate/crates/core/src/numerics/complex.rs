use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float, Rational};

use crate::error::{Error, Result};

/// Real numbers at arbitrary binary precision.
pub type HPReal = Float;

/// A complex number carried at a fixed binary precision.
///
/// Binary operations produce a result at the larger of the two operand
/// precisions. Division by an exact zero panics through the `/` operator;
/// fallible code paths use [`HPComplex::checked_div`].
#[derive(Clone, Debug, PartialEq)]
pub struct HPComplex(Complex);

impl HPComplex {
    pub fn zero(bits: u32) -> Self {
        HPComplex(Complex::new(bits))
    }

    pub fn one(bits: u32) -> Self {
        HPComplex(Complex::with_val(bits, 1))
    }

    pub fn i(bits: u32) -> Self {
        HPComplex(Complex::with_val(bits, (0, 1)))
    }

    pub fn from_f64(bits: u32, re: f64, im: f64) -> Self {
        HPComplex(Complex::with_val(bits, (re, im)))
    }

    pub fn from_i64(bits: u32, v: i64) -> Self {
        HPComplex(Complex::with_val(bits, v))
    }

    pub fn from_rational(bits: u32, r: &Rational) -> Self {
        HPComplex(Complex::with_val(bits, (Float::with_val(bits, r), 0)))
    }

    pub fn from_rationals(bits: u32, re: &Rational, im: &Rational) -> Self {
        HPComplex(Complex::with_val(
            bits,
            (Float::with_val(bits, re), Float::with_val(bits, im)),
        ))
    }

    pub fn from_real(x: &Float) -> Self {
        HPComplex(Complex::with_val(x.prec(), (x, 0)))
    }

    pub fn from_parts(re: &Float, im: &Float) -> Self {
        let bits = re.prec().max(im.prec());
        HPComplex(Complex::with_val(bits, (re, im)))
    }

    pub fn from_rug(c: Complex) -> Self {
        HPComplex(c)
    }

    pub fn pi(bits: u32) -> Self {
        HPComplex::from_real(&Float::with_val(bits, Constant::Pi))
    }

    pub fn as_rug(&self) -> &Complex {
        &self.0
    }

    pub fn into_rug(self) -> Complex {
        self.0
    }

    pub fn re(&self) -> &Float {
        self.0.real()
    }

    pub fn im(&self) -> &Float {
        self.0.imag()
    }

    pub fn prec(&self) -> u32 {
        self.0.prec().0.max(self.0.prec().1)
    }

    pub fn with_prec(&self, bits: u32) -> Self {
        HPComplex(Complex::with_val(bits, &self.0))
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re().to_f64(), self.im().to_f64())
    }

    pub fn is_zero(&self) -> bool {
        self.re().is_zero() && self.im().is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.re().is_finite() && self.im().is_finite()
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.0.abs_ref())
    }

    pub fn abs_f64(&self) -> f64 {
        self.abs().to_f64()
    }

    /// log10 |z|; `-inf` for zero. Safe far outside the f64 exponent range.
    pub fn log10_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let a = self.abs();
        let (m, e) = a.to_f64_exp();
        m.abs().log10() + e as f64 * std::f64::consts::LOG10_2
    }

    pub fn conj(&self) -> Self {
        HPComplex(Complex::with_val(self.prec(), self.0.conj_ref()))
    }

    pub fn exp(&self) -> Self {
        HPComplex(Complex::with_val(self.prec(), self.0.exp_ref()))
    }

    /// Principal branch logarithm.
    pub fn ln(&self) -> Self {
        HPComplex(Complex::with_val(self.prec(), self.0.ln_ref()))
    }

    pub fn sqrt(&self) -> Self {
        HPComplex(Complex::with_val(self.prec(), self.0.sqrt_ref()))
    }

    pub fn sin(&self) -> Self {
        HPComplex(Complex::with_val(self.prec(), self.0.sin_ref()))
    }

    pub fn cos(&self) -> Self {
        HPComplex(Complex::with_val(self.prec(), self.0.cos_ref()))
    }

    /// `self^w = exp(w log self)` on the principal branch.
    pub fn pow(&self, w: &HPComplex) -> Self {
        let bits = self.prec().max(w.prec());
        HPComplex(Complex::with_val(bits, (&self.0).pow(&w.0)))
    }

    pub fn powi(&self, n: i64) -> Self {
        if n >= 0 {
            HPComplex(Complex::with_val(self.prec(), (&self.0).pow(n as u64)))
        } else {
            let p = HPComplex(Complex::with_val(self.prec(), (&self.0).pow((-n) as u64)));
            HPComplex::one(self.prec()) / p
        }
    }

    pub fn square(&self) -> Self {
        HPComplex(Complex::with_val(self.prec(), self.0.square_ref()))
    }

    pub fn recip(&self) -> Result<Self> {
        HPComplex::one(self.prec()).checked_div(self)
    }

    pub fn checked_div(&self, rhs: &HPComplex) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let bits = self.prec().max(rhs.prec());
        Ok(HPComplex(Complex::with_val(bits, &self.0 / &rhs.0)))
    }

    pub fn mul_i64(&self, k: i64) -> Self {
        HPComplex(Complex::with_val(self.prec(), &self.0 * k))
    }

    /// Division by a nonzero machine integer.
    pub fn div_i64(&self, k: i64) -> Self {
        assert!(k != 0, "division by exact zero");
        HPComplex(Complex::with_val(self.prec(), &self.0 / k))
    }

    pub fn mul_real(&self, x: &Float) -> Self {
        let bits = self.prec().max(x.prec());
        HPComplex(Complex::with_val(bits, &self.0 * x))
    }

    pub fn add_i64(&self, k: i64) -> Self {
        HPComplex(Complex::with_val(self.prec(), &self.0 + k))
    }

    /// Nearest Gaussian-free integer to the real part, and the distance to it.
    pub fn nearest_integer(&self) -> (i64, HPComplex) {
        let r = Float::with_val(self.prec(), self.re().round_ref());
        let n = r.to_f64() as i64;
        let diff = self - &HPComplex::from_i64(self.prec(), n);
        (n, diff)
    }

    /// Decimal rendering `re` or `re+imi` with `digits` significant digits.
    pub fn to_string_digits(&self, digits: usize) -> String {
        let re = format_real(self.re(), digits);
        if self.im().is_zero() {
            return re;
        }
        let im = format_real(self.im(), digits);
        if im.starts_with('-') {
            format!("{re}{im}i")
        } else {
            format!("{re}+{im}i")
        }
    }
}

/// Fixed-format decimal rendering of a real, deterministic across runs.
pub fn format_real(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let s = x.to_string_radix(10, Some(digits.max(1)));
    if s.contains('e') {
        s
    } else {
        // Normalise to scientific form so every value looks alike.
        let neg = s.starts_with('-');
        let body = s.trim_start_matches('-');
        let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
        let all: String = format!("{int_part}{frac_part}");
        let lead = all.find(|c: char| c != '0').unwrap_or(0);
        let exp = int_part.len() as i64 - 1 - lead as i64;
        let mut sig: String = all[lead..].chars().take(digits.max(1)).collect();
        while sig.len() < digits.max(1) {
            sig.push('0');
        }
        let mantissa = if sig.len() > 1 {
            format!("{}.{}", &sig[..1], &sig[1..])
        } else {
            sig
        };
        format!("{}{}e{}", if neg { "-" } else { "" }, mantissa, exp)
    }
}

impl fmt::Display for HPComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(20);
        f.write_str(&self.to_string_digits(digits))
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $op:tt) => {
        impl $tr<&HPComplex> for &HPComplex {
            type Output = HPComplex;
            fn $method(self, rhs: &HPComplex) -> HPComplex {
                let bits = self.prec().max(rhs.prec());
                HPComplex(Complex::with_val(bits, &self.0 $op &rhs.0))
            }
        }
        impl $tr<HPComplex> for HPComplex {
            type Output = HPComplex;
            fn $method(self, rhs: HPComplex) -> HPComplex {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&HPComplex> for HPComplex {
            type Output = HPComplex;
            fn $method(self, rhs: &HPComplex) -> HPComplex {
                (&self).$method(rhs)
            }
        }
        impl $tr<HPComplex> for &HPComplex {
            type Output = HPComplex;
            fn $method(self, rhs: HPComplex) -> HPComplex {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl Div<&HPComplex> for &HPComplex {
    type Output = HPComplex;
    fn div(self, rhs: &HPComplex) -> HPComplex {
        self.checked_div(rhs).expect("division by exact zero")
    }
}

impl Div<HPComplex> for HPComplex {
    type Output = HPComplex;
    fn div(self, rhs: HPComplex) -> HPComplex {
        &self / &rhs
    }
}

impl Div<&HPComplex> for HPComplex {
    type Output = HPComplex;
    fn div(self, rhs: &HPComplex) -> HPComplex {
        &self / rhs
    }
}

impl Div<HPComplex> for &HPComplex {
    type Output = HPComplex;
    fn div(self, rhs: HPComplex) -> HPComplex {
        self / &rhs
    }
}

impl Neg for HPComplex {
    type Output = HPComplex;
    fn neg(self) -> HPComplex {
        HPComplex(-self.0)
    }
}

impl Neg for &HPComplex {
    type Output = HPComplex;
    fn neg(self) -> HPComplex {
        HPComplex(Complex::with_val(self.prec(), -&self.0))
    }
}

impl AddAssign<&HPComplex> for HPComplex {
    fn add_assign(&mut self, rhs: &HPComplex) {
        if rhs.prec() > self.prec() {
            *self = &*self + rhs;
        } else {
            self.0 += &rhs.0;
        }
    }
}

impl AddAssign<HPComplex> for HPComplex {
    fn add_assign(&mut self, rhs: HPComplex) {
        *self += &rhs;
    }
}

impl SubAssign<&HPComplex> for HPComplex {
    fn sub_assign(&mut self, rhs: &HPComplex) {
        if rhs.prec() > self.prec() {
            *self = &*self - rhs;
        } else {
            self.0 -= &rhs.0;
        }
    }
}

impl MulAssign<&HPComplex> for HPComplex {
    fn mul_assign(&mut self, rhs: &HPComplex) {
        if rhs.prec() > self.prec() {
            *self = &*self * rhs;
        } else {
            self.0 *= &rhs.0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BITS: u32 = 200;

    #[test]
    fn division_by_zero_is_an_error() {
        let a = HPComplex::one(BITS);
        assert_eq!(a.checked_div(&HPComplex::zero(BITS)), Err(Error::DivisionByZero));
    }

    #[test]
    fn exp_log_round_trip() {
        let z = HPComplex::from_f64(BITS, 1.25, -3.0);
        let back = z.ln().exp();
        assert!((&back - &z).log10_abs() < -55.0);
    }

    #[test]
    fn log10_abs_handles_tiny_values() {
        let z = HPComplex::from_f64(BITS, 10.0, 0.0).powi(-400);
        assert!((z.log10_abs() + 400.0).abs() < 1e-9);
    }

    #[test]
    fn formatting_is_scientific() {
        let z = HPComplex::from_f64(BITS, 1.5, -0.25);
        assert_eq!(z.to_string_digits(4), "1.500e0-2.500e-1i");
        assert_eq!(HPComplex::from_f64(BITS, 12345.5, 0.0).to_string_digits(6), "1.23455e4");
        assert_eq!(HPComplex::zero(BITS).to_string_digits(6), "0");
    }
}
