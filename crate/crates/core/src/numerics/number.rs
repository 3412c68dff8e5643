use std::fmt;
use std::str::FromStr;

use rug::float::Constant;
use rug::{Float, Rational};

use super::HPComplex;
use crate::error::{Error, Result};

/// A user-supplied parameter, kept exact whenever the literal allows it so
/// that it can be re-materialised at any working precision.
#[derive(Clone, Debug, PartialEq)]
pub enum Number {
    /// `re + im·i` with rational parts.
    Exact { re: Rational, im: Rational },
    /// `e(q) = exp(2πi q)`.
    RootOfUnity(Rational),
    /// Anything else, frozen at the precision it was created with.
    Approx(HPComplex),
}

impl Number {
    pub fn int(v: i64) -> Self {
        Number::Exact {
            re: Rational::from(v),
            im: Rational::new(),
        }
    }

    pub fn rational(r: Rational) -> Self {
        Number::Exact {
            re: r,
            im: Rational::new(),
        }
    }

    pub fn to_hp(&self, bits: u32) -> HPComplex {
        match self {
            Number::Exact { re, im } => HPComplex::from_rationals(bits, re, im),
            Number::RootOfUnity(q) => {
                let two_pi = Float::with_val(bits, Constant::Pi) * 2u32;
                let arg = Float::with_val(bits, &two_pi * q);
                HPComplex::from_f64(bits, 0.0, 1.0).mul_real(&arg).exp()
            }
            Number::Approx(z) => z.with_prec(bits),
        }
    }

    /// The value as an exact rational, when it is one.
    pub fn as_rational(&self) -> Option<Rational> {
        match self {
            Number::Exact { re, im } if im.is_zero() => Some(re.clone()),
            Number::RootOfUnity(q) => {
                let twice = Rational::from(q * 2u32);
                let den1 = *twice.denom() == 1u32;
                if den1 {
                    // e(q) = ±1 exactly.
                    let k = twice.numer().is_even();
                    Some(Rational::from(if k { 1 } else { -1 }))
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    pub fn is_real(&self) -> bool {
        match self {
            Number::Exact { im, .. } => im.is_zero(),
            Number::RootOfUnity(_) => self.as_rational().is_some(),
            Number::Approx(z) => z.im().is_zero(),
        }
    }

    pub fn conj(&self) -> Number {
        match self {
            Number::Exact { re, im } => Number::Exact {
                re: re.clone(),
                im: Rational::from(-im),
            },
            Number::RootOfUnity(q) => Number::RootOfUnity(Rational::from(-q)),
            Number::Approx(z) => Number::Approx(z.conj()),
        }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        self.to_hp(64).to_f64()
    }
}

impl fmt::Display for Number {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Number::Exact { re, im } if im.is_zero() => write!(f, "{re}"),
            Number::Exact { re, im } => {
                if *im < 0 {
                    write!(f, "{re}{im}i")
                } else {
                    write!(f, "{re}+{im}i")
                }
            }
            Number::RootOfUnity(q) => write!(f, "e({q})"),
            Number::Approx(z) => write!(f, "{z:.20}"),
        }
    }
}

impl FromStr for Number {
    type Err = Error;

    /// Accepts `3`, `-1/6`, `0.25`, `1.5e-3`, `1+2i`, `-i`, `2.5-0.5i`, `e(1/3)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse {
            line: 0,
            message: format!("cannot parse number `{s}`"),
        };
        if s.is_empty() {
            return Err(bad());
        }
        if let Some(inner) = s.strip_prefix("e(").and_then(|r| r.strip_suffix(')')) {
            return Ok(Number::RootOfUnity(parse_real(inner).ok_or_else(bad)?));
        }
        if let Some(body) = s.strip_suffix('i') {
            // Split at the last sign that is not part of an exponent.
            let bytes = body.as_bytes();
            let mut split = None;
            for k in (1..bytes.len()).rev() {
                let c = bytes[k];
                if (c == b'+' || c == b'-') && !matches!(bytes[k - 1], b'e' | b'E') {
                    split = Some(k);
                    break;
                }
            }
            let (re_s, im_s) = match split {
                Some(k) => (&body[..k], &body[k..]),
                None => ("0", body),
            };
            let im_s = match im_s {
                "" | "+" => "1",
                "-" => "-1",
                other => other,
            };
            let re = parse_real(re_s).ok_or_else(bad)?;
            let im = parse_real(im_s.trim_start_matches('+')).ok_or_else(bad)?;
            return Ok(Number::Exact { re, im });
        }
        Ok(Number::rational(parse_real(s).ok_or_else(bad)?))
    }
}

/// Exact rational value of a decimal or fraction literal.
pub fn parse_real(s: &str) -> Option<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = parse_real(n)?;
        let d = parse_real(d)?;
        if d.is_zero() {
            return None;
        }
        return Some(n / d);
    }
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(k) => (&s[..k], s[k + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int_part, frac_part) = mant.split_once('.').unwrap_or((mant, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let num = rug::Integer::from_str(if digits.is_empty() { "0" } else { &digits }).ok()?;
    let scale = exp - frac_part.len() as i32;
    let pow10 = |k: u32| Rational::from(rug::Integer::from(rug::Integer::u_pow_u(10, k)));
    let mut r = Rational::from(num);
    if scale >= 0 {
        r *= pow10(scale as u32);
    } else {
        r /= pow10((-scale) as u32);
    }
    if neg {
        r = -r;
    }
    Some(r)
}
