use crate::error::{Error, Result};

const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Decimal precision policy: what the caller asked for and what we carry internally.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Precision {
    target_digits: u32,
    working_digits: u32,
}

impl Precision {
    /// Default policy: `max(10, 10%)` guard digits on top of the target.
    pub fn new(target_digits: u32) -> Self {
        let target_digits = target_digits.max(1);
        let guard = 10.max(target_digits.div_ceil(10));
        Precision {
            target_digits,
            working_digits: target_digits + guard,
        }
    }

    pub fn with_working(target_digits: u32, working_digits: u32) -> Result<Self> {
        if target_digits == 0 {
            return Err(Error::InvalidPrecision("target digits must be positive".into()));
        }
        if working_digits < target_digits + 5 {
            return Err(Error::InvalidPrecision(format!(
                "working digits {working_digits} < target {target_digits} + 5"
            )));
        }
        Ok(Precision {
            target_digits,
            working_digits,
        })
    }

    pub fn target_digits(&self) -> u32 {
        self.target_digits
    }

    pub fn working_digits(&self) -> u32 {
        self.working_digits
    }

    pub fn guard_digits(&self) -> u32 {
        self.working_digits - self.target_digits
    }

    /// Binary precision used for every value carried at this policy.
    pub fn bits(&self) -> u32 {
        digits_to_bits(self.working_digits)
    }

    /// Same target, `extra` more working digits.
    pub fn raised(&self, extra: u32) -> Self {
        Precision {
            target_digits: self.target_digits,
            working_digits: self.working_digits + extra,
        }
    }

    pub fn with_doubled_guard(&self) -> Self {
        self.raised(self.guard_digits())
    }

    /// log10 of the accuracy the evaluators aim for: halfway into the guard digits.
    pub fn eps_log10(&self) -> f64 {
        -(self.target_digits as f64 + self.guard_digits() as f64 / 2.0)
    }

    /// log10 of the tolerance below which a quantity is treated as an exact zero
    /// (poles, even-integer differences, vanishing series coefficients).
    pub fn snap_log10(&self) -> f64 {
        -(self.working_digits as f64) / 2.0
    }
}

pub fn digits_to_bits(digits: u32) -> u32 {
    (digits as f64 * LOG2_10).ceil() as u32 + 16
}

pub fn bits_to_digits(bits: u32) -> u32 {
    ((bits.saturating_sub(16)) as f64 / LOG2_10).floor() as u32
}
