use std::fmt::Debug;

use rug::Rational;

use crate::numerics::HPComplex;

/// The arithmetic the asymptotic recursions need, so that they can run
/// exactly over `Rational` or approximately over `HPComplex`.
pub trait Field: Clone + Debug {
    /// `r` carried like `self` (same precision for floating types).
    fn lift(&self, r: &Rational) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    /// # Panics
    /// On division by an exact zero.
    fn div(&self, o: &Self) -> Self;
    fn is_zero(&self) -> bool;

    fn zero_like(&self) -> Self {
        self.lift(&Rational::new())
    }

    fn one_like(&self) -> Self {
        self.lift(&Rational::from(1))
    }

    fn scale(&self, r: &Rational) -> Self {
        self.mul(&self.lift(r))
    }
}

impl Field for Rational {
    fn lift(&self, r: &Rational) -> Self {
        r.clone()
    }
    fn add(&self, o: &Self) -> Self {
        Rational::from(self + o)
    }
    fn sub(&self, o: &Self) -> Self {
        Rational::from(self - o)
    }
    fn mul(&self, o: &Self) -> Self {
        Rational::from(self * o)
    }
    fn div(&self, o: &Self) -> Self {
        assert!(!o.is_zero(), "division by exact zero");
        Rational::from(self / o)
    }
    fn is_zero(&self) -> bool {
        self.cmp0().is_eq()
    }
}

impl Field for HPComplex {
    fn lift(&self, r: &Rational) -> Self {
        HPComplex::from_rational(self.prec(), r)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn is_zero(&self) -> bool {
        HPComplex::is_zero(self)
    }
}
