//! Exact rational scalars.
//!
//! `Rational` is `num_rational::BigRational`, which keeps every value
//! reduced with a positive denominator.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub use num_rational::BigRational as Rational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn from_bigint(v: BigInt) -> Rational {
    Rational::from_integer(v)
}

pub fn is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}

/// Renders `a` or `a/b`.
pub fn render(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn render_latex(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else if r.is_negative() {
        format!("-\\frac{{{}}}{{{}}}", r.numer().abs(), r.denom())
    } else {
        format!("\\frac{{{}}}{{{}}}", r.numer(), r.denom())
    }
}

/// n! as a rational.
pub fn factorial(n: usize) -> Rational {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    Rational::from_integer(acc)
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}
