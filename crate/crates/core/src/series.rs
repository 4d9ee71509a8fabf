//! Truncated power series in `t` with polynomial coefficients.
//!
//! Every generating function is realized here as a coefficient vector
//! `coeffs[0..=K]`. Binary operations truncate to the smaller order.

use std::ops::{Add, Mul};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::MultiPoly;
use crate::rational::{self, Rational};

/// Truncation order used when the caller does not pick one.
pub const DEFAULT_ORDER: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncSeries {
    coeffs: Vec<MultiPoly>,
}

impl TruncSeries {
    /// Series from explicit coefficients; the order is `coeffs.len() - 1`.
    ///
    /// An empty vector is treated as the zero series of order 0.
    pub fn from_coeffs(mut coeffs: Vec<MultiPoly>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(MultiPoly::zero());
        }
        TruncSeries { coeffs }
    }

    pub fn constant(c: MultiPoly, order: usize) -> Self {
        let mut coeffs = vec![MultiPoly::zero(); order + 1];
        coeffs[0] = c;
        TruncSeries { coeffs }
    }

    pub fn one(order: usize) -> Self {
        TruncSeries::constant(MultiPoly::one(), order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[MultiPoly] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Option<&MultiPoly> {
        self.coeffs.get(n)
    }

    /// `n! * [t^n]`, the exponential-generating-function value.
    pub fn egf_coeff(&self, n: usize) -> Option<MultiPoly> {
        self.coeffs.get(n).map(|c| c.scale(&rational::factorial(n)))
    }

    pub fn truncate(&self, order: usize) -> TruncSeries {
        let mut coeffs: Vec<MultiPoly> = self.coeffs.iter().take(order + 1).cloned().collect();
        coeffs.resize(order + 1, MultiPoly::zero());
        TruncSeries { coeffs }
    }

    pub fn scale(&self, c: &Rational) -> TruncSeries {
        TruncSeries {
            coeffs: self.coeffs.iter().map(|p| p.scale(c)).collect(),
        }
    }

    /// Multiplicative inverse. The constant term must be a nonzero rational.
    pub fn inv(&self) -> Result<TruncSeries> {
        let a0 = self.coeffs[0]
            .as_constant()
            .filter(|c| !c.is_zero())
            .ok_or(Error::NonInvertibleSeries)?;
        let inv_a0 = a0.recip();
        let neg_inv = -inv_a0.clone();
        let order = self.order();
        let mut out: Vec<MultiPoly> = Vec::with_capacity(order + 1);
        out.push(MultiPoly::constant(inv_a0));
        for n in 1..=order {
            let mut acc = MultiPoly::zero();
            for k in 1..=n {
                if self.coeffs[k].is_zero() || out[n - k].is_zero() {
                    continue;
                }
                acc += &self.coeffs[k] * &out[n - k];
            }
            out.push(acc.scale(&neg_inv));
        }
        Ok(TruncSeries { coeffs: out })
    }

    /// `self^e` for `e >= 1`; `e = 0` yields the unit series.
    pub fn pow(&self, e: u32) -> TruncSeries {
        let mut acc = TruncSeries::one(self.order());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

impl Mul for &TruncSeries {
    type Output = TruncSeries;

    fn mul(self, rhs: &TruncSeries) -> TruncSeries {
        let order = self.order().min(rhs.order());
        let mut coeffs = vec![MultiPoly::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(order + 1 - i) {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] += a * b;
            }
        }
        TruncSeries { coeffs }
    }
}

impl Add for &TruncSeries {
    type Output = TruncSeries;

    fn add(self, rhs: &TruncSeries) -> TruncSeries {
        let order = self.order().min(rhs.order());
        TruncSeries {
            coeffs: (0..=order).map(|n| &self.coeffs[n] + &rhs.coeffs[n]).collect(),
        }
    }
}

/// `e^{c t}`: coefficients `c^n / n!`.
pub fn exp_linear(c: &MultiPoly, order: usize) -> TruncSeries {
    let mut coeffs = Vec::with_capacity(order + 1);
    coeffs.push(MultiPoly::one());
    for n in 1..=order {
        let next = (&coeffs[n - 1] * c).scale(&rational::ratio(1, n as i64));
        coeffs.push(next);
    }
    TruncSeries { coeffs }
}

/// `(1 + qt)^{w/q}`, defined by its coefficients `(w)_{n,q} / n!`.
///
/// The q-falling product `w (w - q) ... (w - (n-1) q)` keeps every
/// coefficient polynomial; no fractional power is ever formed.
pub fn q_binomial_series(w: &MultiPoly, order: usize) -> TruncSeries {
    falling_coefficients(w, &MultiPoly::q(), order)
}

/// `(1 + t)^w`: coefficients `(w)_n / n!` with the ordinary falling factorial.
pub fn binomial_series_classical(w: &MultiPoly, order: usize) -> TruncSeries {
    falling_coefficients(w, &MultiPoly::one(), order)
}

fn falling_coefficients(w: &MultiPoly, step: &MultiPoly, order: usize) -> TruncSeries {
    let mut coeffs = Vec::with_capacity(order + 1);
    coeffs.push(MultiPoly::one());
    let mut shifted = w.clone();
    for n in 1..=order {
        let next = (&coeffs[n - 1] * &shifted).scale(&rational::ratio(1, n as i64));
        coeffs.push(next);
        shifted = &shifted - step;
    }
    TruncSeries { coeffs }
}
