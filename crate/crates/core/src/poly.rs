//! Sparse polynomials over the rationals in the indeterminates `x`, `lambda`, `q`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Var {
    X,
    Lambda,
    Q,
}

impl Var {
    pub const ALL: [Var; 3] = [Var::X, Var::Lambda, Var::Q];

    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::Lambda => "lambda",
            Var::Q => "q",
        }
    }

    fn latex(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::Lambda => "\\lambda",
            Var::Q => "q",
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Exponent triple `(e_x, e_lambda, e_q)`.
///
/// Ordered graded-lexicographically: total degree first, then `x`, `lambda`, `q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    pub x: u32,
    pub lambda: u32,
    pub q: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { x: 0, lambda: 0, q: 0 };

    pub fn new(x: u32, lambda: u32, q: u32) -> Self {
        Monomial { x, lambda, q }
    }

    pub fn of(var: Var, e: u32) -> Self {
        let mut m = Monomial::ONE;
        *m.exp_mut(var) = e;
        m
    }

    pub fn degree(&self) -> u32 {
        self.x + self.lambda + self.q
    }

    pub fn exp(&self, var: Var) -> u32 {
        match var {
            Var::X => self.x,
            Var::Lambda => self.lambda,
            Var::Q => self.q,
        }
    }

    fn exp_mut(&mut self, var: Var) -> &mut u32 {
        match var {
            Var::X => &mut self.x,
            Var::Lambda => &mut self.lambda,
            Var::Q => &mut self.q,
        }
    }

    pub fn is_one(&self) -> bool {
        *self == Monomial::ONE
    }

    fn times(&self, other: &Monomial) -> Monomial {
        Monomial {
            x: self.x + other.x,
            lambda: self.lambda + other.lambda,
            q: self.q + other.q,
        }
    }

    fn without(&self, var: Var) -> Monomial {
        let mut m = *self;
        *m.exp_mut(var) = 0;
        m
    }

    fn render_with(&self, latex: bool) -> String {
        let mut parts = Vec::new();
        for var in Var::ALL {
            let e = self.exp(var);
            let name = if latex { var.latex() } else { var.name() };
            match e {
                0 => {}
                1 => parts.push(name.to_string()),
                _ if latex => parts.push(format!("{name}^{{{e}}}")),
                _ => parts.push(format!("{name}^{e}")),
            }
        }
        parts.join(if latex { " " } else { "*" })
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.degree(), self.x, self.lambda, self.q).cmp(&(
            other.degree(),
            other.x,
            other.lambda,
            other.q,
        ))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A sparse polynomial in `x`, `lambda`, `q` with rational coefficients.
///
/// Zero coefficients are never stored, so structural equality is
/// polynomial equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly::default()
    }

    pub fn one() -> Self {
        MultiPoly::constant(rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        MultiPoly::monomial(c, Monomial::ONE)
    }

    pub fn int(c: i64) -> Self {
        MultiPoly::constant(rational::int(c))
    }

    pub fn var(v: Var) -> Self {
        MultiPoly::monomial(rational::one(), Monomial::of(v, 1))
    }

    pub fn x() -> Self {
        MultiPoly::var(Var::X)
    }

    pub fn lambda() -> Self {
        MultiPoly::var(Var::Lambda)
    }

    pub fn q() -> Self {
        MultiPoly::var(Var::Q)
    }

    pub fn monomial(c: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MultiPoly { terms }
    }

    /// Builds a polynomial from arbitrary (possibly repeated or zero) terms.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(terms: I) -> Self {
        let mut p = MultiPoly::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(rational::zero)
    }

    /// The value if this polynomial is a constant.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(rational::zero()),
            1 => self.terms.get(&Monomial::ONE).cloned(),
            _ => None,
        }
    }

    pub fn degree_in(&self, var: Var) -> Option<u32> {
        self.terms.keys().map(|m| m.exp(var)).max()
    }

    /// Coefficient of `var^e`, as a polynomial in the remaining variables.
    pub fn coeff_in(&self, var: Var, e: u32) -> MultiPoly {
        MultiPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.exp(var) == e)
                .map(|(m, c)| (m.without(var), c.clone()))
                .collect(),
        }
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly {
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = MultiPoly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Exact value at a point. Every variable that occurs must be assigned.
    pub fn eval(&self, at: &BTreeMap<Var, Rational>) -> Result<Rational> {
        let mut total = rational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for var in Var::ALL {
                let e = m.exp(var);
                if e == 0 {
                    continue;
                }
                let v = at.get(&var).ok_or(Error::MissingVariable(var))?;
                term *= num_traits::pow(v.clone(), e as usize);
            }
            total += term;
        }
        Ok(total)
    }

    /// Composition: replaces every occurrence of `var` by `replacement`.
    pub fn substitute(&self, var: Var, replacement: &MultiPoly) -> MultiPoly {
        let Some(max_e) = self.degree_in(var) else {
            return MultiPoly::zero();
        };
        let mut powers = Vec::with_capacity(max_e as usize + 1);
        powers.push(MultiPoly::one());
        for e in 1..=max_e as usize {
            let next = &powers[e - 1] * replacement;
            powers.push(next);
        }
        let mut out = MultiPoly::zero();
        for e in 0..=max_e {
            let rest = self.coeff_in(var, e);
            if rest.is_zero() {
                continue;
            }
            out += &rest * &powers[e as usize];
        }
        out
    }

    /// Substitutes a constant value for `var`.
    pub fn specialize(&self, var: Var, value: &Rational) -> MultiPoly {
        self.substitute(var, &MultiPoly::constant(value.clone()))
    }

    /// Canonical text: terms in descending graded-lex order, `*` between
    /// factors, `^` for powers, rationals as `a/b`.
    pub fn render(&self) -> String {
        self.render_with(false)
    }

    pub fn render_latex(&self) -> String {
        self.render_with(true)
    }

    fn render_with(&self, latex: bool) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            let abs = c.abs();
            let num = if latex {
                rational::render_latex(&abs)
            } else {
                rational::render(&abs)
            };
            if m.is_one() {
                out.push_str(&num);
            } else if abs.is_one() {
                out.push_str(&m.render_with(latex));
            } else if latex {
                out.push_str(&num);
                out.push(' ');
                out.push_str(&m.render_with(true));
            } else {
                out.push_str(&num);
                out.push('*');
                out.push_str(&m.render_with(false));
            }
        }
        out
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl From<Rational> for MultiPoly {
    fn from(c: Rational) -> Self {
        MultiPoly::constant(c)
    }
}

impl From<Var> for MultiPoly {
    fn from(v: Var) -> Self {
        MultiPoly::var(v)
    }
}

impl AddAssign<&MultiPoly> for MultiPoly {
    fn add_assign(&mut self, rhs: &MultiPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, c.clone());
        }
    }
}

impl AddAssign<MultiPoly> for MultiPoly {
    fn add_assign(&mut self, rhs: MultiPoly) {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
    }
}

impl SubAssign<&MultiPoly> for MultiPoly {
    fn sub_assign(&mut self, rhs: &MultiPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, -c.clone());
        }
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;

    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for MultiPoly {
    type Output = MultiPoly;

    fn add(mut self, rhs: MultiPoly) -> MultiPoly {
        self += rhs;
        self
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;

    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for MultiPoly {
    type Output = MultiPoly;

    fn sub(mut self, rhs: MultiPoly) -> MultiPoly {
        self -= &rhs;
        self
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;

    fn neg(self) -> MultiPoly {
        MultiPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;

    fn neg(self) -> MultiPoly {
        -&self
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;

    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.times(mb), ca * cb);
            }
        }
        out
    }
}

impl Mul for MultiPoly {
    type Output = MultiPoly;

    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn at(x: Rational, l: Rational, q: Rational) -> BTreeMap<Var, Rational> {
        BTreeMap::from([(Var::X, x), (Var::Lambda, l), (Var::Q, q)])
    }

    #[test]
    fn add_cancels() {
        let x = MultiPoly::x();
        assert!((&x + &(-&x)).is_zero());
        let half_l = MultiPoly::lambda().scale(&ratio(1, 2));
        assert_eq!(&(&x - &half_l) + &half_l, x);
        let sq = x.pow(2);
        assert_eq!(&(&sq - &x) + &x, sq);
    }

    #[test]
    fn mul_examples() {
        let x = MultiPoly::x();
        let q = MultiPoly::q();
        let prod = &x * &(&x - &q);
        assert_eq!(prod.render(), "x^2 - x*q");
        let one = MultiPoly::one();
        assert_eq!(&one * &prod, prod);
        let d = &(&x - &one) * &(&x + &one);
        assert_eq!(d, &x.pow(2) - &one);
    }

    #[test]
    fn eval_examples() {
        let p = &MultiPoly::x() - &MultiPoly::lambda().scale(&ratio(1, 2));
        assert_eq!(p.eval(&at(int(3), int(2), int(0))).unwrap(), int(2));
        assert_eq!(MultiPoly::zero().eval(&BTreeMap::new()).unwrap(), int(0));
        // x^2 - (lambda + q) x + q lambda / 2 at x = lambda = q = 1
        let x = MultiPoly::x();
        let l = MultiPoly::lambda();
        let q = MultiPoly::q();
        let bl2 = &(&x.pow(2) - &(&(&l + &q) * &x)) + &(&q * &l).scale(&ratio(1, 2));
        assert_eq!(bl2.eval(&at(int(1), int(1), int(1))).unwrap(), ratio(-1, 2));
    }

    #[test]
    fn eval_missing_variable_names_it() {
        let p = &MultiPoly::x() + &MultiPoly::q();
        let only_x = BTreeMap::from([(Var::X, int(1))]);
        assert_eq!(p.eval(&only_x), Err(Error::MissingVariable(Var::Q)));
    }

    #[test]
    fn substitute_examples() {
        let x = MultiPoly::x();
        let l = MultiPoly::lambda();
        let shifted = x.pow(2).substitute(Var::X, &(&x + &l));
        assert_eq!(shifted, &(&x.pow(2) + &(&x * &l).scale(&int(2))) + &l.pow(2));
        let p = &(&x.pow(3) - &l) + &MultiPoly::q();
        assert_eq!(p.substitute(Var::X, &x), p);
        let xq = &x - &MultiPoly::q();
        assert_eq!(xq.specialize(Var::Q, &int(1)), &x - &MultiPoly::one());
    }

    #[test]
    fn render_is_graded_lex_descending() {
        let x = MultiPoly::x();
        let l = MultiPoly::lambda();
        let q = MultiPoly::q();
        let p = &(&(&x.pow(2) - &(&x * &l)) - &(&x * &q)) + &(&l * &q).scale(&ratio(1, 2));
        assert_eq!(p.render(), "x^2 - x*lambda - x*q + 1/2*lambda*q");
        assert_eq!((-&MultiPoly::constant(ratio(1, 2))).render(), "-1/2");
        assert_eq!(MultiPoly::zero().render(), "0");
        assert_eq!(p.render_latex(), "x^{2} - x \\lambda - x q + \\frac{1}{2} \\lambda q");
    }

    #[test]
    fn coeff_in_and_degree() {
        let x = MultiPoly::x();
        let l = MultiPoly::lambda();
        let p = &(&x.pow(3) * &l) + &x;
        assert_eq!(p.degree_in(Var::X), Some(3));
        assert_eq!(p.coeff_in(Var::X, 3), l);
        assert_eq!(p.coeff_in(Var::X, 2), MultiPoly::zero());
        assert_eq!(MultiPoly::zero().degree_in(Var::Q), None);
    }
}
