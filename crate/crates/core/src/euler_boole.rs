//! Euler polynomials of order alpha, classical Boole polynomials and the
//! q-Boole families of the first and second kind.
//!
//! Each family can be built three ways:
//!
//! * [`Construction::BySeries`] extracts `n! [t^n]` from the generating
//!   function assembled in the series engine.
//! * [`Construction::ByStirlingSum`] sums `S1(n, l) q^(n-l) lambda^l E_l(...)`
//!   over homogenized Euler polynomials.
//! * [`Construction::ByIntegral`] integrates the q-falling integrand term
//!   by term against the fermionic moments `int (y_1 + ... + y_alpha)^k`,
//!   which come from the translation recurrence and never touch a series.
//!
//! Arguments of the form `x/lambda + s` are always homogenized:
//! `lambda^l E_l(x/lambda + s) = sum_k c_k (x + s lambda)^k lambda^(l-k)`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::RwLock;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{binom, stirling1, stirling1_unsigned};
use crate::error::{Error, Result};
use crate::poly::{MultiPoly, Var};
use crate::rational::{self, from_bigint, Rational};
use crate::series::{binomial_series_classical, exp_linear, q_binomial_series, TruncSeries};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Euler,
    BooleClassical,
    QBooleFirst,
    QBooleSecond,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::Euler,
        Family::BooleClassical,
        Family::QBooleFirst,
        Family::QBooleSecond,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Euler => "euler",
            Family::BooleClassical => "boole-classical",
            Family::QBooleFirst => "qboole-first",
            Family::QBooleSecond => "qboole-second",
        }
    }

    pub fn supports_order(self) -> bool {
        !matches!(self, Family::BooleClassical)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::UnknownFamily(s.to_string()))
    }
}

/// A polynomial family together with its order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FamilyId {
    family: Family,
    order: u32,
}

impl FamilyId {
    pub fn new(family: Family, order: u32) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidOrder(order));
        }
        if order > 1 && !family.supports_order() {
            return Err(Error::UnsupportedOrder {
                family: family.name().to_string(),
                order,
            });
        }
        Ok(FamilyId { family, order })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn order(&self) -> u32 {
        self.order
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Construction {
    BySeries,
    ByStirlingSum,
    ByIntegral,
}

impl Construction {
    pub fn name(self) -> &'static str {
        match self {
            Construction::BySeries => "series",
            Construction::ByStirlingSum => "stirling",
            Construction::ByIntegral => "integral",
        }
    }
}

impl FromStr for Construction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "series" | "by-series" => Ok(Construction::BySeries),
            "stirling" | "by-stirling-sum" => Ok(Construction::ByStirlingSum),
            "integral" | "by-integral" => Ok(Construction::ByIntegral),
            _ => Err(Error::UnknownConstruction(s.to_string())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    First,
    Second,
}

// Series are expanded at least this far so that sweeping n = 0..=12 builds
// each generating function once.
const MIN_SERIES_ORDER: usize = 12;

type CacheKey = (FamilyId, Construction, usize);

static CACHE: RwLock<Option<HashMap<CacheKey, MultiPoly>>> = RwLock::new(None);

fn cached(key: &CacheKey) -> Option<MultiPoly> {
    CACHE.read().unwrap().as_ref().and_then(|m| m.get(key).cloned())
}

fn store<I: IntoIterator<Item = (CacheKey, MultiPoly)>>(entries: I) {
    let mut guard = CACHE.write().unwrap();
    let map = guard.get_or_insert_with(HashMap::new);
    for (k, v) in entries {
        map.entry(k).or_insert(v);
    }
}

/// `2 / (e^t + 1)`.
pub fn euler_kernel(order: usize) -> TruncSeries {
    let e_t = exp_linear(&MultiPoly::one(), order);
    (&e_t + &TruncSeries::one(order))
        .scale(&rational::ratio(1, 2))
        .inv()
        .expect("constant term is 1")
}

/// `2 / ((1 + qt)^{lambda/q} + 1)`.
pub fn qboole_kernel(order: usize) -> TruncSeries {
    let lam = q_binomial_series(&MultiPoly::lambda(), order);
    (&lam + &TruncSeries::one(order))
        .scale(&rational::ratio(1, 2))
        .inv()
        .expect("constant term is 1")
}

/// `(2 / (e^t + 1))^alpha e^{xt}`.
pub fn euler_series(alpha: u32, order: usize) -> TruncSeries {
    &euler_kernel(order).pow(alpha) * &exp_linear(&MultiPoly::x(), order)
}

/// `(1 + t)^x / (1 + (1 + t)^lambda)`.
pub fn boole_classical_series(order: usize) -> TruncSeries {
    let lam = binomial_series_classical(&MultiPoly::lambda(), order);
    let denom = (&TruncSeries::one(order) + &lam)
        .inv()
        .expect("constant term is 2");
    &denom * &binomial_series_classical(&MultiPoly::x(), order)
}

/// `(1 + qt)^{x/q} (2 / ((1 + qt)^{lambda/q} + 1))^alpha`.
pub fn qboole_first_series(alpha: u32, order: usize) -> TruncSeries {
    &q_binomial_series(&MultiPoly::x(), order) * &qboole_kernel(order).pow(alpha)
}

/// `(1 + qt)^{(x + alpha lambda)/q} (2 / ((1 + qt)^{lambda/q} + 1))^alpha`.
pub fn qboole_second_series(alpha: u32, order: usize) -> TruncSeries {
    let exponent = &MultiPoly::x() + &MultiPoly::lambda().scale(&rational::int(alpha as i64));
    &q_binomial_series(&exponent, order) * &qboole_kernel(order).pow(alpha)
}

/// Generating function of a family, truncated at `order`.
pub fn family_series(id: FamilyId, order: usize) -> TruncSeries {
    match id.family {
        Family::Euler => euler_series(id.order, order),
        Family::BooleClassical => boole_classical_series(order),
        Family::QBooleFirst => qboole_first_series(id.order, order),
        Family::QBooleSecond => qboole_second_series(id.order, order),
    }
}

/// Fermionic moments `int ... int (y_1 + ... + y_alpha)^k dmu(y_1)...dmu(y_alpha)`
/// for `k = 0..=max_k`.
///
/// The order-1 moments are the Euler numbers, fixed by the translation
/// identity `I(f(y + 1)) + I(f) = 2 f(0)`:
/// `2 E_k = -sum_{j<k} C(k, j) E_j` for `k >= 1`, `E_0 = 1`.
/// Higher orders follow by binomial convolution.
pub fn fermionic_moments(alpha: u32, max_k: usize) -> Vec<Rational> {
    let mut single = Vec::with_capacity(max_k + 1);
    single.push(rational::one());
    for k in 1..=max_k {
        let s: Rational = (0..k)
            .map(|j| from_bigint(binom(k as i64, j as i64)) * &single[j])
            .sum();
        single.push(-s / rational::int(2));
    }
    let mut moments = single.clone();
    for _ in 1..alpha {
        moments = (0..=max_k)
            .map(|k| {
                (0..=k)
                    .map(|j| from_bigint(binom(k as i64, j as i64)) * &moments[j] * &single[k - j])
                    .sum()
            })
            .collect();
    }
    moments
}

/// `E_n^{(alpha)}(x)`.
pub fn euler_poly(n: usize, alpha: u32) -> MultiPoly {
    let id = FamilyId::new(Family::Euler, alpha.max(1)).expect("euler supports every order");
    family_value(id, n, Construction::BySeries).expect("euler series construction")
}

/// `lambda^l E_l^{(alpha)}(numerator / lambda)` as a polynomial.
pub fn euler_homog_at(l: usize, alpha: u32, numerator: &MultiPoly) -> MultiPoly {
    let e = euler_poly(l, alpha);
    let lambda = MultiPoly::lambda();
    let mut out = MultiPoly::zero();
    for k in 0..=l {
        let c = e.coeff_in(Var::X, k as u32);
        if c.is_zero() {
            continue;
        }
        out += &(&c * &numerator.pow(k as u32)) * &lambda.pow((l - k) as u32);
    }
    out
}

/// `lambda^l E_l^{(alpha)}(x / lambda + shift)` as a polynomial.
pub fn euler_homog(l: usize, alpha: u32, shift: &Rational) -> MultiPoly {
    let numerator = &MultiPoly::x() + &MultiPoly::lambda().scale(shift);
    euler_homog_at(l, alpha, &numerator)
}

/// `Bl_n(x | lambda)` from its generating function.
pub fn boole_classical(n: usize) -> MultiPoly {
    let id = FamilyId::new(Family::BooleClassical, 1).unwrap();
    family_value(id, n, Construction::BySeries).expect("boole series construction")
}

pub fn qboole_first(n: usize, alpha: u32, construction: Construction) -> Result<MultiPoly> {
    family_value(FamilyId::new(Family::QBooleFirst, alpha)?, n, construction)
}

pub fn qboole_second(n: usize, alpha: u32, construction: Construction) -> Result<MultiPoly> {
    family_value(FamilyId::new(Family::QBooleSecond, alpha)?, n, construction)
}

/// q-Boole numbers: the order-1 family value at `x = 0`.
pub fn qboole_number(n: usize, kind: Kind) -> MultiPoly {
    let value = match kind {
        Kind::First => qboole_first(n, 1, Construction::ByStirlingSum),
        Kind::Second => qboole_second(n, 1, Construction::ByStirlingSum),
    }
    .expect("order 1 is valid");
    value.specialize(Var::X, &rational::zero())
}

/// `sum_l S1(n, l) q^(n-l) lambda^l E_l^{(alpha)}(numerator / lambda)`.
pub fn stirling_sum_at(n: usize, alpha: u32, numerator: &MultiPoly, unsigned: bool) -> MultiPoly {
    let q = MultiPoly::q();
    let mut out = MultiPoly::zero();
    for l in 0..=n {
        let s1 = if unsigned {
            stirling1_unsigned(n as i64, l as i64)
        } else {
            stirling1(n as i64, l as i64)
        }
        .expect("0 <= l <= n");
        if s1.is_zero() {
            continue;
        }
        let term = &q.pow((n - l) as u32) * &euler_homog_at(l, alpha, numerator);
        out += term.scale(&from_bigint(s1));
    }
    out
}

/// Coefficients, in powers of an auxiliary variable `S`, of
/// `prod_{j<n} (x - j*step + sign*lambda*S)`.
fn integrand_in_s(n: usize, step: &MultiPoly, lambda_sign: i64) -> Vec<MultiPoly> {
    let x = MultiPoly::x();
    let slope = MultiPoly::lambda().scale(&rational::int(lambda_sign));
    let mut coeffs = vec![MultiPoly::one()];
    for j in 0..n {
        let constant = &x - &step.scale(&rational::int(j as i64));
        let mut next = vec![MultiPoly::zero(); coeffs.len() + 1];
        for (k, c) in coeffs.iter().enumerate() {
            next[k] += c * &constant;
            next[k + 1] += c * &slope;
        }
        coeffs = next;
    }
    coeffs
}

fn integrate(coeffs: &[MultiPoly], alpha: u32) -> MultiPoly {
    let moments = fermionic_moments(alpha, coeffs.len().saturating_sub(1));
    coeffs
        .iter()
        .zip(&moments)
        .fold(MultiPoly::zero(), |acc, (c, m)| &acc + &c.scale(m))
}

fn by_integral(id: FamilyId, n: usize) -> MultiPoly {
    match id.family {
        Family::Euler => {
            let moments = fermionic_moments(id.order, n);
            let x = MultiPoly::x();
            (0..=n).fold(MultiPoly::zero(), |acc, k| {
                let c = from_bigint(binom(n as i64, k as i64)) * &moments[k];
                &acc + &x.pow((n - k) as u32).scale(&c)
            })
        }
        Family::BooleClassical => {
            integrate(&integrand_in_s(n, &MultiPoly::one(), 1), 1).scale(&rational::ratio(1, 2))
        }
        Family::QBooleFirst => integrate(&integrand_in_s(n, &MultiPoly::q(), 1), id.order),
        Family::QBooleSecond => integrate(&integrand_in_s(n, &MultiPoly::q(), -1), id.order),
    }
}

fn by_stirling_sum(id: FamilyId, n: usize) -> Result<MultiPoly> {
    let x = MultiPoly::x();
    let lambda = MultiPoly::lambda();
    match id.family {
        Family::Euler => Err(Error::UnknownConstruction(format!(
            "{} has no stirling-sum construction",
            id.family
        ))),
        Family::BooleClassical => {
            // q = 1 specialization of the first kind, halved.
            let s = stirling_sum_at(n, 1, &x, false);
            Ok(s.specialize(Var::Q, &rational::one()).scale(&rational::ratio(1, 2)))
        }
        Family::QBooleFirst => Ok(stirling_sum_at(n, id.order, &x, false)),
        Family::QBooleSecond => {
            let shift = lambda.scale(&rational::int(id.order as i64));
            Ok(stirling_sum_at(n, id.order, &(&x + &shift), false))
        }
    }
}

/// Value of family `id` at degree `n` by the chosen construction. Memoized.
pub fn family_value(id: FamilyId, n: usize, construction: Construction) -> Result<MultiPoly> {
    let key = (id, construction, n);
    if let Some(v) = cached(&key) {
        return Ok(v);
    }
    match construction {
        Construction::BySeries => {
            let order = n.max(MIN_SERIES_ORDER);
            let s = family_series(id, order);
            let values: Vec<MultiPoly> = (0..=order).map(|k| s.egf_coeff(k).unwrap()).collect();
            let out = values[n].clone();
            store(values.into_iter().enumerate().map(|(k, v)| ((id, construction, k), v)));
            Ok(out)
        }
        Construction::ByStirlingSum => {
            let v = by_stirling_sum(id, n)?;
            store([(key, v.clone())]);
            Ok(v)
        }
        Construction::ByIntegral => {
            let v = by_integral(id, n);
            store([(key, v.clone())]);
            Ok(v)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn x() -> MultiPoly {
        MultiPoly::x()
    }

    fn l() -> MultiPoly {
        MultiPoly::lambda()
    }

    fn q() -> MultiPoly {
        MultiPoly::q()
    }

    fn half() -> Rational {
        ratio(1, 2)
    }

    #[test]
    fn euler_spot_values() {
        assert_eq!(euler_poly(0, 1), MultiPoly::one());
        assert_eq!(euler_poly(1, 1), &x() - &MultiPoly::constant(half()));
        assert_eq!(euler_poly(2, 1), &x().pow(2) - &x());
    }

    #[test]
    fn euler_numbers_from_moments() {
        let m = fermionic_moments(1, 6);
        assert_eq!(m[0], int(1));
        assert_eq!(m[1], ratio(-1, 2));
        assert_eq!(m[2], int(0));
        assert_eq!(m[3], ratio(1, 4));
        for (k, mk) in m.iter().enumerate() {
            let at_zero = euler_poly(k, 1).specialize(Var::X, &int(0));
            assert_eq!(at_zero, MultiPoly::constant(mk.clone()));
        }
    }

    #[test]
    fn homog_examples() {
        assert_eq!(euler_homog(1, 1, &int(0)), &x() - &l().scale(&half()));
        for alpha in 1..=3 {
            assert_eq!(euler_homog(0, alpha, &int(alpha as i64)), MultiPoly::one());
        }
        assert_eq!(euler_homog(2, 1, &int(1)), &x().pow(2) + &(&x() * &l()));
    }

    #[test]
    fn boole_classical_values() {
        assert_eq!(boole_classical(0), MultiPoly::constant(half()));
        assert_eq!(boole_classical(1), &x().scale(&half()) - &l().scale(&ratio(1, 4)));
    }

    #[test]
    fn qboole_first_spot_values() {
        let bl2 = &(&x().pow(2) - &(&(&l() + &q()) * &x())) + &(&q() * &l()).scale(&half());
        for c in [Construction::BySeries, Construction::ByStirlingSum, Construction::ByIntegral] {
            assert_eq!(qboole_first(0, 1, c).unwrap(), MultiPoly::one());
            assert_eq!(qboole_first(1, 1, c).unwrap(), &x() - &l().scale(&half()));
            assert_eq!(qboole_first(2, 1, c).unwrap(), bl2);
        }
    }

    #[test]
    fn qboole_second_spot_values() {
        // int (x - lambda y)(x - lambda y - q) dmu = x^2 + x lambda - q x - q lambda / 2
        let b2 = &(&(&x().pow(2) + &(&x() * &l())) - &(&q() * &x())) - &(&q() * &l()).scale(&half());
        for c in [Construction::BySeries, Construction::ByStirlingSum, Construction::ByIntegral] {
            assert_eq!(qboole_second(0, 1, c).unwrap(), MultiPoly::one());
            assert_eq!(qboole_second(1, 1, c).unwrap(), &x() + &l().scale(&half()));
            assert_eq!(qboole_second(2, 1, c).unwrap(), b2);
        }
    }

    #[test]
    fn qboole_numbers() {
        assert_eq!(qboole_number(0, Kind::First), MultiPoly::one());
        assert_eq!(qboole_number(1, Kind::First), -&l().scale(&half()));
        assert_eq!(qboole_number(1, Kind::Second), l().scale(&half()));
    }

    #[test]
    fn constructions_agree_low_degree() {
        for alpha in 1..=3 {
            for n in 0..=6 {
                for family in [Family::QBooleFirst, Family::QBooleSecond, Family::Euler] {
                    let id = FamilyId::new(family, alpha).unwrap();
                    let s = family_value(id, n, Construction::BySeries).unwrap();
                    let i = family_value(id, n, Construction::ByIntegral).unwrap();
                    assert_eq!(s, i, "{family} alpha={alpha} n={n}");
                    if family != Family::Euler {
                        let st = family_value(id, n, Construction::ByStirlingSum).unwrap();
                        assert_eq!(s, st, "{family} alpha={alpha} n={n}");
                    }
                }
            }
        }
        let id = FamilyId::new(Family::BooleClassical, 1).unwrap();
        for n in 0..=6 {
            let s = family_value(id, n, Construction::BySeries).unwrap();
            assert_eq!(s, family_value(id, n, Construction::ByIntegral).unwrap());
            assert_eq!(s, family_value(id, n, Construction::ByStirlingSum).unwrap());
        }
    }

    #[test]
    fn monic_in_x() {
        for n in 0..=8usize {
            for alpha in 1..=2 {
                for v in [
                    qboole_first(n, alpha, Construction::BySeries).unwrap(),
                    qboole_second(n, alpha, Construction::BySeries).unwrap(),
                    euler_poly(n, alpha),
                ] {
                    assert_eq!(v.degree_in(Var::X), Some(n as u32));
                    assert_eq!(v.coeff_in(Var::X, n as u32), MultiPoly::one());
                }
            }
        }
    }

    #[test]
    fn q_to_one_limit() {
        for n in 0..=8 {
            let first = qboole_first(n, 1, Construction::BySeries).unwrap();
            assert_eq!(first.specialize(Var::Q, &int(1)), boole_classical(n).scale(&int(2)));
        }
    }

    #[test]
    fn euler_reflection() {
        for alpha in 1..=3u32 {
            for n in 0..=8usize {
                let e = euler_poly(n, alpha);
                let lhs = e.substitute(Var::X, &-&x());
                let rhs = e
                    .substitute(Var::X, &(&x() + &MultiPoly::int(alpha as i64)))
                    .scale(&int(if n % 2 == 0 { 1 } else { -1 }));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn family_id_validation() {
        assert_eq!(FamilyId::new(Family::Euler, 0), Err(Error::InvalidOrder(0)));
        assert!(matches!(
            FamilyId::new(Family::BooleClassical, 2),
            Err(Error::UnsupportedOrder { .. })
        ));
        assert_eq!("qboole-second".parse::<Family>().unwrap(), Family::QBooleSecond);
        assert!("qboole-third".parse::<Family>().is_err());
        assert!(family_value(FamilyId::new(Family::Euler, 1).unwrap(), 2, Construction::ByStirlingSum).is_err());
    }
}
