//! Fermionic p-adic integration of integer polynomials, realized as
//! partial sums `sum_{x < p^N} f(x) (-1)^x` reduced mod `p^M`.
//!
//! Since `p` is odd, `f(x + p^N j) = f(x) mod p^N` and
//! `sum_{j<p} (-1)^j = 1`, so consecutive partial sums agree mod `p^N`;
//! a partial sum at depth `N` therefore fixes the integral mod `p^M` for
//! any `M <= N`.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::euler_boole::{family_value, Construction, Family, FamilyId};
use crate::poly::Var;
use crate::rational::{self, Rational};

/// Largest number of points a literal summation may visit.
pub const LITERAL_POINT_CAP: u128 = 10_000_000;

fn serialize_biguint<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// A residue mod `p^precision`, stored in least non-negative form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PadicValue {
    p: u64,
    precision: u32,
    #[serde(serialize_with = "serialize_biguint")]
    residue: BigUint,
}

impl PadicValue {
    pub fn new(p: u64, precision: u32, value: &BigInt) -> Result<Self> {
        check_prime(p)?;
        if precision == 0 {
            return Err(Error::ZeroPrecision);
        }
        let m = modulus(p, precision);
        let r = value.mod_floor(&m);
        Ok(PadicValue {
            p,
            precision,
            residue: r.to_biguint().expect("mod_floor is non-negative"),
        })
    }

    /// Image of a rational whose denominator is prime to `p`.
    pub fn from_rational(r: &Rational, p: u64, precision: u32) -> Result<Self> {
        check_prime(p)?;
        if precision == 0 {
            return Err(Error::ZeroPrecision);
        }
        let m = modulus(p, precision);
        let inv = mod_inverse(r.denom(), &m).ok_or_else(|| Error::NotPadicUnit(rational::render(r)))?;
        PadicValue::new(p, precision, &(r.numer() * inv))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn residue(&self) -> &BigUint {
        &self.residue
    }

    /// Reduction to a lower precision.
    pub fn reduce(&self, precision: u32) -> Result<PadicValue> {
        if precision > self.precision {
            return Err(Error::PrecisionTooHigh { m: precision, n: self.precision });
        }
        PadicValue::new(self.p, precision, &BigInt::from(self.residue.clone()))
    }
}

fn modulus(p: u64, e: u32) -> BigInt {
    num_traits::pow(BigInt::from(p), e as usize)
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn check_prime(p: u64) -> Result<()> {
    if p.is_multiple_of(2) || !is_prime(p) {
        return Err(Error::InvalidPrime(p));
    }
    Ok(())
}

fn check_depths(p: u64, depth: u32, precision: u32) -> Result<()> {
    check_prime(p)?;
    if precision == 0 {
        return Err(Error::ZeroPrecision);
    }
    if precision > depth {
        return Err(Error::PrecisionTooHigh { m: precision, n: depth });
    }
    Ok(())
}

/// Integer polynomial `f(y) = sum_k c_k y^k`, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct IntegerPoly {
    coeffs: Vec<BigInt>,
}

impl IntegerPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntegerPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntegerPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// `prod_j (a_j + b_j y)`.
    pub fn product_of_linear<I: IntoIterator<Item = (BigInt, BigInt)>>(factors: I) -> Self {
        let mut coeffs = vec![BigInt::one()];
        for (a, b) in factors {
            let mut next = vec![BigInt::zero(); coeffs.len() + 1];
            for (k, c) in coeffs.iter().enumerate() {
                next[k] += c * &a;
                next[k + 1] += c * &b;
            }
            coeffs = next;
        }
        IntegerPoly::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, y: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * y + c)
    }

    /// `f(y + shift)`.
    pub fn shift(&self, shift: &BigInt) -> IntegerPoly {
        self.affine(shift, &BigInt::one())
    }

    /// `f(a + b y)`.
    fn affine(&self, a: &BigInt, b: &BigInt) -> IntegerPoly {
        let mut out = vec![BigInt::zero(); self.coeffs.len()];
        // Horner over polynomials in y.
        for c in self.coeffs.iter().rev() {
            let mut next = vec![BigInt::zero(); self.coeffs.len()];
            for (k, v) in out.iter().enumerate() {
                if v.is_zero() {
                    continue;
                }
                next[k] += v * a;
                if k + 1 < next.len() {
                    next[k + 1] += v * b;
                }
            }
            next[0] += c;
            out = next;
        }
        IntegerPoly::new(out)
    }

    fn reduce_mod(&self, m: &BigInt) -> IntegerPoly {
        IntegerPoly::new(self.coeffs.iter().map(|c| c.mod_floor(m)).collect())
    }
}

/// `sum_{x=0}^{p^depth - 1} f(x) (-1)^x mod p^precision`.
///
/// Uses the digit split `x = a + p x'`: because `p` is odd,
/// `(-1)^x = (-1)^a (-1)^{x'}`, so one level folds `f` into
/// `G(y) = sum_{a<p} (-1)^a f(a + p y)` and recurses on a range `p` times
/// shorter. Cost is `O(depth * p * deg^2)` instead of `O(p^depth)`.
pub fn fermionic_partial_sum(f: &IntegerPoly, p: u64, depth: u32, precision: u32) -> Result<PadicValue> {
    check_depths(p, depth, precision)?;
    let m = modulus(p, precision);
    let pb = BigInt::from(p);
    let mut g = f.reduce_mod(&m);
    for _ in 0..depth {
        let mut folded = vec![BigInt::zero(); g.coeffs.len()];
        for a in 0..p {
            let shifted = g.affine(&BigInt::from(a), &pb);
            for (k, c) in shifted.coeffs.into_iter().enumerate() {
                if a % 2 == 0 {
                    folded[k] += c;
                } else {
                    folded[k] -= c;
                }
            }
        }
        g = IntegerPoly::new(folded).reduce_mod(&m);
    }
    PadicValue::new(p, precision, &g.eval(&BigInt::zero()))
}

fn literal_modulus(p: u64, precision: u32) -> u64 {
    p.checked_pow(precision)
        .filter(|m| *m < (1u64 << 62))
        .expect("literal modulus is bounded by the point cap")
}

fn point_count(p: u64, depth: u32, dims: u32) -> Result<u64> {
    let points = (p as u128).checked_pow(depth * dims).unwrap_or(u128::MAX);
    if points > LITERAL_POINT_CAP {
        return Err(Error::SumTooLarge { points, cap: LITERAL_POINT_CAP });
    }
    Ok(points as u64)
}

/// The defining sum evaluated term by term.
pub fn fermionic_partial_sum_literal(
    f: &IntegerPoly,
    p: u64,
    depth: u32,
    precision: u32,
) -> Result<PadicValue> {
    check_depths(p, depth, precision)?;
    let points = point_count(p, depth, 1)?;
    let m = literal_modulus(p, precision);
    let mb = BigInt::from(m);
    let coeffs: Vec<u128> = f
        .coeffs
        .iter()
        .map(|c| c.mod_floor(&mb).to_u128().unwrap())
        .collect();
    let m = m as u128;
    let total = (0..points)
        .into_par_iter()
        .map(|x| {
            let xm = x as u128 % m;
            let v = coeffs.iter().rev().fold(0u128, |acc, c| (acc * xm + c) % m);
            if x % 2 == 0 { v } else { (m - v) % m }
        })
        .reduce(|| 0, |a, b| (a + b) % m);
    PadicValue::new(p, precision, &BigInt::from(total))
}

/// Multi-dimensional fermionic sum over `(y_1, ..., y_dims) in [0, p^depth)^dims`
/// of `g(y_1 + ... + y_dims)` with sign `(-1)^{y_1 + ... + y_dims}`, mod `p^precision`.
///
/// Every tuple is visited; `g` receives the coordinate sum and the modulus.
fn literal_multi_sum<G>(p: u64, depth: u32, precision: u32, dims: u32, g: G) -> Result<PadicValue>
where
    G: Fn(i128, i128) -> i128 + Sync,
{
    check_depths(p, depth, precision)?;
    point_count(p, depth, dims)?;
    let side = p.pow(depth);
    let m = literal_modulus(p, precision) as i128;
    let inner_dims = dims.saturating_sub(1);
    let total = (0..side)
        .into_par_iter()
        .map(|first| {
            let mut acc: i128 = 0;
            let mut rest = vec![0u64; inner_dims as usize];
            loop {
                let s: u64 = first + rest.iter().sum::<u64>();
                let v = g(s as i128, m).rem_euclid(m);
                acc = if s.is_multiple_of(2) { (acc + v) % m } else { (acc - v).rem_euclid(m) };
                // Odometer over the remaining coordinates.
                let mut i = 0;
                loop {
                    if i == rest.len() {
                        return acc;
                    }
                    rest[i] += 1;
                    if rest[i] < side {
                        break;
                    }
                    rest[i] = 0;
                    i += 1;
                }
            }
        })
        .reduce(|| 0, |a, b| (a + b) % m);
    PadicValue::new(p, precision, &BigInt::from(total))
}

/// Parameters for checking a family's integral representation at an
/// integer point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WittParams {
    pub family: FamilyId,
    pub n: usize,
    pub x: i64,
    pub lambda: i64,
    pub q: i64,
    pub p: u64,
    /// Summation depth `N`: the sum runs over `[0, p^N)` in each variable.
    pub depth: u32,
    /// Output precision `M`.
    pub precision: u32,
    /// Force term-by-term summation for order 1.
    pub literal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WittOutcome {
    pub integral: PadicValue,
    pub polynomial: PadicValue,
    pub pass: bool,
}

fn uses_q(family: Family) -> bool {
    matches!(family, Family::QBooleFirst | Family::QBooleSecond)
}

/// Linear factors `(a_j + b_j s)` of the integrand as a function of the
/// coordinate sum `s`.
fn integrand_factors(params: &WittParams) -> Vec<(i64, i64)> {
    let n = params.n as i64;
    match params.family.family() {
        Family::Euler => (0..n).map(|_| (params.x, 1)).collect(),
        Family::BooleClassical => (0..n).map(|j| (params.x - j, params.lambda)).collect(),
        Family::QBooleFirst => (0..n).map(|j| (params.x - j * params.q, params.lambda)).collect(),
        Family::QBooleSecond => (0..n).map(|j| (params.x - j * params.q, -params.lambda)).collect(),
    }
}

/// Compares the fermionic integral of a family's integrand with the
/// closed-form polynomial evaluated at `(x, lambda, q)`, both mod `p^M`.
///
/// The classical Boole family integrates to `2 Bl_n(x | lambda)`.
pub fn witt_check(params: &WittParams) -> Result<WittOutcome> {
    check_depths(params.p, params.depth, params.precision)?;
    if uses_q(params.family.family()) && (params.q - 1).rem_euclid(params.p as i64) != 0 {
        return Err(Error::QNotCongruent { q: params.q, p: params.p });
    }
    let factors = integrand_factors(params);
    let alpha = params.family.order();
    let integral = if alpha == 1 && !params.literal {
        let f = IntegerPoly::product_of_linear(
            factors.iter().map(|&(a, b)| (BigInt::from(a), BigInt::from(b))),
        );
        fermionic_partial_sum(&f, params.p, params.depth, params.precision)?
    } else {
        let factors: Vec<(i128, i128)> = factors.iter().map(|&(a, b)| (a as i128, b as i128)).collect();
        literal_multi_sum(params.p, params.depth, params.precision, alpha, |s, m| {
            factors
                .iter()
                .fold(1i128, |acc, &(a, b)| (acc * (a + b * s).rem_euclid(m)) % m)
        })?
    };

    let value = family_value(params.family, params.n, Construction::BySeries)?;
    let at = [
        (Var::X, rational::int(params.x)),
        (Var::Lambda, rational::int(params.lambda)),
        (Var::Q, rational::int(params.q)),
    ]
    .into_iter()
    .collect();
    let mut exact = value.eval(&at)?;
    if params.family.family() == Family::BooleClassical {
        exact *= rational::int(2);
    }
    let polynomial = PadicValue::from_rational(&exact, params.p, params.precision)?;
    Ok(WittOutcome {
        pass: integral == polynomial,
        integral,
        polynomial,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TranslationOutcome {
    pub lhs: PadicValue,
    pub rhs: PadicValue,
    pub pass: bool,
}

/// Checks `I(f(. + n)) = 2 sum_{a<n} (-1)^{n-1-a} f(a) + (-1)^n I(f)` mod `p^M`.
pub fn translation_check(
    f: &IntegerPoly,
    shift: i64,
    p: u64,
    depth: u32,
    precision: u32,
) -> Result<TranslationOutcome> {
    if shift < 1 {
        return Err(Error::InvalidShift(shift));
    }
    let lhs = fermionic_partial_sum(&f.shift(&BigInt::from(shift)), p, depth, precision)?;
    let base = fermionic_partial_sum(f, p, depth, precision)?;
    let mut rhs = BigInt::zero();
    for a in 0..shift {
        let term = f.eval(&BigInt::from(a));
        if (shift - 1 - a) % 2 == 0 {
            rhs += term;
        } else {
            rhs -= term;
        }
    }
    rhs *= 2;
    let base = BigInt::from_biguint(Sign::Plus, base.residue.clone());
    if shift % 2 == 0 {
        rhs += base;
    } else {
        rhs -= base;
    }
    let rhs = PadicValue::new(p, precision, &rhs)?;
    Ok(TranslationOutcome { pass: lhs == rhs, lhs, rhs })
}

impl std::fmt::Display for PadicValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} mod {}^{}", self.residue, self.p, self.precision)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn residue(v: &PadicValue) -> u64 {
        v.residue().to_u64().unwrap()
    }

    #[test]
    fn constant_integrand_is_one() {
        let one = IntegerPoly::from_i64(&[1]);
        for p in [3, 5, 7] {
            for n in 1..=4 {
                assert_eq!(residue(&fermionic_partial_sum(&one, p, n, n).unwrap()), 1);
            }
        }
    }

    #[test]
    fn identity_integrand() {
        let y = IntegerPoly::from_i64(&[0, 1]);
        let s = fermionic_partial_sum(&y, 5, 3, 3).unwrap();
        assert_eq!(residue(&s), 62);
        assert_eq!(s, PadicValue::from_rational(&ratio(-1, 2), 5, 3).unwrap());
    }

    #[test]
    fn square_integrand_converges_to_zero() {
        let y2 = IntegerPoly::from_i64(&[0, 0, 1]);
        for n in 2..=4 {
            let s = fermionic_partial_sum_literal(&y2, 5, n, n).unwrap();
            assert_eq!(residue(&s), 0, "N = {n}");
            let next = fermionic_partial_sum_literal(&y2, 5, n + 1, n).unwrap();
            assert_eq!(next, s);
        }
    }

    #[test]
    fn fast_matches_literal() {
        let f = IntegerPoly::from_i64(&[3, -7, 0, 11, 2, -5]);
        for p in [3, 5] {
            for n in 1..=4 {
                for m in 1..=n {
                    assert_eq!(
                        fermionic_partial_sum(&f, p, n, m).unwrap(),
                        fermionic_partial_sum_literal(&f, p, n, m).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn argument_validation() {
        let f = IntegerPoly::from_i64(&[1]);
        assert_eq!(fermionic_partial_sum(&f, 4, 2, 1), Err(Error::InvalidPrime(4)));
        assert_eq!(fermionic_partial_sum(&f, 9, 2, 1), Err(Error::InvalidPrime(9)));
        assert_eq!(fermionic_partial_sum(&f, 2, 2, 1), Err(Error::InvalidPrime(2)));
        assert_eq!(
            fermionic_partial_sum(&f, 5, 2, 3),
            Err(Error::PrecisionTooHigh { m: 3, n: 2 })
        );
        assert!(matches!(
            fermionic_partial_sum_literal(&f, 7, 9, 1),
            Err(Error::SumTooLarge { .. })
        ));
    }

    fn params(family: Family, alpha: u32, n: usize) -> WittParams {
        WittParams {
            family: FamilyId::new(family, alpha).unwrap(),
            n,
            x: 3,
            lambda: 2,
            q: 6,
            p: 5,
            depth: 4,
            precision: 3,
            literal: false,
        }
    }

    #[test]
    fn witt_examples() {
        let out = witt_check(&params(Family::QBooleFirst, 1, 1)).unwrap();
        assert!(out.pass);
        assert_eq!(residue(&out.integral), 2);
        assert_eq!(residue(&out.polynomial), 2);

        let out = witt_check(&params(Family::BooleClassical, 1, 0)).unwrap();
        assert!(out.pass);
        assert_eq!(residue(&out.integral), 1);

        let out = witt_check(&params(Family::QBooleSecond, 1, 1)).unwrap();
        assert!(out.pass);
        assert_eq!(residue(&out.polynomial), 4);
    }

    #[test]
    fn witt_literal_agrees_with_fast() {
        for family in Family::ALL {
            let mut fast = params(family, 1, 3);
            fast.depth = 3;
            fast.precision = 2;
            let mut lit = fast.clone();
            lit.literal = true;
            assert_eq!(witt_check(&fast).unwrap(), witt_check(&lit).unwrap());
        }
    }

    #[test]
    fn witt_rejects_q_not_one_mod_p() {
        let mut p = params(Family::QBooleFirst, 1, 1);
        p.q = 7;
        assert_eq!(witt_check(&p), Err(Error::QNotCongruent { q: 7, p: 5 }));
    }

    #[test]
    fn translation_examples() {
        let one = IntegerPoly::from_i64(&[1]);
        let out = translation_check(&one, 1, 5, 3, 3).unwrap();
        assert!(out.pass);
        assert_eq!(residue(&out.lhs), 1);

        let y = IntegerPoly::from_i64(&[0, 1]);
        let out = translation_check(&y, 1, 5, 3, 3).unwrap();
        assert!(out.pass);
        assert_eq!(out.lhs, PadicValue::from_rational(&ratio(1, 2), 5, 3).unwrap());

        let y2 = IntegerPoly::from_i64(&[0, 0, 1]);
        assert!(translation_check(&y2, 2, 7, 3, 3).unwrap().pass);
        assert_eq!(translation_check(&y2, 0, 7, 3, 3), Err(Error::InvalidShift(0)));
    }

    #[test]
    fn from_rational_rejects_p_in_denominator() {
        assert!(matches!(
            PadicValue::from_rational(&ratio(1, 5), 5, 2),
            Err(Error::NotPadicUnit(_))
        ));
    }
}
