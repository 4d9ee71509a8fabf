//! Registry of identities between the polynomial families, each checked
//! as an exact polynomial equality over a parameter grid and re-checked by
//! exact evaluation at seeded random rational points.
//!
//! Family values on either side come from the integral construction
//! (term-by-term integration against fermionic moments) unless the
//! identity is specifically about another construction.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Instant;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::combinatorics::{binom, stirling2};
use crate::error::{Error, Result};
use crate::euler_boole::{
    boole_classical, euler_homog, euler_homog_at, family_value, fermionic_moments, qboole_first,
    qboole_second, stirling_sum_at, Construction, Family, FamilyId,
};
use crate::poly::{MultiPoly, Var};
use crate::rational::{self, from_bigint, Rational};
use crate::series::{q_binomial_series, TruncSeries};

pub const DEFAULT_SEED: u64 = 0x5eed_b001e;
pub const DEFAULT_EVAL_POINTS: usize = 50;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    Quick,
    Full,
}

impl Profile {
    pub fn n_max(self) -> usize {
        match self {
            Profile::Quick => 6,
            Profile::Full => 12,
        }
    }

    pub fn alpha_max(self) -> u32 {
        match self {
            Profile::Quick => 2,
            Profile::Full => 3,
        }
    }
}

impl FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quick" => Ok(Profile::Quick),
            "full" => Ok(Profile::Full),
            _ => Err(Error::UnknownProfile(s.to_string())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Expectation {
    Holds,
    PrintedVariant,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GridPoint {
    pub n: usize,
    pub alpha: u32,
}

pub type Builder = fn(GridPoint) -> Result<MultiPoly>;

/// One identity `lhs = rhs`, with both sides cleared of denominators.
#[derive(Clone, Debug)]
pub struct IdentitySpec {
    pub id: &'static str,
    pub description: &'static str,
    pub expectation: Expectation,
    pub grid: Vec<GridPoint>,
    pub lhs: Builder,
    pub rhs: Builder,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EvalPoint {
    pub x: String,
    pub lambda: String,
    pub q: String,
    pub lhs: String,
    pub rhs: String,
}

/// A grid point where the two sides differ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub n: usize,
    pub alpha: u32,
    /// Canonical rendering of `lhs - rhs`; never `"0"`.
    pub difference: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<EvalPoint>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GridSummary {
    pub n: [usize; 2],
    pub alpha: [u32; 2],
    pub points: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditEntry {
    pub id: String,
    pub description: String,
    pub expected: Expectation,
    pub verdict: Verdict,
    pub grid: GridSummary,
    pub failures: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    /// First failing point for each order alpha.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<Witness>,
    pub eval_points: usize,
    pub millis: u64,
}

impl AuditEntry {
    /// Whether this entry breaks the suite: an asserted identity that failed.
    pub fn is_regression(&self) -> bool {
        self.expected == Expectation::Holds && self.verdict == Verdict::Fail
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditSummary {
    pub asserted: usize,
    pub asserted_passed: usize,
    pub printed_variants: usize,
    pub printed_variants_failed: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub profile: Profile,
    pub seed: u64,
    pub include_printed_variants: bool,
    pub entries: Vec<AuditEntry>,
    pub summary: AuditSummary,
    pub all_asserted_pass: bool,
}

impl AuditReport {
    fn assemble(config: &AuditConfig, entries: Vec<AuditEntry>) -> Self {
        let asserted = entries.iter().filter(|e| e.expected == Expectation::Holds);
        let printed = entries.iter().filter(|e| e.expected == Expectation::PrintedVariant);
        let summary = AuditSummary {
            asserted: asserted.clone().count(),
            asserted_passed: asserted.filter(|e| e.verdict == Verdict::Pass).count(),
            printed_variants: printed.clone().count(),
            printed_variants_failed: printed.filter(|e| e.verdict == Verdict::Fail).count(),
        };
        AuditReport {
            profile: config.profile,
            seed: config.seed,
            include_printed_variants: config.include_printed_variants,
            all_asserted_pass: summary.asserted == summary.asserted_passed,
            entries,
            summary,
        }
    }

    pub fn entry(&self, id: &str) -> Option<&AuditEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    /// JSON rendering; `millis` is zeroed unless `timing` is set.
    pub fn to_json(&self, timing: bool) -> String {
        let mut copy = self.clone();
        if !timing {
            for e in &mut copy.entries {
                e.millis = 0;
            }
        }
        serde_json::to_string_pretty(&copy).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let width = self.entries.iter().map(|e| e.id.len()).max().unwrap_or(2).max(2);
        let _ = writeln!(
            out,
            "{:<width$}  {:<15}  {:<7}  {:>6}  {:>8}",
            "id", "expected", "verdict", "points", "millis"
        );
        for e in &self.entries {
            let expected = match e.expected {
                Expectation::Holds => "holds",
                Expectation::PrintedVariant => "printed-variant",
            };
            let verdict = match e.verdict {
                Verdict::Pass => "pass",
                Verdict::Fail => "FAIL",
            };
            let _ = writeln!(
                out,
                "{:<width$}  {:<15}  {:<7}  {:>6}  {:>8}",
                e.id, expected, verdict, e.grid.points, e.millis
            );
            for w in &e.witnesses {
                let _ = writeln!(out, "    n={} alpha={}: lhs - rhs = {}", w.n, w.alpha, w.difference);
            }
        }
        let s = &self.summary;
        let _ = writeln!(
            out,
            "asserted {}/{} pass; printed variants failing {}/{}",
            s.asserted_passed, s.asserted, s.printed_variants_failed, s.printed_variants
        );
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditConfig {
    pub profile: Profile,
    pub include_printed_variants: bool,
    pub seed: u64,
    pub eval_points: usize,
}

impl AuditConfig {
    pub fn new(profile: Profile) -> Self {
        AuditConfig {
            profile,
            include_printed_variants: false,
            seed: DEFAULT_SEED,
            eval_points: DEFAULT_EVAL_POINTS,
        }
    }
}

fn degree_grid(n_min: usize, n_max: usize) -> Vec<GridPoint> {
    (n_min..=n_max).map(|n| GridPoint { n, alpha: 1 }).collect()
}

fn order_grid(n_max: usize, alpha_max: u32) -> Vec<GridPoint> {
    (1..=alpha_max)
        .flat_map(|alpha| (0..=n_max).map(move |n| GridPoint { n, alpha }))
        .collect()
}

fn first(n: usize, alpha: u32) -> Result<MultiPoly> {
    qboole_first(n, alpha, Construction::ByIntegral)
}

fn second(n: usize, alpha: u32) -> Result<MultiPoly> {
    qboole_second(n, alpha, Construction::ByIntegral)
}

/// `sum_{n<=m} q^(m-n) S2(m, n) family(n)`.
fn stirling2_transform(m: usize, alpha: u32, family: fn(usize, u32) -> Result<MultiPoly>) -> Result<MultiPoly> {
    let q = MultiPoly::q();
    let mut out = MultiPoly::zero();
    for n in 0..=m {
        let s2 = stirling2(m as i64, n as i64)?;
        if s2.is_zero() {
            continue;
        }
        out += (&q.pow((m - n) as u32) * &family(n, alpha)?).scale(&from_bigint(s2));
    }
    Ok(out)
}

fn sign(n: usize) -> Rational {
    rational::int(if n.is_multiple_of(2) { 1 } else { -1 })
}

fn x_plus_alpha(alpha: u32) -> MultiPoly {
    &MultiPoly::x() + &MultiPoly::int(alpha as i64)
}

fn alpha_shift(alpha: u32) -> Rational {
    rational::int(alpha as i64)
}

fn series_value(s: TruncSeries, n: usize) -> MultiPoly {
    s.egf_coeff(n).expect("series covers n")
}

/// Both sides of the binomial recurrence between the number families,
/// multiplied through by `q^n n!`:
/// `(-1)^n Bl^_n(lambda) = sum_l C(n-1, l-1) (n!/l!) q^(n-l) Bl_l(lambda)`.
fn thm2_6_lhs(g: GridPoint) -> Result<MultiPoly> {
    Ok(second(g.n, 1)?.specialize(Var::X, &rational::zero()).scale(&sign(g.n)))
}

fn thm2_6_rhs(g: GridPoint) -> Result<MultiPoly> {
    let n = g.n;
    let q = MultiPoly::q();
    let mut out = MultiPoly::zero();
    for l in 0..=n {
        let c = binom(n as i64 - 1, l as i64 - 1);
        if c.is_zero() {
            continue;
        }
        let ratio = rational::factorial(n) / rational::factorial(l);
        let number = first(l, 1)?.specialize(Var::X, &rational::zero());
        out += (&q.pow((n - l) as u32) * &number).scale(&(from_bigint(c) * ratio));
    }
    Ok(out)
}

/// Every registered identity for the given grid bounds.
pub fn registry(profile: Profile, include_printed_variants: bool) -> Vec<IdentitySpec> {
    let n_max = profile.n_max();
    let a_max = profile.alpha_max();
    let deg = || degree_grid(0, n_max);
    let ord = || order_grid(n_max, a_max);
    let mut specs = vec![
        IdentitySpec {
            id: "eq3-stirling1",
            description: "(x)_n = sum_l S1(n,l) x^l",
            expectation: Expectation::Holds,
            grid: deg(),
            lhs: |g| Ok(crate::combinatorics::falling_factorial(&MultiPoly::x(), g.n)),
            rhs: |g| {
                let x = MultiPoly::x();
                let mut out = MultiPoly::zero();
                for l in 0..=g.n {
                    out += x.pow(l as u32).scale(&from_bigint(crate::combinatorics::stirling1(g.n as i64, l as i64)?));
                }
                Ok(out)
            },
        },
        IdentitySpec {
            id: "eq4-stirling2",
            description: "x^n = sum_l S2(n,l) (x)_l",
            expectation: Expectation::Holds,
            grid: deg(),
            lhs: |g| Ok(MultiPoly::x().pow(g.n as u32)),
            rhs: |g| {
                let x = MultiPoly::x();
                let mut out = MultiPoly::zero();
                for l in 0..=g.n {
                    let c = from_bigint(stirling2(g.n as i64, l as i64)?);
                    out += crate::combinatorics::falling_factorial(&x, l).scale(&c);
                }
                Ok(out)
            },
        },
        IdentitySpec {
            id: "eq6-witt-classical",
            description: "int (x + lambda y)_n dmu(y) = 2 Bl_n(x|lambda)",
            expectation: Expectation::Holds,
            grid: deg(),
            lhs: |g| Ok(family_value(FamilyId::new(Family::BooleClassical, 1)?, g.n, Construction::ByIntegral)?.scale(&rational::int(2))),
            rhs: |g| Ok(boole_classical(g.n).scale(&rational::int(2))),
        },
        IdentitySpec {
            id: "eq9-euler-integral",
            description: "int (x + y_1 + ... + y_a)^n dmu = E_n^(a)(x)",
            expectation: Expectation::Holds,
            grid: ord(),
            lhs: |g| family_value(FamilyId::new(Family::Euler, g.alpha)?, g.n, Construction::ByIntegral),
            rhs: |g| family_value(FamilyId::new(Family::Euler, g.alpha)?, g.n, Construction::BySeries),
        },
        IdentitySpec {
            id: "thm2.1",
            description: "n![t^n] (1+qt)^(x/q) 2/((1+qt)^(lambda/q)+1) = Bl_{n,q}(x|lambda)",
            expectation: Expectation::Holds,
            grid: deg(),
            lhs: |g| qboole_first(g.n, 1, Construction::BySeries),
            rhs: |g| first(g.n, 1),
        },
        IdentitySpec {
            id: "thm2.2-forward",
            description: "lambda^m E_m(x/lambda) = sum_n q^(m-n) S2(m,n) Bl_{n,q}(x|lambda)",
            expectation: Expectation::Holds,
            grid: deg(),
            lhs: |g| Ok(euler_homog(g.n, 1, &rational::zero())),
            rhs: |g| stirling2_transform(g.n, 1, first),
        },
        IdentitySpec {
            id: "thm2.2-inverse",
            description: "Bl_{m,q}(x|lambda) = sum_l S1(m,l) q^(m-l) lambda^l E_l(x/lambda)",
            expectation: Expectation::Holds,
            grid: deg(),
            lhs: |g| first(g.n, 1),
            rhs: |g| Ok(stirling_sum_at(g.n, 1, &MultiPoly::x(), false)),
        },
        IdentitySpec {
            id: "q-limit",
            description: "Bl_{n,q}(x|lambda) at q = 1 equals 2 Bl_n(x|lambda)",
            expectation: Expectation::Holds,
            grid: deg(),
            lhs: |g| Ok(first(g.n, 1)?.specialize(Var::Q, &rational::one())),
            rhs: |g| Ok(boole_classical(g.n).scale(&rational::int(2))),
        },
        IdentitySpec {
            id: "eq16",
            description: "Bl^_{n,q}(x|lambda) = sum_l S1(n,l) q^(n-l) lambda^l (-1)^l E_l(-x/lambda)",
            expectation: Expectation::Holds,
            grid: deg(),
            lhs: |g| second(g.n, 1),
            rhs: |g| Ok(signed_reflected_sum(g.n, 1)),
        },
        IdentitySpec {
            id: "eq17-reflection",
            description: "E_n(-u) = (-1)^n E_n(1 + u), homogenized with u = x/lambda",
            expectation: Expectation::Holds,
            grid: deg(),
            lhs: |g| Ok(euler_homog_at(g.n, 1, &-&MultiPoly::x())),
            rhs: |g| Ok(euler_homog(g.n, 1, &rational::one()).scale(&sign(g.n))),
        },
        IdentitySpec {
            id: "eq19",
            description: "n![t^n] (1+qt)^((x+lambda)/q) 2/((1+qt)^(lambda/q)+1) = Bl^_{n,q}(x|lambda)",
            expectation: Expectation::Holds,
            grid: deg(),
            lhs: |g| qboole_second(g.n, 1, Construction::BySeries),
            rhs: |g| second(g.n, 1),
        },
        IdentitySpec {
            id: "thm2.3-forward",
            description: "sum_n q^(m-n) S2(m,n) Bl^_{n,q}(x|lambda) = lambda^m E_m(1 + x/lambda)",
            expectation: Expectation::Holds,
            grid: deg(),
            lhs: |g| stirling2_transform(g.n, 1, second),
            rhs: |g| Ok(euler_homog(g.n, 1, &rational::one())),
        },
        IdentitySpec {
            id: "thm2.3-inverse",
            description: "Bl^_{m,q}(x|lambda) = sum_l S1(m,l) q^(m-l) lambda^l E_l(1 + x/lambda)",
            expectation: Expectation::Holds,
            grid: deg(),
            lhs: |g| second(g.n, 1),
            rhs: |g| Ok(stirling_sum_at(g.n, 1, &(&MultiPoly::x() + &MultiPoly::lambda()), false)),
        },
        IdentitySpec {
            id: "eq23",
            description: "n![t^n] (1+qt)^(x/q) (2/((1+qt)^(lambda/q)+1))^a = Bl^(a)_{n,q}(x|lambda)",
            expectation: Expectation::Holds,
            grid: ord(),
            lhs: |g| qboole_first(g.n, g.alpha, Construction::BySeries),
            rhs: |g| first(g.n, g.alpha),
        },
        IdentitySpec {
            id: "thm2.4-forward",
            description: "lambda^m E^(a)_m(x/lambda) = sum_n q^(m-n) S2(m,n) Bl^(a)_{n,q}(x|lambda)",
            expectation: Expectation::Holds,
            grid: ord(),
            lhs: |g| Ok(euler_homog(g.n, g.alpha, &rational::zero())),
            rhs: |g| stirling2_transform(g.n, g.alpha, first),
        },
        IdentitySpec {
            id: "thm2.4-inverse",
            description: "Bl^(a)_{m,q}(x|lambda) = sum_l S1(m,l) q^(m-l) lambda^l E^(a)_l(x/lambda)",
            expectation: Expectation::Holds,
            grid: ord(),
            lhs: |g| first(g.n, g.alpha),
            rhs: |g| Ok(stirling_sum_at(g.n, g.alpha, &MultiPoly::x(), false)),
        },
        IdentitySpec {
            id: "eq27",
            description: "Bl^^(a)_{n,q}(x|lambda) = sum_l S1(n,l) (-1)^l q^(n-l) lambda^l E^(a)_l(-x/lambda)",
            expectation: Expectation::Holds,
            grid: ord(),
            lhs: |g| second(g.n, g.alpha),
            rhs: |g| Ok(signed_reflected_sum(g.n, g.alpha)),
        },
        IdentitySpec {
            id: "eq28-reflection",
            description: "E^(a)_n(-u) = (-1)^n E^(a)_n(u + a), homogenized with u = x/lambda",
            expectation: Expectation::Holds,
            grid: ord(),
            lhs: |g| Ok(euler_homog_at(g.n, g.alpha, &-&MultiPoly::x())),
            rhs: |g| Ok(euler_homog(g.n, g.alpha, &alpha_shift(g.alpha)).scale(&sign(g.n))),
        },
        IdentitySpec {
            id: "eq30-corrected",
            description: "n![t^n] (1+qt)^((x+a lambda)/q) (2/((1+qt)^(lambda/q)+1))^a = Bl^^(a)_{n,q}(x|lambda)",
            expectation: Expectation::Holds,
            grid: ord(),
            lhs: |g| qboole_second(g.n, g.alpha, Construction::BySeries),
            rhs: |g| second(g.n, g.alpha),
        },
        IdentitySpec {
            id: "thm2.5-forward",
            description: "lambda^m E^(a)_m(x/lambda + a) = sum_n q^(m-n) S2(m,n) Bl^^(a)_{n,q}(x|lambda)",
            expectation: Expectation::Holds,
            grid: ord(),
            lhs: |g| Ok(euler_homog(g.n, g.alpha, &alpha_shift(g.alpha))),
            rhs: |g| stirling2_transform(g.n, g.alpha, second),
        },
        IdentitySpec {
            id: "thm2.5-inverse",
            description: "Bl^^(a)_{m,q}(x|lambda) = sum_l S1(m,l) q^(m-l) lambda^l E^(a)_l(x/lambda + a)",
            expectation: Expectation::Holds,
            grid: ord(),
            lhs: |g| second(g.n, g.alpha),
            rhs: |g| qboole_second(g.n, g.alpha, Construction::ByStirlingSum),
        },
        IdentitySpec {
            id: "thm2.6",
            description: "(-1)^n q^-n Bl^_{n,q}(lambda)/n! = sum_l C(n-1,l-1) Bl_{l,q}(lambda)/(l! q^l), times q^n n!",
            expectation: Expectation::Holds,
            grid: degree_grid(1, n_max),
            lhs: thm2_6_lhs,
            rhs: thm2_6_rhs,
        },
    ];
    if include_printed_variants {
        specs.extend(printed_variants(n_max, a_max));
    }
    specs
}

/// `sum_l S1(n,l) (-1)^l q^(n-l) lambda^l E^(a)_l(-x/lambda)`.
fn signed_reflected_sum(n: usize, alpha: u32) -> MultiPoly {
    let q = MultiPoly::q();
    let neg_x = -&MultiPoly::x();
    let mut out = MultiPoly::zero();
    for l in 0..=n {
        let s1 = crate::combinatorics::stirling1(n as i64, l as i64).expect("0 <= l <= n");
        if s1.is_zero() {
            continue;
        }
        let term = &q.pow((n - l) as u32) * &euler_homog_at(l, alpha, &neg_x);
        out += term.scale(&(from_bigint(s1) * sign(l)));
    }
    out
}

/// Identities as printed where the printed form differs from what the
/// surrounding derivation produces.
fn printed_variants(n_max: usize, a_max: u32) -> Vec<IdentitySpec> {
    vec![
        IdentitySpec {
            id: "eq18-printed",
            description: "Bl^_{n,q}(x|lambda) = sum_l lambda^l |S1(n,l)| q^(n-l) E_l(1 + x/lambda)",
            expectation: Expectation::PrintedVariant,
            grid: degree_grid(0, n_max),
            lhs: |g| second(g.n, 1),
            rhs: |g| Ok(stirling_sum_at(g.n, 1, &(&MultiPoly::x() + &MultiPoly::lambda()), true)),
        },
        IdentitySpec {
            id: "eq30-printed",
            description: "n![t^n] (1+qt)^((x+a)/q) (2/((1+qt)^(lambda/q)+1))^a = Bl^^(a)_{n,q}(x|lambda)",
            expectation: Expectation::PrintedVariant,
            grid: order_grid(n_max, a_max),
            lhs: |g| {
                let s = &q_binomial_series(&x_plus_alpha(g.alpha), g.n)
                    * &crate::euler_boole::qboole_kernel(g.n).pow(g.alpha);
                Ok(series_value(s, g.n))
            },
            rhs: |g| second(g.n, g.alpha),
        },
        IdentitySpec {
            id: "thm2.5-printed",
            description: "lambda^m E^(a)_m((x+a)/lambda) = sum_n q^(m-n) S2(m,n) Bl^^(a)_{n,q}(x|lambda)",
            expectation: Expectation::PrintedVariant,
            grid: order_grid(n_max, a_max),
            lhs: |g| Ok(euler_homog_at(g.n, g.alpha, &x_plus_alpha(g.alpha))),
            rhs: |g| stirling2_transform(g.n, g.alpha, second),
        },
        IdentitySpec {
            id: "eq34-printed",
            description: "Bl^^(a)_{m,q}(x|lambda) = sum_l S1(m,l) q^(m-l) lambda^l E^(a)_l((x+a)/lambda)",
            expectation: Expectation::PrintedVariant,
            grid: order_grid(n_max, a_max),
            lhs: |g| second(g.n, g.alpha),
            rhs: |g| Ok(stirling_sum_at(g.n, g.alpha, &x_plus_alpha(g.alpha), false)),
        },
    ]
}

/// The binomial recurrence between the number families for `1 <= n <= n_max`.
///
/// `n = 0` is excluded: the right side would need a value for `C(-1, -1)`.
pub fn thm2_6_spec(n_max: usize) -> Result<IdentitySpec> {
    if n_max < 1 {
        return Err(Error::NMaxTooSmall);
    }
    Ok(IdentitySpec {
        id: "thm2.6",
        description: "(-1)^n q^-n Bl^_{n,q}(lambda)/n! = sum_l C(n-1,l-1) Bl_{l,q}(lambda)/(l! q^l), times q^n n!",
        expectation: Expectation::Holds,
        grid: degree_grid(1, n_max),
        lhs: thm2_6_lhs,
        rhs: thm2_6_rhs,
    })
}

pub fn check_thm2_6(n_max: usize, seed: u64) -> Result<AuditEntry> {
    check_identity(&thm2_6_spec(n_max)?, seed, DEFAULT_EVAL_POINTS)
}

fn stable_hash(s: &str) -> u64 {
    // FNV-1a
    s.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0100_0000_01b3)
    })
}

fn random_rational<R: Rng>(rng: &mut R, nonzero: bool) -> Rational {
    loop {
        let num: i64 = rng.gen_range(-100..=100);
        let den: i64 = rng.gen_range(1..=100);
        if !(nonzero && num == 0) {
            return rational::ratio(num, den);
        }
    }
}

fn random_point<R: Rng>(rng: &mut R) -> BTreeMap<Var, Rational> {
    BTreeMap::from([
        (Var::X, random_rational(rng, false)),
        (Var::Lambda, random_rational(rng, true)),
        (Var::Q, random_rational(rng, true)),
    ])
}

fn eval_point(at: &BTreeMap<Var, Rational>, lhs: Rational, rhs: Rational) -> EvalPoint {
    EvalPoint {
        x: rational::render(&at[&Var::X]),
        lambda: rational::render(&at[&Var::Lambda]),
        q: rational::render(&at[&Var::Q]),
        lhs: rational::render(&lhs),
        rhs: rational::render(&rhs),
    }
}

/// Checks one identity over its whole grid.
///
/// Each grid point is compared as canonical polynomials, then `eval_points`
/// random rational points (spread across the grid, at least one per grid
/// point) are evaluated on both sides. Symbolic equality with an evaluation
/// mismatch means the polynomial kernel is broken and is reported as an error.
pub fn check_identity(spec: &IdentitySpec, seed: u64, eval_points: usize) -> Result<AuditEntry> {
    if spec.grid.is_empty() {
        return Err(Error::EmptyGrid(spec.id.to_string()));
    }
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ stable_hash(spec.id));
    let per_point = eval_points.div_ceil(spec.grid.len()).max(1);
    let mut failures = 0;
    let mut witnesses: Vec<Witness> = Vec::new();
    let mut evaluated = 0;
    for &g in &spec.grid {
        let wrap = |e: Error| Error::Builder {
            id: spec.id.to_string(),
            n: g.n as u32,
            alpha: g.alpha,
            source: Box::new(e),
        };
        let lhs = (spec.lhs)(g).map_err(wrap)?;
        let rhs = (spec.rhs)(g).map_err(wrap)?;
        let equal = lhs == rhs;
        let mut differing = None;
        for _ in 0..per_point {
            let at = random_point(&mut rng);
            let lv = lhs.eval(&at)?;
            let rv = rhs.eval(&at)?;
            evaluated += 1;
            if equal && lv != rv {
                return Err(Error::EvaluationMismatch(spec.id.to_string()));
            }
            if !equal && lv != rv && differing.is_none() {
                differing = Some(eval_point(&at, lv, rv));
            }
        }
        if !equal {
            failures += 1;
            if !witnesses.iter().any(|w| w.alpha == g.alpha) {
                witnesses.push(Witness {
                    n: g.n,
                    alpha: g.alpha,
                    difference: (&lhs - &rhs).render(),
                    point: differing,
                });
            }
        }
    }
    let n_lo = spec.grid.iter().map(|g| g.n).min().unwrap();
    let n_hi = spec.grid.iter().map(|g| g.n).max().unwrap();
    let a_lo = spec.grid.iter().map(|g| g.alpha).min().unwrap();
    let a_hi = spec.grid.iter().map(|g| g.alpha).max().unwrap();
    Ok(AuditEntry {
        id: spec.id.to_string(),
        description: spec.description.to_string(),
        expected: spec.expectation,
        verdict: if failures == 0 { Verdict::Pass } else { Verdict::Fail },
        grid: GridSummary {
            n: [n_lo, n_hi],
            alpha: [a_lo, a_hi],
            points: spec.grid.len(),
        },
        failures,
        witness: witnesses.first().cloned(),
        witnesses,
        eval_points: evaluated,
        millis: start.elapsed().as_millis() as u64,
    })
}

/// Runs every registered identity. Entries appear in registry order
/// whatever order the workers finish in.
pub fn run_suite(config: &AuditConfig) -> Result<AuditReport> {
    let specs = registry(config.profile, config.include_printed_variants);
    // Warm the shared moment and Stirling caches before fanning out.
    fermionic_moments(config.profile.alpha_max(), config.profile.n_max());
    let entries = specs
        .par_iter()
        .map(|s| check_identity(s, config.seed, config.eval_points))
        .collect::<Result<Vec<_>>>()?;
    Ok(AuditReport::assemble(config, entries))
}
