//! Stirling numbers, binomial coefficients and falling factorials.

use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::MultiPoly;
use crate::rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StirlingKind {
    /// Signed Stirling numbers of the first kind.
    First,
    Second,
}

/// Triangle `S(n, k)` for `0 <= k <= n <= max_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StirlingTable {
    kind: StirlingKind,
    rows: Vec<Vec<BigInt>>,
}

impl StirlingTable {
    pub fn new(kind: StirlingKind, max_n: usize) -> Self {
        let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(max_n + 1);
        rows.push(vec![BigInt::one()]);
        for n in 0..max_n {
            let prev = &rows[n];
            let mut row = vec![BigInt::zero(); n + 2];
            for (k, slot) in row.iter_mut().enumerate().skip(1) {
                let left = &prev[k - 1];
                let same = prev.get(k).cloned().unwrap_or_default();
                *slot = match kind {
                    // S1(n+1, k) = S1(n, k-1) - n S1(n, k)
                    StirlingKind::First => left - BigInt::from(n) * same,
                    // S2(n+1, k) = k S2(n, k) + S2(n, k-1)
                    StirlingKind::Second => BigInt::from(k) * same + left,
                };
            }
            rows.push(row);
        }
        StirlingTable { kind, rows }
    }

    pub fn kind(&self) -> StirlingKind {
        self.kind
    }

    pub fn max_n(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn get(&self, n: usize, k: usize) -> Option<&BigInt> {
        self.rows.get(n).and_then(|r| r.get(k))
    }

    pub fn row(&self, n: usize) -> Option<&[BigInt]> {
        self.rows.get(n).map(Vec::as_slice)
    }
}

static FIRST: RwLock<Option<Arc<StirlingTable>>> = RwLock::new(None);
static SECOND: RwLock<Option<Arc<StirlingTable>>> = RwLock::new(None);

/// Shared table covering at least `max_n`; grown on demand.
pub fn shared_table(kind: StirlingKind, max_n: usize) -> Arc<StirlingTable> {
    let slot = match kind {
        StirlingKind::First => &FIRST,
        StirlingKind::Second => &SECOND,
    };
    if let Some(t) = slot.read().unwrap().as_ref() {
        if t.max_n() >= max_n {
            return Arc::clone(t);
        }
    }
    let mut guard = slot.write().unwrap();
    match guard.as_ref() {
        Some(t) if t.max_n() >= max_n => Arc::clone(t),
        _ => {
            let size = max_n.max(32);
            let t = Arc::new(StirlingTable::new(kind, size));
            *guard = Some(Arc::clone(&t));
            t
        }
    }
}

fn lookup(kind: StirlingKind, n: i64, k: i64) -> Result<BigInt> {
    if n < 0 || k < 0 || k > n {
        return Err(Error::StirlingRange { n, k });
    }
    let t = shared_table(kind, n as usize);
    Ok(t.get(n as usize, k as usize).cloned().expect("table covers n"))
}

/// Signed `S1(n, k)`: `(x)_n = sum_k S1(n, k) x^k`.
pub fn stirling1(n: i64, k: i64) -> Result<BigInt> {
    lookup(StirlingKind::First, n, k)
}

pub fn stirling1_unsigned(n: i64, k: i64) -> Result<BigInt> {
    lookup(StirlingKind::First, n, k).map(|v| v.abs())
}

/// `S2(n, k)`: `x^n = sum_k S2(n, k) (x)_k`.
pub fn stirling2(n: i64, k: i64) -> Result<BigInt> {
    lookup(StirlingKind::Second, n, k)
}

/// Generalized binomial coefficient, zero for `k < 0`.
pub fn binom(m: i64, k: i64) -> BigInt {
    if k < 0 {
        return BigInt::zero();
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for j in 0..k {
        num *= BigInt::from(m - j);
        den *= BigInt::from(j + 1);
    }
    let (quot, rem) = num.div_rem(&den);
    debug_assert!(rem.is_zero());
    quot
}

/// `w (w - 1) ... (w - n + 1)`.
pub fn falling_factorial(w: &MultiPoly, n: usize) -> MultiPoly {
    (0..n).fold(MultiPoly::one(), |acc, j| {
        &acc * &(w - &MultiPoly::int(j as i64))
    })
}

/// `w (w - q) (w - 2q) ... (w - (n-1) q)`.
pub fn q_falling_factorial(w: &MultiPoly, n: usize) -> MultiPoly {
    let q = MultiPoly::q();
    (0..n).fold(MultiPoly::one(), |acc, j| {
        &acc * &(w - &q.scale(&rational::int(j as i64)))
    })
}
