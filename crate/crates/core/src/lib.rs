//! Exact construction of Euler, Boole and q-Boole polynomial families,
//! a registry of identities relating them, and a fermionic p-adic oracle
//! that checks the integral representations numerically.
//!
//! Every computation is exact: coefficients are arbitrary-precision
//! rationals and polynomials live in `Q[x, lambda, q]`.

pub mod audit;
pub mod cli;
pub mod combinatorics;
pub mod error;
pub mod euler_boole;
pub mod padic;
pub mod poly;
pub mod rational;
pub mod series;

pub use error::{Error, Result};
pub use euler_boole::{Construction, Family, FamilyId, Kind};
pub use poly::{Monomial, MultiPoly, Var};
pub use rational::Rational;
pub use series::TruncSeries;
