//! Exact arithmetic for eta quotients on the Hecke congruence groups.
//!
//! The crate computes orders of eta quotients at cusps, tests holomorphy,
//! applies holomorphy-preserving exponent maps, expands quotients as
//! q-series over cyclotomic integer coefficients, and exhaustively
//! enumerates the holomorphic eta quotients of a prescribed weight and
//! level — enough to verify mechanically that the fourteen primitive
//! weight-1/2 quotients of Zagier's list are the only ones on level 72.
//!
//! Everything is exact: arbitrary-precision rationals, integer matrices
//! with closed-form rational inverses, cyclotomic integers. There is no
//! floating point anywhere in the crate.
//!
//! # Modules
//!
//! - [`arith`] — factorization, divisors, totient, rationals, Z[zeta_n]
//! - [`etaq`] — exponent vectors, level/weight, rescaling, star product
//! - [`orders`] — cusps, order matrices and inverses, holomorphy, valence
//! - [`phimap`] — admissible weight vectors and the level-lowering maps
//! - [`series`] — q-expansions in u = q^(1/24), triple-product checks,
//!   theta supports, the sign transform
//! - [`enumerate`] — exact lattice-point enumeration and classification

pub mod arith;
pub mod enumerate;
pub mod error;
pub mod etaq;
pub mod orders;
pub mod phimap;
pub mod series;

pub use arith::{CyclotomicInt, Factorization, Rational};
pub use enumerate::{ClassifiedQuotient, EnumerationProblem, ZagierReport};
pub use error::{Error, Result};
pub use etaq::{zagier_member_name, zagier_members, ExponentVector, ReindexedMatrix, ZAGIER_COUNT};
pub use orders::{CuspClass, DivisorMatrix};
pub use phimap::PhiWeights;
pub use series::PuiseuxSeries;
