//! Exact enumeration of monotone triangles, halved monotone triangles and
//! alternating sign matrices.
//!
//! The crate computes the same counts along independent routes — direct
//! backtracking, a summation recursion, shift-operator formulas applied to
//! simple product polynomials, factorial product formulas and
//! generating-function coefficient extraction — and ships a verification
//! driver that cross-checks them against each other. All arithmetic is
//! exact: arbitrary-precision rationals for polynomial coefficients and big
//! integers for counts.
//!
//! Module map:
//!
//! * [`poly`] — canonical multivariate polynomials over the rationals.
//! * [`shift_ops`] — the commutative shift-operator algebra, the named
//!   operator products and truncated operator inversion.
//! * [`brute`] — ground-truth enumeration of the combinatorial objects, the
//!   extended summation operator and the counting recursion.
//! * [`formulas`] — the counting polynomials and product formulas.
//! * [`genfun`] — generating-function coefficient extraction, binomial
//!   determinants and series identities.
//! * [`verify`] — the randomized/exhaustive property driver used by the CLI
//!   and the acceptance suite.

pub mod brute;
pub mod error;
pub mod formulas;
pub mod genfun;
pub mod poly;
pub mod rational;
pub mod shift_ops;
pub mod verify;

pub use error::{Error, Result};
pub use poly::{parse_poly, Monomial, MultiPoly, VarId};
pub use rational::Rational;
