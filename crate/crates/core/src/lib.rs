//! Exact-arithmetic construction and verification of N-linear skew-symmetric
//! brackets.
//!
//! The crate builds generalized Wronskian determinants in one and several
//! variables, alternating brackets on the associative algebra of differential
//! operators, and finite structure-constant algebras, and verifies the
//! homotopy N-Lie Jacobi identities, the Richardson-Nijenhuis calculus, and
//! the Koszul/Hochschild differential properties on finite test spaces.
//! All arithmetic is exact (arbitrary-precision rationals); every verdict is
//! an exact equality, never a numerical tolerance.
//!
//! Module map:
//! - [`poly`]: multivariate polynomials over the rationals, the carrier algebra.
//! - [`perm`]: unshuffle and permutation enumeration with signs.
//! - [`linalg`]: exact determinants, ranks (fraction-free and plain), solving.
//! - [`skewop`]: skew-symmetric multilinear operators with wedge, action,
//!   inner product, and the Richardson-Nijenhuis bracket.
//! - [`wronskian`]: one-variable generalized Wronskians, Vandermonde structure
//!   constants, the monomial closure recurrence, conformal-weight covariance.
//! - [`diffop`]: differential operators with polynomial coefficients, the
//!   N-linear alternating composition bracket, and its reduction checks.
//! - [`jet`]: n-variable Wronskians over jet multiindex bases, the Nambu
//!   Jacobian bracket, and the cross-vanishing verifier.
//! - [`homotopy`]: Jacobi-identity checkers, Hochschild and Koszul
//!   differentials, homology ranks on finite spans.
//! - [`finite`]: structure-constant N-brackets on k^r and their polynomial
//!   representations.

pub mod diffop;
pub mod error;
pub mod finite;
pub mod homotopy;
pub mod jet;
pub mod linalg;
pub mod oplang;
pub mod perm;
pub mod poly;
pub mod seeded;
pub mod skewop;
pub mod wronskian;

pub use error::{Error, Result};
pub use poly::{parse_poly, parse_poly_laurent, MultiIndex, Polynomial, Rat};
