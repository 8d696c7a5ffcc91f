//! Symbolic intersection theory with exact rational arithmetic.
//!
//! The crate computes square-root Euler classes of orthogonal bundles on
//! explicit model varieties (projective spaces, projective bundles and
//! blowups), their localizations along isotropic sections, K-theoretic
//! square roots, and the formal-group-law twist series that interpolates
//! between the Chow and K-theory answers. Every computation is a normal
//! form in an explicitly presented graded ring over arbitrary-precision
//! rationals, so identities are checked exactly.
//!
//! Layering, bottom up:
//!
//! * [`arith`] — rationals, sparse graded polynomials, truncated series,
//!   symmetric-function conversion;
//! * [`chow`] — model Chow rings with pullback / pushforward / Gysin maps,
//!   Segre-class pushforwards and blowups;
//! * [`orth`] — hyperbolic orthogonal bundles, orientations, isotropic
//!   reduction, the square-root Euler class and its localized variants;
//! * [`ktheory`] — the same story one level up, in augmented K-rings;
//! * [`fgl`] — formal group laws and the `sqrt(h)` twist series;
//! * [`script`] — the line-oriented language behind the `sqrteuler` CLI.

pub mod arith;
pub mod chow;
pub mod fgl;
pub mod ktheory;
pub mod orth;
pub mod script;

mod book;

pub use arith::{Poly, Rat, VarSet};
pub use orth::OrthBundle;
pub use chow::{Bundle, Class, Variety};

