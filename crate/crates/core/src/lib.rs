//! Two-variable functional means and their equality structure.
//!
//! The crate evaluates the classical two-parameter mean families (power,
//! Gini, Stolarsky), their functional generalizations (quasiarithmetic,
//! Bajraktarević, Cauchy) and the measure-generalized mean
//! `M_{f,g;μ}(x, y) = (f/g)⁻¹(∫f(tx+(1-t)y)dμ / ∫g(tx+(1-t)y)dμ)`,
//! and certifies when two such means are the same function.
//!
//! The machinery underneath:
//!
//! * [`jet`] — truncated Taylor arithmetic to order 8; every derivative in
//!   the crate comes from jets, not finite differences.
//! * [`expr`] — closed-form function trees over the elementary set, with
//!   symbolic differentiation.
//! * [`measure`] — atoms-plus-polynomial-density probability measures on
//!   [0, 1], exact moments, and the two-parameter moment family π(ℓ, p).
//! * [`generator`] — generator pairs `(f, g)`, Wronskians, the signature
//!   functions Φ and Ψ, and the linear-mixing equivalence.
//! * [`mean`] — evaluation of every mean family, including the implicit
//!   root-finding evaluator for generalized means.
//! * [`diagonal`] — high-order derivatives of the diagonal slice
//!   `u ↦ M(x+u/2, x-u/2)` via the φ/ψ recursion, with an independent
//!   implicit-series oracle and finite-difference corroboration.
//! * [`equality`] — equality certification: the five-condition chain for a
//!   shared measure, witness extraction, the Bajraktarević-vs-Cauchy
//!   condition suite, and the Gini/Stolarsky intersection scan.

// Index loops over fixed coefficient arrays are the clearest form for the
// truncated-series arithmetic here.
#![allow(clippy::needless_range_loop)]

pub mod diagonal;
pub mod equality;
pub mod expr;
pub mod generator;
pub mod jet;
pub mod mean;
pub mod measure;

mod quad;
mod solve;

pub use expr::Expr;
pub use generator::{GeneratorPair, Interval, PairSpec, TrigPair};
pub use jet::{Elementary, Jet};
pub use mean::MeanSpec;
pub use measure::{Measure, MnKind, MomentVector, PiParams};
