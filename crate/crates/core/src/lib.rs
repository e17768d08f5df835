//! Exact arithmetic for the index formulae satisfied by Stark units of
//! abelian extensions `K/k` of totally real fields.
//!
//! The crate is organized around the objects the index formulae live on:
//!
//! * [`groupring`] — exact arithmetic in `Q[G]` for cyclic `G` of order `2m`,
//!   its minus part, rational idempotents, and the special orders that show
//!   up for quartic and sextic extensions (`Z[i]`, `Z[ω]`, `Z[H]`, `O`).
//! * [`gmodule`] — finite modules over those rings given by presentations,
//!   Fitting ideals, and `ψ`-component orders at primes `p ∤ |G|`.
//! * [`cohomology`] — Tate cohomology and Herbrand quotients of finite
//!   cyclic group actions on finitely generated abelian groups.
//! * [`unitlattice`] — minus-part unit lattices with log-embedding data,
//!   the determinant group factorization, and the product-formula checks.
//! * [`stark`] — the (P1)/(P2) index verifiers, the explicit quadratic,
//!   quartic and sextic constructions, and the squareness predicates.
//! * [`record`] / [`report`] — JSON ingestion of extension data and
//!   deterministic verification reports for the CLI.
//!
//! All exact computations use arbitrary-precision integers and rationals;
//! floating-point only enters through externally supplied log-embedding and
//! L-value data, and every float comparison carries an error radius and can
//! return an inconclusive verdict instead of a mathematical one.

pub mod cohomology;
pub mod cyclotomic;
pub mod eisenstein;
pub mod error;
pub mod gaussian;
pub mod gmodule;
pub mod groupring;
pub mod hring;
pub mod intmat;
pub mod record;
pub mod report;
pub mod stark;
pub mod synth;
pub mod unitlattice;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
