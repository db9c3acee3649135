//! Proof kernel for an indexed intuitionistic logic and its correspondence
//! with non-idempotent intersection typings, over the relational model of
//! the lambda calculus.
//!
//! The crate is organized bottom-up:
//!
//! - [`indices`]: finite multisets, index sets, index maps;
//! - [`terms`]: simply typed and bottom-extended untyped lambda terms,
//!   their rewriting, and the projection sets Q(x) / Q°(M);
//! - [`relmodel`]: the relational category at finite scale and the points
//!   of the typed interpretations and of relational D∞;
//! - [`formulas`]: indexed formulas with their domain/family semantics,
//!   restriction, relocation, similarity and family representation;
//! - [`itsys`]: intersection-typing derivations, their checkers and a
//!   bounded derivation-search oracle;
//! - [`ljker`]: the indexed sequent kernel — proof checking, term
//!   extraction, and the proof transformations;
//! - [`xlate`]: the constructive translations between intersection typing
//!   families and kernel proofs, in both directions;
//! - [`church`]: the Church-style indexed calculus and its checker;
//! - [`sexpr`] / [`text`]: the s-expression surface syntax;
//! - [`gen`]: seeded random generators for the property suites.

pub mod church;
pub mod error;
pub mod formulas;
pub mod gen;
pub mod indices;
pub mod itsys;
pub mod ljker;
pub mod relmodel;
pub mod sexpr;
pub mod terms;
pub mod text;
pub mod xlate;

pub use error::{Error, Result, Violation};
