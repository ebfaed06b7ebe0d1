//! Finite wreath products, group laws and varieties.
//!
//! Groups are built from [`Recipe`]s and carry exact element arithmetic.
//! On top of that sit subgroup and series computations ([`structure`]), law
//! checking ([`laws`]), relatively free groups ([`varieties`]), embeddings
//! of extensions into wreath products ([`embeddings`]) and the abelian
//! decision procedures ([`criteria`]).

pub mod budget;
pub mod catalog;
mod closure;
pub mod criteria;
pub mod embeddings;
pub mod error;
pub mod group;
pub mod laws;
pub mod structure;
pub mod varieties;

pub use budget::{Budget, DEFAULT_BUDGET};
pub use error::{Error, Result};
pub use group::{build_group, AutomorphismTable, Group, GroupElement, Payload, Recipe};
pub use laws::{check_law, parse_word, LawVerdict, Word};
pub use structure::{Nilpotency, Subgroup};
