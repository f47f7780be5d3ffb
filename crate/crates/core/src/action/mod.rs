//! Group actions by prefix exchanges.

pub mod builtin;
mod catalog;
mod exchange;
mod word;

use thiserror::Error;

use crate::sft::SpaceError;

pub use builtin::{builtin_action, f2_boundary, Builtin};
pub use catalog::{enumerate_elements, CatalogEntry, ElementCatalog};
pub use exchange::{validate_exchange, PrefixExchange};
pub use word::{Action, Generator, GroupWord, TowerWitness};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ActionError {
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error("rule domains do not cover the space")]
    IncompleteDomain,
    #[error("rule domains overlap: {0}")]
    OverlappingDomain(String),
    #[error("rule is not well defined on tails: {0}")]
    TailMismatch(String),
    #[error("rules are not bijective: {0}")]
    NotBijective(String),
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("malformed group word: {0}")]
    BadGroupWord(String),
    #[error("invalid generator name {0:?}")]
    BadGeneratorName(String),
    #[error("unknown built-in action {0:?}")]
    UnknownName(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
}
