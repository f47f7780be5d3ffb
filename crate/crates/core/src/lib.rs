//! Witness search and exact verification for actions of finitely generated
//! groups on Cantor-type spaces.
//!
//! Spaces are one-step subshifts of finite type ([`sft`]); group elements act
//! by prefix exchanges ([`action`]). On top of that sit subequivalence and
//! paradoxicality searches ([`comparison`]), exact invariant-content linear
//! programs ([`measures`]), the type semigroup ([`semigroup`]) and a symbolic
//! crossed-product algebra ([`algebra`]). Every search result carries a
//! witness that is checked by a separate exact verifier.

pub mod action;
pub mod algebra;
pub mod comparison;
pub mod lp;
pub mod measures;
pub mod par;
pub mod semigroup;
pub mod sft;
pub mod step;

pub use action::{Action, GroupWord, PrefixExchange};
pub use par::Execution;
pub use sft::{ClopenSet, SftSpace, Word};
pub use step::StepFunction;
