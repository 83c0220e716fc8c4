//! Reversible timed process language: terms, forward and backward
//! semantics, causal analysis, reference engines and bounded checks of the
//! reversibility metatheory.

pub mod analysis;
pub mod corpus;
pub mod reference;
pub mod script;
pub mod semantics;
pub mod syntax;
pub mod trace;
pub mod verify;
