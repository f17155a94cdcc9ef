//! Sentence generation from f-structure semantics with unification grammars.
//!
//! The generator splits input semantics into a semantic kernel and
//! non-kernel lists, applies the rules that consume list elements top-down
//! and realizes the kernel head-driven. See [`generate::generate`].

pub mod avm;
pub mod error;
pub mod generate;
pub mod grammar;
pub mod parser;
pub mod sk;

pub use avm::{equal_modulo_renaming, subsumes, unify, FeatureStructure, Path, Value};
pub use error::{Error, Result};
pub use grammar::{load_grammar, Grammar, LexEntry, Rule, RuleClass};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/feature-structures.md")]
    mod feature_structures {}
    #[doc = include_str!("../../../book/src/grammars.md")]
    mod grammars {}
    #[doc = include_str!("../../../book/src/semantic-kernels.md")]
    mod semantic_kernels {}
    #[doc = include_str!("../../../book/src/generation.md")]
    mod generation {}
    #[doc = include_str!("../../../book/src/baseline.md")]
    mod baseline {}
    #[doc = include_str!("../../../book/src/parsing.md")]
    mod parsing {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
