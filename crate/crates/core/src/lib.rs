//! Kraft-type inequalities on level-regular graded posets.
//!
//! The crate builds the posets induced by the prefix, subsequence, substring,
//! pattern and substring-pattern relations on strings and partial
//! permutations, computes Kraft numbers, permutation constants and LYM
//! numbers exactly, checks code freeness and unique decodability, constructs
//! prefix-free codes greedily, and searches exhaustively for antichains with
//! prescribed level counts.

pub mod codes;
pub mod element;
pub mod error;
pub mod lym;
pub mod perm;
pub mod poset;
pub mod rational;

pub use codes::{Code, Codomain, ParameterSequence, Word};
pub use element::{Element, Subset};
pub use error::{Error, Result};
pub use lym::{Antichain, LevelCounts};
pub use perm::{PartialPermutation, Relation, Sequence, Str, Symbol};
pub use poset::{Family, GradedPoset, RegularityReport};
pub use rational::ExactRational;
