use thiserror::Error;

use crate::perm::Relation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty partial permutation")]
    EmptyPartialPermutation,
    #[error("symbol {symbol} outside universe [1, {universe}]")]
    SymbolOutOfRange { symbol: u32, universe: u32 },
    #[error("symbol {symbol} outside alphabet of size {radix}")]
    SymbolOutsideAlphabet { symbol: u32, radix: u32 },
    #[error("repeated symbol {0} in partial permutation")]
    RepeatedSymbol(u32),
    #[error("universe mismatch: {left} vs {right}")]
    UniverseMismatch { left: u32, right: u32 },
    #[error("{0} is not a full permutation")]
    NotFullPermutation(String),
    #[error("length {l} exceeds universe size {k}")]
    LengthExceedsUniverse { l: usize, k: usize },
    #[error("cannot parse element {0:?}")]
    Parse(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("relation {relation} is not defined for {context}")]
    UnsupportedRelation { relation: Relation, context: String },
    #[error("duplicate codeword {0}")]
    DuplicateCodeword(String),
    #[error("code is not prefix-free")]
    NotPrefixFree,
    #[error("output has an unparseable residue starting at position {0}")]
    UnparseableResidue(usize),
    #[error("concatenation leaves codomain")]
    ConcatenationLeavesCodomain,
    #[error("source symbol {0} has no codeword")]
    UnknownSourceSymbol(usize),
    #[error("level {0} does not exist")]
    NoSuchLevel(usize),
    #[error("element {element} is not in level {level}")]
    ForeignElement { level: usize, element: String },
    #[error("set spans several levels")]
    MixedLevels,
    #[error("levels {lower} and {upper} are not biregular")]
    NotBiregular { lower: usize, upper: usize },
    #[error("{0}")]
    Precondition(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("poset has {count} vertices, over the cap of {cap}; use a smaller instance")]
    TooLarge { count: usize, cap: usize },
    #[error("search budget of {budget} nodes exceeded; use a smaller instance")]
    BudgetExceeded { budget: u64 },
    #[error("malformed poset: {0}")]
    MalformedPoset(String),
}

pub type Result<T> = std::result::Result<T, Error>;
