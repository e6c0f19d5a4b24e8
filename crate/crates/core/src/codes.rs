//! Classical and permutation codes: parameter sequences, Kraft numbers and
//! permutation constants, freeness, encoding and decoding, and unique
//! decodability.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::element::Element;
use crate::error::{Error, Result};
use crate::perm::{PartialPermutation, Relation, Sequence, Str, Symbol};
use crate::rational::{self, ExactRational};

/// Default bound on total output length for the brute-force decodability oracle.
pub const DEFAULT_ORACLE_OUTPUT_LENGTH: usize = 12;

/// Where codewords live.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Codomain {
    /// `S^*` with `#S = r`, symbols written `0..r`.
    String { r: u32 },
    /// `T_k`: partial permutations of `[k]`.
    PartialPerm { k: u32 },
    /// `𝕋_k = 𝕊_1 ∪ … ∪ 𝕊_k`.
    PermPattern { k: u32 },
}

impl Codomain {
    /// Alphabet size when codewords are read as strings.
    pub fn alphabet_size(&self) -> u32 {
        match *self {
            Codomain::String { r } => r,
            Codomain::PartialPerm { k } | Codomain::PermPattern { k } => k,
        }
    }
}

impl fmt::Display for Codomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Codomain::String { r } => write!(f, "string(r={r})"),
            Codomain::PartialPerm { k } => write!(f, "partial_perm(k={k})"),
            Codomain::PermPattern { k } => write!(f, "perm_pattern(k={k})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Word {
    Str(Str),
    Perm(PartialPermutation),
}

impl Word {
    pub fn symbols(&self) -> &[Symbol] {
        match self {
            Word::Str(s) => s.symbols(),
            Word::Perm(p) => p.symbols(),
        }
    }

    pub fn len(&self) -> usize {
        self.symbols().len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols().is_empty()
    }

    pub fn to_element(&self) -> Element {
        match self {
            Word::Str(s) => Element::Str(s.clone()),
            Word::Perm(p) => Element::Perm(p.clone()),
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Word::Str(s) => s.fmt(f),
            Word::Perm(p) => p.fmt(f),
        }
    }
}

/// An injective assignment of codewords to source symbols `1..=#S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Code {
    codomain: Codomain,
    codewords: Vec<Word>,
}

impl Code {
    pub fn new(codomain: Codomain, codewords: Vec<Word>) -> Result<Self> {
        for w in &codewords {
            let valid = match (codomain, w) {
                (Codomain::String { r }, Word::Str(s)) => s.radix() == r,
                (Codomain::PartialPerm { k }, Word::Perm(p)) => p.universe() == k,
                (Codomain::PermPattern { k }, Word::Perm(p)) => p.universe() == k && p.is_permutation_of_length(),
                _ => false,
            };
            if !valid {
                return Err(Error::InvalidParameter(format!("codeword {w} does not belong to {codomain}")));
            }
        }
        let mut seen = HashSet::new();
        if let Some(dup) = codewords.iter().find(|w| !seen.insert(*w)) {
            return Err(Error::DuplicateCodeword(dup.to_string()));
        }
        Ok(Code { codomain, codewords })
    }

    /// Parses codewords written in element syntax.
    pub fn parse<S: AsRef<str>>(codomain: Codomain, texts: &[S]) -> Result<Self> {
        let words = texts
            .iter()
            .map(|t| {
                Ok(match codomain {
                    Codomain::String { r } => Word::Str(Str::parse(t.as_ref(), r)?),
                    Codomain::PartialPerm { k } | Codomain::PermPattern { k } => {
                        Word::Perm(PartialPermutation::parse(t.as_ref(), Some(k))?)
                    }
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Code::new(codomain, words)
    }

    pub fn from_json(json: &CodeJson) -> Result<Self> {
        Code::parse(json.codomain, &json.codewords)
    }

    pub fn to_json(&self) -> CodeJson {
        CodeJson { codomain: self.codomain, codewords: self.codewords.iter().map(|w| w.to_string()).collect() }
    }

    pub fn codomain(&self) -> Codomain {
        self.codomain
    }

    pub fn codewords(&self) -> &[Word] {
        &self.codewords
    }

    pub fn len(&self) -> usize {
        self.codewords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codewords.is_empty()
    }

    pub fn parameter_sequence(&self) -> ParameterSequence {
        parameter_sequence(self)
    }
}

/// On-disk code format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeJson {
    pub codomain: Codomain,
    pub codewords: Vec<String>,
}

/// `(a_0, a_1, …)`: number of codewords of each length. Trailing zeros are dropped.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct ParameterSequence(Vec<u64>);

impl ParameterSequence {
    pub fn new(mut counts: Vec<u64>) -> Self {
        while counts.last() == Some(&0) {
            counts.pop();
        }
        ParameterSequence(counts)
    }

    pub fn get(&self, length: usize) -> u64 {
        self.0.get(length).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> &[u64] {
        &self.0
    }

    /// Lengths with a nonzero count.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &a)| a > 0).map(|(i, _)| i)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<Vec<u64>> for ParameterSequence {
    fn from(counts: Vec<u64>) -> Self {
        ParameterSequence::new(counts)
    }
}

impl fmt::Display for ParameterSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().join(","))
    }
}

pub fn parameter_sequence(code: &Code) -> ParameterSequence {
    let mut counts = Vec::new();
    for w in code.codewords() {
        if counts.len() <= w.len() {
            counts.resize(w.len() + 1, 0);
        }
        counts[w.len()] += 1;
    }
    ParameterSequence::new(counts)
}

fn weighted_sum(params: &ParameterSequence, weight: impl Fn(usize) -> BigInt) -> ExactRational {
    params
        .support()
        .map(|i| ExactRational::new(BigInt::from(params.get(i)), weight(i)))
        .fold(rational::zero(), |acc, x| acc + x)
}

/// `K = Σ a_i / r^i`.
pub fn kraft_number(params: &ParameterSequence, r: u32) -> Result<ExactRational> {
    if r == 0 {
        return Err(Error::InvalidParameter("alphabet size must be at least 1".into()));
    }
    Ok(weighted_sum(params, |i| BigInt::from(r).pow(i as u32)))
}

fn check_perm_support(params: &ParameterSequence, k: u32) -> Result<()> {
    match params.support().find(|&i| i == 0 || i > k as usize) {
        Some(i) => Err(Error::InvalidParameter(format!(
            "parameter a_{i} is nonzero but permutation codewords have lengths 1..={k}"
        ))),
        None => Ok(()),
    }
}

/// `P_c = Σ_{l=1}^k a_l / (C(k,l)·l!)` for codes into `T_k`.
pub fn permutation_constant_t(params: &ParameterSequence, k: u32) -> Result<ExactRational> {
    check_perm_support(params, k)?;
    Ok(weighted_sum(params, |l| rational::falling_factorial(k as u64, l as u64)))
}

/// `𝕡_c = Σ_{l=1}^k a_l / l!` for codes into `𝕋_k`.
pub fn permutation_constant_s(params: &ParameterSequence, k: u32) -> Result<ExactRational> {
    check_perm_support(params, k)?;
    Ok(weighted_sum(params, |l| rational::factorial(l as u64)))
}

/// The constant matching the code's codomain: `K_c`, `P_c` or `𝕡_c`.
pub fn code_constant(code: &Code) -> Result<ExactRational> {
    let params = code.parameter_sequence();
    match code.codomain() {
        Codomain::String { r } => kraft_number(&params, r),
        Codomain::PartialPerm { k } => permutation_constant_t(&params, k),
        Codomain::PermPattern { k } => permutation_constant_s(&params, k),
    }
}

/// Outcome of a freeness check. Indices are 0-based positions in the code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Freeness {
    Free,
    /// `codewords[lower]` is related into `codewords[upper]`.
    NotFree { lower: usize, upper: usize },
}

impl Freeness {
    pub fn is_free(&self) -> bool {
        matches!(self, Freeness::Free)
    }
}

/// No codeword is related into a different codeword.
pub fn is_free(code: &Code, relation: Relation) -> Result<Freeness> {
    if relation.is_pattern_kind() && !matches!(code.codomain(), Codomain::PermPattern { .. }) {
        return Err(Error::UnsupportedRelation { relation, context: format!("codes into {}", code.codomain()) });
    }
    let words = code.codewords();
    for (i, lower) in words.iter().enumerate() {
        for (j, upper) in words.iter().enumerate() {
            if i != j && relation.holds(lower.symbols(), upper.symbols()) {
                return Ok(Freeness::NotFree { lower: i, upper: j });
            }
        }
    }
    Ok(Freeness::Free)
}

/// Concatenates the codewords of a message of 1-based source symbols.
pub fn encode(code: &Code, message: &[usize]) -> Result<Word> {
    let mut symbols = Vec::new();
    for &s in message {
        let w = s.checked_sub(1).and_then(|i| code.codewords().get(i)).ok_or(Error::UnknownSourceSymbol(s))?;
        symbols.extend_from_slice(w.symbols());
    }
    match code.codomain() {
        Codomain::String { r } => Ok(Word::Str(Str::new(symbols, r)?)),
        Codomain::PartialPerm { k } | Codomain::PermPattern { k } => {
            let p = PartialPermutation::new(symbols, k).map_err(|_| Error::ConcatenationLeavesCodomain)?;
            if matches!(code.codomain(), Codomain::PermPattern { .. }) && !p.is_permutation_of_length() {
                return Err(Error::ConcatenationLeavesCodomain);
            }
            Ok(Word::Perm(p))
        }
    }
}

/// Left-to-right instantaneous decoding of a prefix-free code.
pub fn decode_prefix_free(code: &Code, output: &[Symbol]) -> Result<Vec<usize>> {
    if !is_free(code, Relation::Prefix)?.is_free() {
        return Err(Error::NotPrefixFree);
    }
    if code.codewords().iter().any(Word::is_empty) {
        return Err(Error::Precondition("the empty codeword cannot be decoded".into()));
    }
    let lookup: HashMap<&[Symbol], usize> =
        code.codewords().iter().enumerate().map(|(i, w)| (w.symbols(), i + 1)).collect();
    let mut message = Vec::new();
    let mut start = 0;
    for end in 1..=output.len() {
        if let Some(&s) = lookup.get(&output[start..end]) {
            message.push(s);
            start = end;
        }
    }
    if start != output.len() {
        return Err(Error::UnparseableResidue(start));
    }
    Ok(message)
}

/// Sardinas–Patterson: follow dangling suffixes until one is a codeword or no new ones appear.
pub fn is_uniquely_decodable(code: &Code) -> bool {
    let words: Vec<&[Symbol]> = code.codewords().iter().map(Word::symbols).collect();
    if words.iter().any(|w| w.is_empty()) {
        // c(s) = c(ss)
        return false;
    }
    let codewords: HashSet<&[Symbol]> = words.iter().copied().collect();
    let mut seen: HashSet<Vec<Symbol>> = HashSet::new();
    let mut queue: VecDeque<Vec<Symbol>> = VecDeque::new();
    for (i, u) in words.iter().enumerate() {
        for (j, v) in words.iter().enumerate() {
            if i != j && v.len() > u.len() && v.starts_with(u) {
                let suffix = v[u.len()..].to_vec();
                if seen.insert(suffix.clone()) {
                    queue.push_back(suffix);
                }
            }
        }
    }
    while let Some(x) = queue.pop_front() {
        if codewords.contains(x.as_slice()) {
            return false;
        }
        for u in &words {
            let next = if u.len() > x.len() && u.starts_with(&x) {
                u[x.len()..].to_vec()
            } else if x.len() > u.len() && x.starts_with(u) {
                x[u.len()..].to_vec()
            } else {
                continue;
            };
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    true
}

/// Brute-force check that no two distinct messages with output length at
/// most `max_output_len` encode to the same output.
pub fn brute_force_uniquely_decodable(code: &Code, max_output_len: usize) -> bool {
    fn explore(
        words: &[&[Symbol]],
        output: &mut Vec<Symbol>,
        message: &mut Vec<usize>,
        max: usize,
        outputs: &mut HashMap<Vec<Symbol>, Vec<usize>>,
    ) -> bool {
        if !message.is_empty() {
            if let Some(prev) = outputs.insert(output.clone(), message.clone()) {
                if prev != *message {
                    return false;
                }
            }
        }
        for (i, w) in words.iter().enumerate() {
            if output.len() + w.len() <= max {
                output.extend_from_slice(w);
                message.push(i);
                let ok = explore(words, output, message, max, outputs);
                message.pop();
                output.truncate(output.len() - w.len());
                if !ok {
                    return false;
                }
            }
        }
        true
    }
    let words: Vec<&[Symbol]> = code.codewords().iter().map(Word::symbols).collect();
    if words.iter().any(|w| w.is_empty()) {
        // messages (s) and (s, s) collide
        return false;
    }
    explore(&words, &mut Vec::new(), &mut Vec::new(), max_output_len, &mut HashMap::new())
}

/// For a fixed-length code in `T_k`: every string of length `k − d + 1` is a
/// subsequence of at most one codeword, i.e. the minimum Ulam distance is at least `d`.
pub fn ulam_subsequence_condition(code: &Code, d: usize) -> Result<bool> {
    let Codomain::PartialPerm { k } = code.codomain() else {
        return Err(Error::InvalidParameter("Ulam condition needs a partial_perm codomain".into()));
    };
    let k = k as usize;
    if d == 0 || d > k {
        return Err(Error::InvalidParameter(format!("d = {d} outside 1..={k}")));
    }
    if let Some(w) = code.codewords().iter().find(|w| w.len() != k) {
        return Err(Error::InvalidParameter(format!("codeword {w} does not have length {k}")));
    }
    let m = k - d + 1;
    let mut owner: HashMap<Vec<Symbol>, usize> = HashMap::new();
    for (i, w) in code.codewords().iter().enumerate() {
        for positions in (0..k).combinations(m) {
            let sub: Vec<Symbol> = positions.iter().map(|&p| w.symbols()[p]).collect();
            if *owner.entry(sub).or_insert(i) != i {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
