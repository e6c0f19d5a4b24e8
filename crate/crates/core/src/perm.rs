//! Strings, partial permutations and the five order relations between them.
//!
//! Strings are over the alphabet `{0, …, r−1}`, which is how binary codewords
//! such as `10` are usually written. Partial permutations are injective
//! sequences over `[k] = {1, …, k}` and always carry their universe `k`:
//! `253@6` and `253@5` are different objects, and every binary relation
//! checks that both sides share a universe.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::element::Element;
use crate::error::{Error, Result};

pub type Symbol = u32;

/// The order relations a code can be required to avoid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Prefix,
    Subsequence,
    Substring,
    Pattern,
    SubstringPattern,
}

impl Relation {
    pub const ALL: [Relation; 5] = [
        Relation::Prefix,
        Relation::Subsequence,
        Relation::Substring,
        Relation::Pattern,
        Relation::SubstringPattern,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Relation::Prefix => "prefix",
            Relation::Subsequence => "subsequence",
            Relation::Substring => "substring",
            Relation::Pattern => "pattern",
            Relation::SubstringPattern => "substring_pattern",
        }
    }

    /// True for the relations that compare relative order rather than symbols.
    pub fn is_pattern_kind(self) -> bool {
        matches!(self, Relation::Pattern | Relation::SubstringPattern)
    }

    /// Whether `lower` is related into `upper` (reflexive), on raw symbol sequences.
    pub fn holds(self, lower: &[Symbol], upper: &[Symbol]) -> bool {
        match self {
            Relation::Prefix => seq::is_prefix(lower, upper),
            Relation::Subsequence => seq::is_subsequence(lower, upper),
            Relation::Substring => seq::is_substring(lower, upper),
            Relation::Pattern => seq::is_pattern_in(lower, upper),
            Relation::SubstringPattern => seq::is_substring_pattern_in(lower, upper),
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Relation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "prefix" => Ok(Relation::Prefix),
            "subsequence" => Ok(Relation::Subsequence),
            "substring" => Ok(Relation::Substring),
            "pattern" => Ok(Relation::Pattern),
            "substring_pattern" => Ok(Relation::SubstringPattern),
            other => Err(Error::InvalidParameter(format!("unknown relation {other:?}"))),
        }
    }
}

/// Relation checks on plain symbol sequences. No universe bookkeeping.
pub mod seq {
    use super::Symbol;

    pub fn is_prefix(t: &[Symbol], u: &[Symbol]) -> bool {
        u.starts_with(t)
    }

    pub fn is_subsequence(sigma: &[Symbol], tau: &[Symbol]) -> bool {
        let mut rest = tau.iter();
        sigma.iter().all(|s| rest.any(|t| t == s))
    }

    pub fn is_substring(sigma: &[Symbol], tau: &[Symbol]) -> bool {
        sigma.is_empty() || tau.windows(sigma.len()).any(|w| w == sigma)
    }

    /// Ranks of the entries: the full permutation with the same relative order.
    pub fn pattern_of(tau: &[Symbol]) -> Vec<Symbol> {
        let mut order: Vec<usize> = (0..tau.len()).collect();
        order.sort_by_key(|&i| tau[i]);
        let mut pattern = vec![0; tau.len()];
        for (rank, &i) in order.iter().enumerate() {
            pattern[i] = rank as Symbol + 1;
        }
        pattern
    }

    pub fn same_order(a: &[Symbol], b: &[Symbol]) -> bool {
        a.len() == b.len()
            && (0..a.len()).all(|i| (0..a.len()).all(|j| (a[i] < a[j]) == (b[i] < b[j])))
    }

    /// Some subsequence of `tau` is order-isomorphic to `sigma`.
    pub fn is_pattern_in(sigma: &[Symbol], tau: &[Symbol]) -> bool {
        fn extend(sigma: &[Symbol], tau: &[Symbol], start: usize, chosen: &mut Vec<usize>) -> bool {
            let depth = chosen.len();
            if depth == sigma.len() {
                return true;
            }
            let remaining = sigma.len() - depth;
            for pos in start..=tau.len() - remaining {
                // the new entry must sit in the same relative position as in sigma
                let consistent = chosen.iter().enumerate().all(|(i, &p)| {
                    (sigma[i] < sigma[depth]) == (tau[p] < tau[pos])
                        && (sigma[i] == sigma[depth]) == (tau[p] == tau[pos])
                });
                if consistent {
                    chosen.push(pos);
                    if extend(sigma, tau, pos + 1, chosen) {
                        return true;
                    }
                    chosen.pop();
                }
            }
            false
        }
        sigma.len() <= tau.len() && extend(sigma, tau, 0, &mut Vec::with_capacity(sigma.len()))
    }

    pub fn is_substring_pattern_in(sigma: &[Symbol], tau: &[Symbol]) -> bool {
        sigma.is_empty() || tau.windows(sigma.len()).any(|w| same_order(sigma, w))
    }
}

/// Common view of strings and partial permutations as symbol sequences.
pub trait Sequence {
    fn symbols(&self) -> &[Symbol];
    /// Alphabet size `r` for strings, `k` for partial permutations.
    fn universe(&self) -> u32;

    fn len(&self) -> usize {
        self.symbols().len()
    }

    fn is_empty(&self) -> bool {
        self.symbols().is_empty()
    }
}

fn check_universe<W: Sequence>(a: &W, b: &W) -> Result<()> {
    if a.universe() == b.universe() {
        Ok(())
    } else {
        Err(Error::UniverseMismatch { left: a.universe(), right: b.universe() })
    }
}

/// `u = t·w` for some possibly empty `w`.
pub fn is_prefix<W: Sequence>(t: &W, u: &W) -> Result<bool> {
    check_universe(t, u)?;
    Ok(seq::is_prefix(t.symbols(), u.symbols()))
}

/// `u = t·w` with `w` nonempty.
pub fn is_proper_prefix<W: Sequence>(t: &W, u: &W) -> Result<bool> {
    Ok(is_prefix(t, u)? && t.len() < u.len())
}

pub fn is_subsequence<W: Sequence>(sigma: &W, tau: &W) -> Result<bool> {
    check_universe(sigma, tau)?;
    Ok(seq::is_subsequence(sigma.symbols(), tau.symbols()))
}

pub fn is_substring<W: Sequence>(sigma: &W, tau: &W) -> Result<bool> {
    check_universe(sigma, tau)?;
    Ok(seq::is_substring(sigma.symbols(), tau.symbols()))
}

pub fn pattern_of(tau: &PartialPermutation) -> Result<PartialPermutation> {
    tau.pattern()
}

pub fn is_pattern_in(sigma: &PartialPermutation, tau: &PartialPermutation) -> Result<bool> {
    sigma.require_full()?;
    Ok(seq::is_pattern_in(&sigma.entries, &tau.entries))
}

pub fn is_substring_pattern_in(sigma: &PartialPermutation, tau: &PartialPermutation) -> Result<bool> {
    sigma.require_full()?;
    Ok(seq::is_substring_pattern_in(&sigma.entries, &tau.entries))
}

/// A string over `{0, …, radix−1}`; the empty string is allowed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Str {
    symbols: Vec<Symbol>,
    radix: u32,
}

impl Str {
    pub fn new(symbols: Vec<Symbol>, radix: u32) -> Result<Self> {
        if radix == 0 {
            return Err(Error::InvalidParameter("alphabet size must be at least 1".into()));
        }
        if let Some(&symbol) = symbols.iter().find(|&&s| s >= radix) {
            return Err(Error::SymbolOutsideAlphabet { symbol, radix });
        }
        Ok(Str { symbols, radix })
    }

    pub fn empty(radix: u32) -> Self {
        Str { symbols: Vec::new(), radix }
    }

    pub fn radix(&self) -> u32 {
        self.radix
    }

    pub fn concat(&self, other: &Str) -> Result<Str> {
        check_universe(self, other)?;
        let mut symbols = self.symbols.clone();
        symbols.extend_from_slice(&other.symbols);
        Ok(Str { symbols, radix: self.radix })
    }

    pub fn parse(text: &str, radix: u32) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() || text == "ε" {
            return Str::new(Vec::new(), radix);
        }
        let (symbols, universe) = parse_symbols(text)?;
        if universe.is_some_and(|u| u != radix) {
            return Err(Error::UniverseMismatch { left: universe.unwrap(), right: radix });
        }
        Str::new(symbols, radix)
    }
}

impl Sequence for Str {
    fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    fn universe(&self) -> u32 {
        self.radix
    }
}

impl fmt::Display for Str {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.symbols.is_empty() {
            return f.write_str("ε");
        }
        write_symbols(f, &self.symbols)
    }
}

/// Injective sequence over `[universe]`, length between 1 and `universe`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialPermutation {
    entries: Vec<Symbol>,
    universe: u32,
}

impl PartialPermutation {
    pub fn new(entries: Vec<Symbol>, universe: u32) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyPartialPermutation);
        }
        let mut seen = vec![false; universe as usize + 1];
        for &symbol in &entries {
            if symbol == 0 || symbol > universe {
                return Err(Error::SymbolOutOfRange { symbol, universe });
            }
            if std::mem::replace(&mut seen[symbol as usize], true) {
                return Err(Error::RepeatedSymbol(symbol));
            }
        }
        Ok(PartialPermutation { entries, universe })
    }

    /// A full permutation of `[entries.len()]`.
    pub fn permutation(entries: Vec<Symbol>) -> Result<Self> {
        let universe = entries.len() as u32;
        Self::new(entries, universe)
    }

    pub fn entries(&self) -> &[Symbol] {
        &self.entries
    }

    pub fn is_full(&self) -> bool {
        self.entries.len() == self.universe as usize
    }

    /// True when the entries are exactly `{1, …, len}`, whatever the universe.
    pub fn is_permutation_of_length(&self) -> bool {
        self.entries.iter().all(|&e| e as usize <= self.entries.len())
    }

    fn require_full(&self) -> Result<()> {
        if self.is_full() {
            Ok(())
        } else {
            Err(Error::NotFullPermutation(self.to_string()))
        }
    }

    pub fn pattern(&self) -> Result<PartialPermutation> {
        if self.entries.is_empty() {
            return Err(Error::EmptyPartialPermutation);
        }
        Ok(PartialPermutation {
            universe: self.entries.len() as u32,
            entries: seq::pattern_of(&self.entries),
        })
    }

    /// Same entries viewed inside another universe.
    pub fn with_universe(&self, universe: u32) -> Result<Self> {
        Self::new(self.entries.clone(), universe)
    }

    pub fn concat(&self, other: &PartialPermutation) -> Result<PartialPermutation> {
        check_universe(self, other)?;
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Self::new(entries, self.universe).map_err(|_| Error::ConcatenationLeavesCodomain)
    }

    /// Parses `2513`, `(2,5,1,3)` or either with an `@k` suffix. Without a
    /// suffix the universe is `default_universe`, or the largest entry.
    pub fn parse(text: &str, default_universe: Option<u32>) -> Result<Self> {
        let (entries, universe) = parse_symbols(text.trim())?;
        let universe = match (universe, default_universe) {
            (Some(u), Some(d)) if u != d => return Err(Error::UniverseMismatch { left: u, right: d }),
            (Some(u), _) | (None, Some(u)) => u,
            (None, None) => entries.iter().copied().max().unwrap_or(0),
        };
        Self::new(entries, universe)
    }
}

impl Sequence for PartialPermutation {
    fn symbols(&self) -> &[Symbol] {
        &self.entries
    }

    fn universe(&self) -> u32 {
        self.universe
    }
}

impl fmt::Display for PartialPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_symbols(f, &self.entries)?;
        // `{:#}` spells out the universe
        if f.alternate() {
            write!(f, "@{}", self.universe)?;
        }
        Ok(())
    }
}

impl FromStr for PartialPermutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s, None)
    }
}

fn write_symbols(f: &mut fmt::Formatter<'_>, symbols: &[Symbol]) -> fmt::Result {
    if symbols.iter().all(|&s| s <= 9) {
        for s in symbols {
            write!(f, "{s}")?;
        }
        Ok(())
    } else {
        let parts: Vec<String> = symbols.iter().map(|s| s.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

fn parse_symbols(text: &str) -> Result<(Vec<Symbol>, Option<u32>)> {
    let bad = || Error::Parse(text.to_string());
    let (body, universe) = match text.split_once('@') {
        Some((body, u)) => (body.trim(), Some(u.trim().parse::<u32>().map_err(|_| bad())?)),
        None => (text, None),
    };
    let symbols = if let Some(inner) = body.strip_prefix('(') {
        let inner = inner.strip_suffix(')').ok_or_else(bad)?;
        if inner.trim().is_empty() {
            Vec::new()
        } else {
            inner
                .split(',')
                .map(|p| p.trim().parse::<Symbol>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()?
        }
    } else {
        body.chars()
            .map(|c| c.to_digit(10).ok_or_else(bad))
            .collect::<Result<Vec<_>>>()?
    };
    Ok((symbols, universe))
}

/// Which family of objects to enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnumerationKind {
    /// `T_k^l`: partial permutations of length `l` over `[k]`.
    Partial,
    /// `𝕊_l`: full permutations of length `l`.
    Full,
    /// `S^l`: strings of length `l` over `r` symbols.
    Strings,
}

/// All elements of the requested level in lexicographic order. `size` is `k`
/// for partial permutations, `r` for strings, and ignored for `Full` beyond
/// requiring `l ≤ size`.
pub fn enumerate(kind: EnumerationKind, size: u32, l: usize) -> Result<Vec<Element>> {
    Ok(match kind {
        EnumerationKind::Partial => {
            partial_permutations(size, l)?.into_iter().map(Element::Perm).collect()
        }
        EnumerationKind::Full => {
            if l > size as usize {
                return Err(Error::LengthExceedsUniverse { l, k: size as usize });
            }
            permutations(l)?.into_iter().map(Element::Perm).collect()
        }
        EnumerationKind::Strings => strings(size, l)?.into_iter().map(Element::Str).collect(),
    })
}

/// `T_k^l` in lexicographic order.
pub fn partial_permutations(k: u32, l: usize) -> Result<Vec<PartialPermutation>> {
    if l == 0 {
        return Err(Error::InvalidParameter("partial permutations have length at least 1".into()));
    }
    if l > k as usize {
        return Err(Error::LengthExceedsUniverse { l, k: k as usize });
    }
    fn fill(k: u32, l: usize, used: &mut [bool], current: &mut Vec<Symbol>, out: &mut Vec<PartialPermutation>) {
        if current.len() == l {
            out.push(PartialPermutation { entries: current.clone(), universe: k });
            return;
        }
        for s in 1..=k {
            if !used[s as usize] {
                used[s as usize] = true;
                current.push(s);
                fill(k, l, used, current, out);
                current.pop();
                used[s as usize] = false;
            }
        }
    }
    let mut out = Vec::new();
    fill(k, l, &mut vec![false; k as usize + 1], &mut Vec::with_capacity(l), &mut out);
    Ok(out)
}

/// `𝕊_l` in lexicographic order.
pub fn permutations(l: usize) -> Result<Vec<PartialPermutation>> {
    partial_permutations(l as u32, l)
}

/// `S^l` over `{0, …, r−1}` in lexicographic order.
pub fn strings(r: u32, l: usize) -> Result<Vec<Str>> {
    if r == 0 {
        return Err(Error::InvalidParameter("alphabet size must be at least 1".into()));
    }
    let mut out = Vec::new();
    let mut current = vec![0; l];
    loop {
        out.push(Str { symbols: current.clone(), radix: r });
        // odometer increment from the right
        let mut pos = l;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            current[pos] += 1;
            if current[pos] < r {
                break;
            }
            current[pos] = 0;
        }
    }
}
