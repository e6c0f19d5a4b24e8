//! Antichains on graded posets: LYM numbers, the local LYM inequality, the
//! top-level reduction, greedy prefix-code construction, the gcd
//! counterexample parameters, and exhaustive antichain search.

use std::collections::BTreeSet;
use std::fmt;

use fixedbitset::FixedBitSet;
use itertools::Itertools;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use serde_json::json;

use crate::codes::{self, Code, Codomain, ParameterSequence, Word};
use crate::element::Element;
use crate::error::{Error, Result};
use crate::perm::{Sequence, Str};
use crate::poset::{Family, GradedPoset};
use crate::rational::{self, ExactRational};

/// Default cap on visited partial assignments in [`antichain_exists`].
pub const DEFAULT_SEARCH_BUDGET: u64 = 10_000_000;

/// A set of `(level, index)` members, claimed pairwise incomparable.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Antichain {
    members: BTreeSet<(usize, usize)>,
}

impl Antichain {
    pub fn new(members: impl IntoIterator<Item = (usize, usize)>) -> Self {
        Antichain { members: members.into_iter().collect() }
    }

    /// Members given as `(level, element text)`.
    pub fn from_texts<S: AsRef<str>>(poset: &GradedPoset, members: &[(usize, S)]) -> Result<Self> {
        members
            .iter()
            .map(|(level, text)| Ok((*level, poset.find(*level, text.as_ref())?)))
            .collect::<Result<BTreeSet<_>>>()
            .map(|members| Antichain { members })
    }

    /// The codewords of `code` located in `poset`. Codewords of a `𝕋_k` code
    /// are mapped to the permutation levels of a pattern poset.
    pub fn from_code(poset: &GradedPoset, code: &Code) -> Result<Self> {
        let mut members = BTreeSet::new();
        for w in code.codewords() {
            let element = match (poset.family(), w) {
                (Family::Patterns { .. }, Word::Perm(p)) => Element::Perm(p.with_universe(p.len() as u32)?),
                _ => w.to_element(),
            };
            let (level, idx) = poset
                .locate(&element)
                .ok_or_else(|| Error::ForeignElement { level: w.len(), element: w.to_string() })?;
            members.insert((level, idx));
        }
        Ok(Antichain { members })
    }

    pub fn members(&self) -> &BTreeSet<(usize, usize)> {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Indices of the members on `level`.
    pub fn at_level(&self, level: usize) -> Vec<usize> {
        self.members.range((level, 0)..=(level, usize::MAX)).map(|m| m.1).collect()
    }

    pub fn top_level(&self) -> Option<usize> {
        self.members.last().map(|m| m.0)
    }

    pub fn counts(&self) -> LevelCounts {
        let mut counts = Vec::new();
        for &(level, _) in &self.members {
            if counts.len() <= level {
                counts.resize(level + 1, 0);
            }
            counts[level] += 1;
        }
        LevelCounts::new(counts)
    }

    /// `[[level, "element"], …]`.
    pub fn to_json(&self, poset: &GradedPoset) -> serde_json::Value {
        serde_json::Value::Array(
            self.members
                .iter()
                .map(|&(level, idx)| json!([level, poset.level(level).expect("member level")[idx].to_string()]))
                .collect(),
        )
    }

    fn check_members(&self, poset: &GradedPoset) -> Result<()> {
        for &(level, idx) in &self.members {
            if idx >= poset.level_size(level)? {
                return Err(Error::ForeignElement { level, element: format!("#{idx}") });
            }
        }
        Ok(())
    }
}

/// Prescribed number of elements per level.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct LevelCounts(Vec<usize>);

impl LevelCounts {
    pub fn new(mut counts: Vec<usize>) -> Self {
        while counts.last() == Some(&0) {
            counts.pop();
        }
        LevelCounts(counts)
    }

    /// Places `value` at each listed level.
    pub fn from_pairs(pairs: &[(usize, usize)]) -> Self {
        let mut counts = Vec::new();
        for &(level, value) in pairs {
            if counts.len() <= level {
                counts.resize(level + 1, 0);
            }
            counts[level] = value;
        }
        LevelCounts::new(counts)
    }

    /// Codeword-length counts moved onto the levels of `family`.
    pub fn from_params(family: Family, params: &ParameterSequence) -> Result<Self> {
        let mut pairs = Vec::new();
        for len in params.support() {
            let level = family
                .level_for_length(len)
                .ok_or_else(|| Error::InvalidParameter(format!("no level holds length {len} in {family}")))?;
            pairs.push((level, params.get(len) as usize));
        }
        Ok(LevelCounts::from_pairs(&pairs))
    }

    pub fn get(&self, level: usize) -> usize {
        self.0.get(level).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> &[usize] {
        &self.0
    }

    pub fn support(&self) -> impl DoubleEndedIterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &a)| a > 0).map(|(i, _)| i)
    }

    fn check_bound(&self, poset: &GradedPoset) -> Result<()> {
        for level in self.support() {
            let size = poset.level_size(level)?;
            if self.get(level) > size {
                return Err(Error::InvalidParameter(format!(
                    "count {} exceeds the {size} elements of level {level}",
                    self.get(level)
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Display for LevelCounts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.support().map(|l| format!("a_{l}={}", self.get(l))).collect();
        if parts.is_empty() {
            f.write_str("(all zero)")
        } else {
            f.write_str(&parts.join(", "))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AntichainVerdict {
    Antichain,
    /// `lower < upper`, both members.
    Comparable { lower: (usize, usize), upper: (usize, usize) },
}

impl AntichainVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, AntichainVerdict::Antichain)
    }
}

pub fn is_antichain(poset: &GradedPoset, antichain: &Antichain) -> Result<AntichainVerdict> {
    antichain.check_members(poset)?;
    for &upper in antichain.members() {
        let below = poset.strict_down_set(upper.0, upper.1);
        for &lower in antichain.members().range(..(upper.0, 0)) {
            if below.contains(poset.global_id(lower.0, lower.1)) {
                return Ok(AntichainVerdict::Comparable { lower, upper });
            }
        }
    }
    Ok(AntichainVerdict::Antichain)
}

/// `Σ_i a_i / #P^(i)`.
pub fn lym_sum(poset: &GradedPoset, counts: &LevelCounts) -> Result<ExactRational> {
    let mut sum = rational::zero();
    for level in counts.support() {
        sum += ExactRational::new(BigInt::from(counts.get(level)), BigInt::from(poset.level_size(level)?));
    }
    Ok(sum)
}

/// `L_A = Σ_i #A^(i) / #P^(i)`.
pub fn lym_number(poset: &GradedPoset, antichain: &Antichain) -> Result<ExactRational> {
    antichain.check_members(poset)?;
    lym_sum(poset, &antichain.counts())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalLym {
    /// `#δ⁻(A) / #P^(k−1)`
    pub lhs: ExactRational,
    /// `#A / #P^(k)`
    pub rhs: ExactRational,
    pub holds: bool,
}

/// Shadow density against set density for `members ⊆ P^(level)`.
pub fn local_lym_check(poset: &GradedPoset, level: usize, members: &[usize]) -> Result<LocalLym> {
    if members.is_empty() {
        return Err(Error::Precondition("local LYM needs a nonempty set".into()));
    }
    if level == poset.first_level() {
        return Err(Error::NoSuchLevel(level.wrapping_sub(1)));
    }
    if !poset.pair_regularity(level - 1)?.biregular {
        return Err(Error::NotBiregular { lower: level - 1, upper: level });
    }
    let set: BTreeSet<usize> = members.iter().copied().collect();
    let shadow = poset.lower_shadow(level, &set.iter().copied().collect::<Vec<_>>())?;
    let lhs = ExactRational::new(BigInt::from(shadow.len()), BigInt::from(poset.level_size(level - 1)?));
    let rhs = ExactRational::new(BigInt::from(set.len()), BigInt::from(poset.level_size(level)?));
    let holds = lhs >= rhs;
    Ok(LocalLym { lhs, rhs, holds })
}

/// Replaces the top level of `antichain` by its lower shadow. The result is an
/// antichain with LYM number at least that of the input.
pub fn reduce_top_level(poset: &GradedPoset, antichain: &Antichain) -> Result<Antichain> {
    let top = antichain.top_level().ok_or_else(|| Error::Precondition("antichain is empty".into()))?;
    if top == poset.first_level() {
        return Err(Error::Precondition(format!("top level {top} is the bottom of the poset")));
    }
    if let AntichainVerdict::Comparable { lower, upper } = is_antichain(poset, antichain)? {
        return Err(Error::Precondition(format!("not an antichain: {lower:?} < {upper:?}")));
    }
    let shadow = poset.lower_shadow(top, &antichain.at_level(top))?;
    let reduced = Antichain::new(
        antichain
            .members()
            .iter()
            .copied()
            .filter(|m| m.0 < top)
            .chain(shadow.into_iter().map(|i| (top - 1, i))),
    );
    if !is_antichain(poset, &reduced)?.holds() {
        return Err(Error::Invariant("reduced set is not an antichain".into()));
    }
    if lym_number(poset, &reduced)? < lym_number(poset, antichain)? {
        return Err(Error::Invariant("reduction decreased the LYM number".into()));
    }
    Ok(reduced)
}

/// Random antichain: each level keeps an element with probability
/// `1/(2·depth)`, then comparable members are dropped greedily from the top.
pub fn sample_antichain<R: Rng + ?Sized>(poset: &GradedPoset, rng: &mut R) -> Antichain {
    let depth = poset.level_labels().count();
    let density = 1.0 / (2.0 * depth as f64);
    let mut candidates = Vec::new();
    for level in poset.level_labels() {
        for idx in 0..poset.level_size(level).expect("level exists") {
            if rng.gen_bool(density) {
                candidates.push((level, idx));
            }
        }
    }
    let mut kept: Vec<(usize, usize)> = Vec::new();
    let mut blocked = FixedBitSet::with_capacity(poset.total_size());
    for &(level, idx) in candidates.iter().rev() {
        if !blocked.contains(poset.global_id(level, idx)) {
            blocked.union_with(poset.strict_down_set(level, idx));
            kept.push((level, idx));
        }
    }
    Antichain::new(kept)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum McMillan {
    Code(Code),
    /// Level `level` had fewer free strings than requested.
    Infeasible { level: usize, requested: u64, available: BigUint, kraft: ExactRational },
}

/// Greedy prefix-free code: level by level, take the lexicographically
/// smallest strings that extend no chosen codeword.
pub fn mcmillan_construct(r: u32, params: &ParameterSequence) -> Result<McMillan> {
    let kraft = codes::kraft_number(params, r)?;
    let radix = BigUint::from(r);
    let mut words = Vec::new();
    // strings at the current level that extend a chosen codeword form an initial segment
    let mut blocked = BigUint::zero();
    let mut capacity = BigUint::from(1u8);
    for (level, &requested) in params.counts().iter().enumerate() {
        if level > 0 {
            blocked *= &radix;
            capacity *= &radix;
        }
        let available = &capacity - &blocked;
        if BigUint::from(requested) > available {
            return Ok(McMillan::Infeasible { level, requested, available, kraft });
        }
        for offset in 0..requested {
            let value = &blocked + offset;
            words.push(Word::Str(Str::new(digits(value, r, level), r)?));
        }
        blocked += requested;
    }
    Ok(McMillan::Code(Code::new(Codomain::String { r }, words)?))
}

/// `value` as exactly `len` base-`r` digits, most significant first.
fn digits(mut value: BigUint, r: u32, len: usize) -> Vec<u32> {
    let mut out = vec![0; len];
    if r == 1 {
        return out;
    }
    let radix = BigUint::from(r);
    for slot in out.iter_mut().rev() {
        let (q, rem) = value.div_rem(&radix);
        *slot = rem.to_u32().expect("digit fits");
        value = q;
    }
    out
}

/// Why the gcd construction does not apply.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rejection {
    NotBiregular,
    UpDegreeNotAboveOne(u64),
    DownDegreeNotAboveOne(u64),
    NotWeaklyConnected,
    GcdIsOne,
    WrongFamily,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rejection::NotBiregular => f.write_str("levels are not biregular"),
            Rejection::UpDegreeNotAboveOne(u) => write!(f, "up-degree not > 1 (u = {u})"),
            Rejection::DownDegreeNotAboveOne(d) => write!(f, "down-degree not > 1 (d = {d})"),
            Rejection::NotWeaklyConnected => f.write_str("level pair not weakly connected"),
            Rejection::GcdIsOne => f.write_str("gcd of level sizes is 1"),
            Rejection::WrongFamily => f.write_str("not a pattern poset"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CounterexampleParams {
    pub lower_level: usize,
    pub upper_level: usize,
    pub lower_size: usize,
    pub upper_size: usize,
    pub gcd: usize,
    /// Degrees, when the two levels are consecutive.
    pub degrees: Option<(u64, u64)>,
    pub counts: LevelCounts,
    /// Always exactly 1.
    pub lym_sum: ExactRational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Counterexample {
    Params(CounterexampleParams),
    Rejected(Rejection),
}

/// `a_lower = (g−1)/g·#P^(lower)`, `a_upper = #P^(upper)/g` with `g` the gcd
/// of the two level sizes; rejected when `g = 1`. Degree hypotheses are not checked.
pub fn gcd_params(poset: &GradedPoset, lower: usize, upper: usize) -> Result<Counterexample> {
    let lower_size = poset.level_size(lower)?;
    let upper_size = poset.level_size(upper)?;
    if lower >= upper {
        return Err(Error::InvalidParameter(format!("level {lower} is not below level {upper}")));
    }
    let g = lower_size.gcd(&upper_size);
    if g <= 1 {
        return Ok(Counterexample::Rejected(Rejection::GcdIsOne));
    }
    let counts = LevelCounts::from_pairs(&[(lower, (g - 1) * (lower_size / g)), (upper, upper_size / g)]);
    let lym_sum = lym_sum(poset, &counts)?;
    Ok(Counterexample::Params(CounterexampleParams {
        lower_level: lower,
        upper_level: upper,
        lower_size,
        upper_size,
        gcd: g,
        degrees: None,
        counts,
        lym_sum,
    }))
}

/// Checks every hypothesis of the gcd counterexample on levels `level` and
/// `level + 1` and, if they hold, returns its parameters.
pub fn counterexample_params(poset: &GradedPoset, level: usize) -> Result<Counterexample> {
    let pair = poset.pair_regularity(level)?;
    let (Some(u), Some(d)) = (pair.up_degree(), pair.down_degree()) else {
        return Ok(Counterexample::Rejected(Rejection::NotBiregular));
    };
    if u <= 1 {
        return Ok(Counterexample::Rejected(Rejection::UpDegreeNotAboveOne(u)));
    }
    if d <= 1 {
        return Ok(Counterexample::Rejected(Rejection::DownDegreeNotAboveOne(d)));
    }
    if !poset.is_weakly_connected_pair(level)? {
        return Ok(Counterexample::Rejected(Rejection::NotWeaklyConnected));
    }
    Ok(match gcd_params(poset, level, level + 1)? {
        Counterexample::Params(p) => Counterexample::Params(CounterexampleParams { degrees: Some((u, d)), ..p }),
        rejected => rejected,
    })
}

/// The gcd parameters on permutation levels `𝕊_l` and `𝕊_{l+1}` of a pattern poset.
pub fn pattern_counterexample_params(poset: &GradedPoset, l: usize) -> Result<Counterexample> {
    let family = poset.family();
    let Family::Patterns { .. } = family else {
        return Ok(Counterexample::Rejected(Rejection::WrongFamily));
    };
    let lower = family.level_for_length(l).ok_or(Error::NoSuchLevel(0))?;
    let upper = family.level_for_length(l + 1).ok_or(Error::NoSuchLevel(0))?;
    gcd_params(poset, lower, upper)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    /// The lexicographically least antichain with the requested counts, if any.
    pub antichain: Option<Antichain>,
    /// Partial assignments visited.
    pub search_nodes: u64,
}

impl SearchResult {
    pub fn exists(&self) -> bool {
        self.antichain.is_some()
    }

    /// `{"exists": true, "antichain": [...]}` or `{"exists": false, "search_nodes": N}`.
    pub fn to_json(&self, poset: &GradedPoset) -> serde_json::Value {
        match &self.antichain {
            Some(a) => json!({"exists": true, "antichain": a.to_json(poset)}),
            None => json!({"exists": false, "search_nodes": self.search_nodes}),
        }
    }
}

/// Exhaustive search for an antichain with `counts[i]` elements on each level
/// `i`. Levels are filled from the top down; elements below an earlier
/// choice are unavailable. The lowest populated level needs no branching:
/// any choice of free elements there completes the antichain.
pub fn antichain_exists(poset: &GradedPoset, counts: &LevelCounts, budget: u64) -> Result<SearchResult> {
    counts.check_bound(poset)?;
    let levels: Vec<usize> = counts.support().rev().collect();
    let mut nodes = 0u64;
    let mut chosen = Vec::new();
    let blocked = FixedBitSet::with_capacity(poset.total_size());
    let found = search(poset, counts, &levels, blocked, &mut chosen, &mut nodes, budget)?;
    Ok(SearchResult { antichain: found.then(|| Antichain::new(chosen)), search_nodes: nodes })
}

fn search(
    poset: &GradedPoset,
    counts: &LevelCounts,
    levels: &[usize],
    blocked: FixedBitSet,
    chosen: &mut Vec<(usize, usize)>,
    nodes: &mut u64,
    budget: u64,
) -> Result<bool> {
    let Some((&level, rest)) = levels.split_first() else {
        return Ok(true);
    };
    let want = counts.get(level);
    let free: Vec<usize> = (0..poset.level_size(level)?)
        .filter(|&i| !blocked.contains(poset.global_id(level, i)))
        .collect();
    if free.len() < want {
        return Ok(false);
    }
    if rest.is_empty() {
        chosen.extend(free[..want].iter().map(|&i| (level, i)));
        return Ok(true);
    }
    for pick in free.into_iter().combinations(want) {
        *nodes += 1;
        if *nodes > budget {
            return Err(Error::BudgetExceeded { budget });
        }
        let mut next = blocked.clone();
        for &i in &pick {
            next.union_with(poset.strict_down_set(level, i));
        }
        let mark = chosen.len();
        chosen.extend(pick.iter().map(|&i| (level, i)));
        if search(poset, counts, rest, next, chosen, nodes, budget)? {
            return Ok(true);
        }
        chosen.truncate(mark);
    }
    Ok(false)
}
