//! Finite graded posets stored as explicit levels plus the cover multigraph
//! between consecutive levels, and the families built from strings,
//! partial permutations, permutation patterns and subsets.
//!
//! Levels are addressed by their label. String and subset posets start at
//! level 0 (ε, ∅); partial-permutation posets start at level 1 so that the
//! label equals the length. Pattern posets interleave `𝕊_l` with the
//! intermediate levels `T_{l+1}^l`, so `𝕊_l` sits at level `2(l−1)`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::OnceLock;

use fixedbitset::FixedBitSet;
use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::element::{Element, Subset};
use crate::error::{Error, Result};
use crate::perm::{self, PartialPermutation, Relation, Sequence, Str};

/// Default vertex cap for DOT export.
pub const DEFAULT_DOT_CAP: usize = 5000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Subsets of `[n]` under inclusion.
    Subsets { n: u32 },
    /// Strings over `r` symbols up to length `max_level`.
    Strings { r: u32, relation: Relation, max_level: usize },
    /// `T_k` under one of prefix, subsequence, substring.
    PartialPerms { k: u32, relation: Relation },
    /// `𝕋_k` under pattern or substring-pattern containment, with intermediate levels.
    Patterns { k: u32, relation: Relation },
    Custom,
}

impl Family {
    /// Level holding elements of length `len`, where that makes sense.
    pub fn level_for_length(&self, len: usize) -> Option<usize> {
        match *self {
            Family::Subsets { .. } | Family::Strings { .. } | Family::PartialPerms { .. } => Some(len),
            Family::Patterns { .. } if len >= 1 => Some(2 * (len - 1)),
            _ => None,
        }
    }

    /// Inverse of [`Family::level_for_length`] for the levels that hold codewords.
    pub fn length_of_level(&self, level: usize) -> Option<usize> {
        match *self {
            Family::Patterns { .. } if level.is_multiple_of(2) => Some(level / 2 + 1),
            Family::Patterns { .. } => None,
            Family::Custom => None,
            _ => Some(level),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Subsets { n } => write!(f, "subsets(n={n})"),
            Family::Strings { r, relation, max_level } => {
                write!(f, "strings(r={r}, {relation}, max_level={max_level})")
            }
            Family::PartialPerms { k, relation } => write!(f, "partial_perms(k={k}, {relation})"),
            Family::Patterns { k, relation } => write!(f, "patterns(k={k}, {relation})"),
            Family::Custom => f.write_str("custom"),
        }
    }
}

/// A cover edge between level `i` (`lower` index) and level `i+1` (`upper` index).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct CoverEdge {
    pub lower: usize,
    pub upper: usize,
    pub multiplicity: u32,
}

#[derive(Debug)]
pub struct GradedPoset {
    family: Family,
    first_level: usize,
    levels: Vec<Vec<Element>>,
    covers: Vec<Vec<CoverEdge>>,
    down: Vec<Vec<Vec<(usize, u32)>>>,
    up: Vec<Vec<Vec<(usize, u32)>>>,
    index: Vec<HashMap<Element, usize>>,
    offsets: Vec<usize>,
    below: OnceLock<Vec<FixedBitSet>>,
}

impl GradedPoset {
    /// Assembles a poset from explicit levels and per-pair cover edges;
    /// `covers[j]` joins level `first_level + j` to the next one.
    pub fn from_parts(
        family: Family,
        first_level: usize,
        levels: Vec<Vec<Element>>,
        covers: Vec<Vec<CoverEdge>>,
    ) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::MalformedPoset("no levels".into()));
        }
        if covers.len() + 1 != levels.len() {
            return Err(Error::MalformedPoset(format!(
                "{} levels need {} cover lists, got {}",
                levels.len(),
                levels.len() - 1,
                covers.len()
            )));
        }
        let mut index = Vec::with_capacity(levels.len());
        for (j, level) in levels.iter().enumerate() {
            if level.is_empty() {
                return Err(Error::MalformedPoset(format!("level {} is empty", first_level + j)));
            }
            let map: HashMap<Element, usize> = level.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
            if map.len() != level.len() {
                return Err(Error::MalformedPoset(format!("level {} has duplicates", first_level + j)));
            }
            index.push(map);
        }
        let mut down: Vec<Vec<Vec<(usize, u32)>>> = levels.iter().map(|l| vec![Vec::new(); l.len()]).collect();
        let mut up: Vec<Vec<Vec<(usize, u32)>>> = down.clone();
        let mut covers = covers;
        for (j, edges) in covers.iter_mut().enumerate() {
            edges.sort();
            for w in edges.windows(2) {
                if (w[0].lower, w[0].upper) == (w[1].lower, w[1].upper) {
                    return Err(Error::MalformedPoset("repeated edge; use multiplicity".into()));
                }
            }
            for e in edges.iter() {
                if e.lower >= levels[j].len() || e.upper >= levels[j + 1].len() {
                    return Err(Error::MalformedPoset(format!("edge {e:?} out of range")));
                }
                if e.multiplicity == 0 {
                    return Err(Error::MalformedPoset("edge multiplicity must be at least 1".into()));
                }
                up[j][e.lower].push((e.upper, e.multiplicity));
                down[j + 1][e.upper].push((e.lower, e.multiplicity));
            }
        }
        let mut offsets = Vec::with_capacity(levels.len() + 1);
        let mut total = 0;
        for level in &levels {
            offsets.push(total);
            total += level.len();
        }
        offsets.push(total);
        Ok(GradedPoset { family, first_level, levels, covers, down, up, index, offsets, below: OnceLock::new() })
    }

    /// Builds a poset whose covers are given by one-step deletions: for each
    /// element above the first level, `deletions` lists the elements one level
    /// down it reduces to, repeated once per way of getting there.
    fn from_deletions<F>(family: Family, first_level: usize, levels: Vec<Vec<Element>>, deletions: F) -> Result<Self>
    where
        F: Fn(usize, &Element) -> Vec<Element>,
    {
        let mut covers = Vec::with_capacity(levels.len().saturating_sub(1));
        for j in 1..levels.len() {
            let lower_index: HashMap<&Element, usize> = levels[j - 1].iter().enumerate().map(|(i, e)| (e, i)).collect();
            let mut counts: BTreeMap<(usize, usize), u32> = BTreeMap::new();
            for (upper, element) in levels[j].iter().enumerate() {
                for lower in deletions(j, element) {
                    let &i = lower_index
                        .get(&lower)
                        .ok_or_else(|| Error::Invariant(format!("{lower} missing below {element}")))?;
                    *counts.entry((i, upper)).or_default() += 1;
                }
            }
            covers.push(
                counts
                    .into_iter()
                    .map(|((lower, upper), multiplicity)| CoverEdge { lower, upper, multiplicity })
                    .collect(),
            );
        }
        Self::from_parts(family, first_level, levels, covers)
    }

    pub fn build(family: Family) -> Result<Self> {
        match family {
            Family::Subsets { n } => build_subset_poset(n),
            Family::Strings { r, relation, max_level } => build_string_poset(r, relation, max_level),
            Family::PartialPerms { k, relation } => build_partial_perm_poset(k, relation),
            Family::Patterns { k, relation } => build_pattern_poset(k, relation),
            Family::Custom => Err(Error::InvalidParameter("custom posets are loaded, not built".into())),
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn first_level(&self) -> usize {
        self.first_level
    }

    pub fn last_level(&self) -> usize {
        self.first_level + self.levels.len() - 1
    }

    pub fn level_labels(&self) -> std::ops::RangeInclusive<usize> {
        self.first_level..=self.last_level()
    }

    pub fn has_level(&self, level: usize) -> bool {
        self.level_labels().contains(&level)
    }

    fn slot(&self, level: usize) -> Result<usize> {
        if self.has_level(level) {
            Ok(level - self.first_level)
        } else {
            Err(Error::NoSuchLevel(level))
        }
    }

    pub fn level(&self, level: usize) -> Result<&[Element]> {
        Ok(&self.levels[self.slot(level)?])
    }

    pub fn level_size(&self, level: usize) -> Result<usize> {
        Ok(self.level(level)?.len())
    }

    pub fn total_size(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    pub fn edge_count(&self) -> usize {
        self.covers.iter().map(Vec::len).sum()
    }

    /// Cover edges between `level` and `level + 1`.
    pub fn covers_above(&self, level: usize) -> Result<&[CoverEdge]> {
        let slot = self.slot(level)?;
        self.covers.get(slot).map(Vec::as_slice).ok_or(Error::NoSuchLevel(level + 1))
    }

    /// Elements covered by `level[idx]`, with multiplicities.
    pub fn lower_covers(&self, level: usize, idx: usize) -> Result<&[(usize, u32)]> {
        Ok(&self.down[self.slot(level)?][idx])
    }

    /// Elements covering `level[idx]`, with multiplicities.
    pub fn upper_covers(&self, level: usize, idx: usize) -> Result<&[(usize, u32)]> {
        Ok(&self.up[self.slot(level)?][idx])
    }

    pub fn position(&self, level: usize, element: &Element) -> Option<usize> {
        let slot = self.slot(level).ok()?;
        self.index[slot].get(element).copied()
    }

    /// Level and index of `element`, searching every level.
    pub fn locate(&self, element: &Element) -> Option<(usize, usize)> {
        self.index
            .iter()
            .enumerate()
            .find_map(|(slot, map)| map.get(element).map(|&i| (slot + self.first_level, i)))
    }

    /// Index of the element written `text` on `level`, parsed like that level's elements.
    pub fn find(&self, level: usize, text: &str) -> Result<usize> {
        let elements = self.level(level)?;
        let element = elements[0].parse_like(text)?;
        self.position(level, &element)
            .ok_or_else(|| Error::ForeignElement { level, element: text.to_string() })
    }

    pub fn global_id(&self, level: usize, idx: usize) -> usize {
        self.offsets[level - self.first_level] + idx
    }

    /// Strict down-sets as bitsets over global ids, computed once.
    fn below_sets(&self) -> &[FixedBitSet] {
        self.below.get_or_init(|| {
            let total = self.total_size();
            let mut below: Vec<FixedBitSet> = Vec::with_capacity(total);
            for (slot, level) in self.levels.iter().enumerate() {
                for idx in 0..level.len() {
                    let mut set = FixedBitSet::with_capacity(total);
                    if slot > 0 {
                        for &(lower, _) in &self.down[slot][idx] {
                            let id = self.offsets[slot - 1] + lower;
                            set.union_with(&below[id]);
                            set.insert(id);
                        }
                    }
                    below.push(set);
                }
            }
            below
        })
    }

    /// Global ids strictly below `level[idx]`.
    pub fn strict_down_set(&self, level: usize, idx: usize) -> &FixedBitSet {
        &self.below_sets()[self.global_id(level, idx)]
    }

    /// `a < b` in the poset (reachability through covers).
    pub fn is_strictly_below(&self, a: (usize, usize), b: (usize, usize)) -> bool {
        a.0 < b.0 && self.strict_down_set(b.0, b.1).contains(self.global_id(a.0, a.1))
    }

    /// Set of elements at `level − 1` covered by some member of `members ⊆ level`.
    pub fn lower_shadow(&self, level: usize, members: &[usize]) -> Result<BTreeSet<usize>> {
        let slot = self.slot(level)?;
        let mut shadow = BTreeSet::new();
        for &m in members {
            let covers = self.down[slot].get(m).ok_or_else(|| Error::ForeignElement {
                level,
                element: format!("#{m}"),
            })?;
            shadow.extend(covers.iter().map(|&(i, _)| i));
        }
        Ok(shadow)
    }

    /// Set of elements at `level + 1` covering some member.
    pub fn upper_shadow(&self, level: usize, members: &[usize]) -> Result<BTreeSet<usize>> {
        let slot = self.slot(level)?;
        let mut shadow = BTreeSet::new();
        for &m in members {
            let covers = self.up[slot].get(m).ok_or_else(|| Error::ForeignElement {
                level,
                element: format!("#{m}"),
            })?;
            shadow.extend(covers.iter().map(|&(i, _)| i));
        }
        Ok(shadow)
    }

    /// Lower shadow of `(level, index)` pairs, which must all share a level.
    pub fn lower_shadow_of(&self, members: &[(usize, usize)]) -> Result<(usize, BTreeSet<usize>)> {
        let level = single_level(members)?;
        let shadow = self.lower_shadow(level, &members.iter().map(|m| m.1).collect::<Vec<_>>())?;
        Ok((level.saturating_sub(1), shadow))
    }

    pub fn upper_shadow_of(&self, members: &[(usize, usize)]) -> Result<(usize, BTreeSet<usize>)> {
        let level = single_level(members)?;
        let shadow = self.upper_shadow(level, &members.iter().map(|m| m.1).collect::<Vec<_>>())?;
        Ok((level + 1, shadow))
    }

    /// Whether levels `level` and `level + 1` form one weakly connected component.
    pub fn is_weakly_connected_pair(&self, level: usize) -> Result<bool> {
        let edges = self.covers_above(level)?;
        let lower = self.level_size(level)?;
        let upper = self.level_size(level + 1)?;
        let mut uf = UnionFind::<usize>::new(lower + upper);
        for e in edges {
            uf.union(e.lower, lower + e.upper);
        }
        let root = uf.find(0);
        Ok((1..lower + upper).all(|v| uf.find(v) == root))
    }

    pub fn regularity_check(&self) -> RegularityReport {
        let pairs: Vec<PairRegularity> = self
            .level_labels()
            .take(self.levels.len() - 1)
            .map(|level| self.pair_regularity(level).expect("level exists"))
            .collect();
        let level_regular = pairs.iter().all(|p| p.biregular);
        RegularityReport { pairs, level_regular }
    }

    /// Degree audit of levels `level` and `level + 1`.
    pub fn pair_regularity(&self, level: usize) -> Result<PairRegularity> {
        let slot = self.slot(level)?;
        if slot + 1 >= self.levels.len() {
            return Err(Error::NoSuchLevel(level + 1));
        }
        let degree = |adj: &Vec<(usize, u32)>| adj.iter().map(|&(_, m)| u64::from(m)).sum::<u64>();
        let ups: Vec<u64> = self.up[slot].iter().map(degree).collect();
        let downs: Vec<u64> = self.down[slot + 1].iter().map(degree).collect();
        let range = |v: &[u64]| (*v.iter().min().unwrap(), *v.iter().max().unwrap());
        let up_range = range(&ups);
        let down_range = range(&downs);
        let edge_count: u64 = ups.iter().sum();
        Ok(PairRegularity {
            lower_level: level,
            upper_level: level + 1,
            lower_size: ups.len(),
            upper_size: downs.len(),
            up_range,
            down_range,
            edge_count,
            biregular: up_range.0 == up_range.1 && down_range.0 == down_range.1,
        })
    }

    /// Graphviz rendering of the Hasse diagram with one rank per level.
    pub fn to_dot(&self, cap: usize) -> Result<String> {
        use std::fmt::Write;
        let count = self.total_size();
        if count > cap {
            return Err(Error::TooLarge { count, cap });
        }
        let mut out = String::new();
        writeln!(out, "digraph hasse {{").unwrap();
        writeln!(out, "  label=\"{}\";", escape(&self.family.to_string())).unwrap();
        writeln!(out, "  rankdir=BT;").unwrap();
        writeln!(out, "  node [shape=plaintext];").unwrap();
        for (slot, level) in self.levels.iter().enumerate() {
            write!(out, "  {{ rank=same;").unwrap();
            for (idx, element) in level.iter().enumerate() {
                write!(out, " n{} [label=\"{}\"];", self.offsets[slot] + idx, escape(&element.to_string())).unwrap();
            }
            writeln!(out, " }}").unwrap();
        }
        for (slot, edges) in self.covers.iter().enumerate() {
            for e in edges {
                let (a, b) = (self.offsets[slot] + e.lower, self.offsets[slot + 1] + e.upper);
                if e.multiplicity > 1 {
                    writeln!(out, "  n{a} -> n{b} [label=\"{}\"];", e.multiplicity).unwrap();
                } else {
                    writeln!(out, "  n{a} -> n{b};").unwrap();
                }
            }
        }
        out.push_str("}\n");
        Ok(out)
    }

    /// Compact interchange form: element strings per level, edges as
    /// `[lower, upper, multiplicity]` over global ids (level-major order).
    pub fn to_json(&self) -> PosetJson {
        PosetJson {
            family: self.family.to_string(),
            first_level: self.first_level,
            levels: self.levels.iter().map(|l| l.iter().map(|e| e.to_string()).collect()).collect(),
            edges: self
                .covers
                .iter()
                .enumerate()
                .flat_map(|(slot, edges)| {
                    edges.iter().map(move |e| {
                        [self.offsets[slot] + e.lower, self.offsets[slot + 1] + e.upper, e.multiplicity as usize]
                    })
                })
                .collect(),
        }
    }

    /// Loads the interchange form; elements become opaque labels.
    pub fn from_json(json: &PosetJson) -> Result<Self> {
        let levels: Vec<Vec<Element>> =
            json.levels.iter().map(|l| l.iter().map(|s| Element::Label(s.clone())).collect()).collect();
        let mut offsets = vec![0];
        for l in &levels {
            offsets.push(offsets.last().unwrap() + l.len());
        }
        let locate = |id: usize| -> Result<(usize, usize)> {
            let slot = offsets.windows(2).position(|w| w[0] <= id && id < w[1]);
            slot.map(|s| (s, id - offsets[s])).ok_or_else(|| Error::MalformedPoset(format!("vertex {id} out of range")))
        };
        let mut covers = vec![Vec::new(); levels.len().saturating_sub(1)];
        for &[a, b, m] in &json.edges {
            let (la, ia) = locate(a)?;
            let (lb, ib) = locate(b)?;
            if lb != la + 1 {
                return Err(Error::MalformedPoset(format!("edge {a}->{b} skips a level")));
            }
            let multiplicity = u32::try_from(m).map_err(|_| Error::MalformedPoset("multiplicity too large".into()))?;
            covers[la].push(CoverEdge { lower: ia, upper: ib, multiplicity });
        }
        Self::from_parts(Family::Custom, json.first_level, levels, covers)
    }
}

fn single_level(members: &[(usize, usize)]) -> Result<usize> {
    let level = members.first().map(|m| m.0).ok_or_else(|| Error::Precondition("empty set has no level".into()))?;
    if members.iter().any(|m| m.0 != level) {
        return Err(Error::MixedLevels);
    }
    Ok(level)
}

fn escape(text: &str) -> String {
    text.replace('\\', "\\\\").replace('"', "\\\"")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetJson {
    #[serde(default)]
    pub family: String,
    #[serde(default)]
    pub first_level: usize,
    pub levels: Vec<Vec<String>>,
    pub edges: Vec<[usize; 3]>,
}

/// Degree audit of one consecutive level pair. Degrees count multiplicity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairRegularity {
    pub lower_level: usize,
    pub upper_level: usize,
    pub lower_size: usize,
    pub upper_size: usize,
    /// (min, max) number of covers above each lower element.
    pub up_range: (u64, u64),
    /// (min, max) number of covers below each upper element.
    pub down_range: (u64, u64),
    pub edge_count: u64,
    pub biregular: bool,
}

impl PairRegularity {
    pub fn up_degree(&self) -> Option<u64> {
        self.biregular.then_some(self.up_range.0)
    }

    pub fn down_degree(&self) -> Option<u64> {
        self.biregular.then_some(self.down_range.0)
    }

    /// `u·#P^(i) = d·#P^(i+1) = #edges`, meaningful for biregular pairs.
    pub fn edge_identity_holds(&self) -> bool {
        match (self.up_degree(), self.down_degree()) {
            (Some(u), Some(d)) => {
                u * self.lower_size as u64 == self.edge_count && d * self.upper_size as u64 == self.edge_count
            }
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RegularityReport {
    pub pairs: Vec<PairRegularity>,
    pub level_regular: bool,
}

impl fmt::Display for RegularityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.pairs {
            match (p.up_degree(), p.down_degree()) {
                (Some(u), Some(d)) => writeln!(
                    f,
                    "levels {}-{}: sizes {} {}, u={u}, d={d}, edges {} ({}·{} = {}·{})",
                    p.lower_level, p.upper_level, p.lower_size, p.upper_size, p.edge_count, u, p.lower_size, d, p.upper_size
                )?,
                _ => writeln!(
                    f,
                    "levels {}-{}: NOT biregular, up-degrees {}..{}, down-degrees {}..{}",
                    p.lower_level, p.upper_level, p.up_range.0, p.up_range.1, p.down_range.0, p.down_range.1
                )?,
            }
        }
        write!(f, "level-regular: {}", self.level_regular)
    }
}

fn require_relation(relation: Relation, allowed: &[Relation], context: &str) -> Result<()> {
    if allowed.contains(&relation) {
        Ok(())
    } else {
        Err(Error::UnsupportedRelation { relation, context: context.to_string() })
    }
}

const SEQUENCE_RELATIONS: [Relation; 3] = [Relation::Prefix, Relation::Subsequence, Relation::Substring];

/// Positions whose deletion is one cover step down under `relation`.
fn deletion_positions(relation: Relation, len: usize) -> Vec<usize> {
    match relation {
        Relation::Prefix => vec![len - 1],
        Relation::Subsequence | Relation::Pattern => (0..len).collect(),
        // a single symbol has one way to be extended from ε, not two
        Relation::Substring | Relation::SubstringPattern if len == 1 => vec![0],
        Relation::Substring | Relation::SubstringPattern => vec![0, len - 1],
    }
}

fn delete_at(symbols: &[u32], pos: usize) -> Vec<u32> {
    let mut out = symbols.to_vec();
    out.remove(pos);
    out
}

/// `S^0 ∪ … ∪ S^max_level` under prefix, subsequence or substring.
pub fn build_string_poset(r: u32, relation: Relation, max_level: usize) -> Result<GradedPoset> {
    require_relation(relation, &SEQUENCE_RELATIONS, "string posets")?;
    let levels = (0..=max_level)
        .map(|l| Ok(perm::strings(r, l)?.into_iter().map(Element::Str).collect()))
        .collect::<Result<Vec<_>>>()?;
    GradedPoset::from_deletions(Family::Strings { r, relation, max_level }, 0, levels, |_, e| {
        let Element::Str(s) = e else { unreachable!() };
        deletion_positions(relation, s.len())
            .into_iter()
            .map(|p| Element::Str(Str::new(delete_at(s.symbols(), p), r).expect("deletion stays in alphabet")))
            .collect()
    })
}

/// `T_k^1 ∪ … ∪ T_k^k` under prefix, subsequence or substring.
pub fn build_partial_perm_poset(k: u32, relation: Relation) -> Result<GradedPoset> {
    require_relation(relation, &SEQUENCE_RELATIONS, "partial-permutation posets")?;
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let levels = (1..=k as usize)
        .map(|l| Ok(perm::partial_permutations(k, l)?.into_iter().map(Element::Perm).collect()))
        .collect::<Result<Vec<_>>>()?;
    GradedPoset::from_deletions(Family::PartialPerms { k, relation }, 1, levels, |_, e| {
        let Element::Perm(p) = e else { unreachable!() };
        deletion_positions(relation, p.len())
            .into_iter()
            .map(|pos| Element::Perm(PartialPermutation::new(delete_at(p.entries(), pos), k).expect("deletion is injective")))
            .collect()
    })
}

/// `𝕊_1, T_2^1, 𝕊_2, T_3^2, …, 𝕊_k`: pattern containment split into a
/// deletion step (`𝕊_{l+1} → T_{l+1}^l`) and a pattern step (`T_{l+1}^l → 𝕊_l`).
pub fn build_pattern_poset(k: u32, relation: Relation) -> Result<GradedPoset> {
    require_relation(relation, &[Relation::Pattern, Relation::SubstringPattern], "pattern posets")?;
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let mut levels = Vec::with_capacity(2 * k as usize - 1);
    for l in 1..=k as usize {
        if l > 1 {
            // T_l^{l-1}: the one-deletion images of 𝕊_l
            levels.push(perm::partial_permutations(l as u32, l - 1)?.into_iter().map(Element::Perm).collect());
        }
        levels.push(perm::permutations(l)?.into_iter().map(Element::Perm).collect());
    }
    GradedPoset::from_deletions(Family::Patterns { k, relation }, 0, levels, |slot, e| {
        let Element::Perm(p) = e else { unreachable!() };
        if slot % 2 == 1 {
            vec![Element::Perm(p.pattern().expect("nonempty"))]
        } else {
            deletion_positions(relation, p.len())
                .into_iter()
                .map(|pos| {
                    Element::Perm(PartialPermutation::new(delete_at(p.entries(), pos), p.universe()).expect("injective"))
                })
                .collect()
        }
    })
}

/// Subsets of `[n]` by inclusion.
pub fn build_subset_poset(n: u32) -> Result<GradedPoset> {
    let mut levels: Vec<Vec<Element>> = vec![Vec::new(); n as usize + 1];
    for mask in 0u64..(1u64 << n) {
        let members: Vec<u32> = (0..n).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect();
        levels[members.len()].push(Element::Set(Subset::new(members, n)?));
    }
    for level in &mut levels {
        level.sort();
    }
    GradedPoset::from_deletions(Family::Subsets { n }, 0, levels, |_, e| {
        let Element::Set(s) = e else { unreachable!() };
        (0..s.len())
            .map(|i| Element::Set(Subset::new(delete_at(s.members(), i), n).expect("subset of a subset")))
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sizes(p: &GradedPoset) -> Vec<usize> {
        p.level_labels().map(|l| p.level_size(l).unwrap()).collect()
    }

    fn degrees(p: &GradedPoset) -> Vec<(u64, u64)> {
        p.regularity_check().pairs.iter().map(|x| (x.up_degree().unwrap(), x.down_degree().unwrap())).collect()
    }

    fn el(p: &GradedPoset, level: usize, text: &str) -> usize {
        p.find(level, text).unwrap()
    }

    #[test]
    fn string_prefix_poset() {
        let p = build_string_poset(2, Relation::Prefix, 3).unwrap();
        assert_eq!(sizes(&p), [1, 2, 4, 8]);
        assert_eq!(degrees(&p), [(2, 1); 3]);
        assert!(p.covers_above(0).unwrap().iter().all(|e| e.multiplicity == 1));
    }

    #[test]
    fn string_subsequence_multiplicity() {
        let p = build_string_poset(2, Relation::Subsequence, 2).unwrap();
        let one = el(&p, 1, "1");
        let eleven = el(&p, 2, "11");
        assert_eq!(p.lower_covers(2, eleven).unwrap(), &[(one, 2)]);
        // up-degree (l+1)·r, down-degree l
        assert_eq!(degrees(&p), [(2, 1), (4, 2)]);
    }

    #[test]
    fn string_substring_degrees() {
        let p = build_string_poset(3, Relation::Substring, 3).unwrap();
        assert_eq!(degrees(&p), [(3, 1), (6, 2), (6, 2)]);
    }

    #[test]
    fn single_level_string_poset() {
        let p = build_string_poset(3, Relation::Subsequence, 0).unwrap();
        assert_eq!(sizes(&p), [1]);
        assert_eq!(p.edge_count(), 0);
        assert!(p.regularity_check().level_regular);
    }

    #[test]
    fn partial_perm_posets() {
        let p = build_partial_perm_poset(3, Relation::Subsequence).unwrap();
        assert_eq!(sizes(&p), [3, 6, 6]);
        assert_eq!(degrees(&p), [(4, 2), (3, 3)]);
        assert!(p.regularity_check().pairs.iter().all(PairRegularity::edge_identity_holds));

        let p = build_partial_perm_poset(3, Relation::Prefix).unwrap();
        let covers = p.lower_covers(3, el(&p, 3, "312")).unwrap();
        assert_eq!(covers, &[(el(&p, 2, "31"), 1)]);
        assert_eq!(degrees(&p), [(2, 1), (1, 1)]);

        let p = build_partial_perm_poset(3, Relation::Substring).unwrap();
        assert_eq!(degrees(&p), [(4, 2), (2, 2)]);

        let p = build_partial_perm_poset(1, Relation::Substring).unwrap();
        assert_eq!(sizes(&p), [1]);
        assert_eq!(p.first_level(), 1);
    }

    #[test]
    fn pattern_poset_shape() {
        let p = build_pattern_poset(3, Relation::Pattern).unwrap();
        assert_eq!(sizes(&p), [1, 2, 2, 6, 6]);
        assert_eq!(degrees(&p), [(2, 1), (2, 2), (3, 1), (3, 3)]);
        let p = build_pattern_poset(3, Relation::SubstringPattern).unwrap();
        assert_eq!(degrees(&p), [(2, 1), (2, 2), (3, 1), (2, 2)]);
        let p = build_pattern_poset(1, Relation::Pattern).unwrap();
        assert_eq!(sizes(&p), [1]);
        assert!(build_pattern_poset(3, Relation::Prefix).is_err());
        assert!(build_string_poset(2, Relation::Pattern, 2).is_err());
    }

    #[test]
    fn subset_posets() {
        let p = build_subset_poset(2).unwrap();
        assert_eq!(p.total_size(), 4);
        assert_eq!(p.edge_count(), 4);
        let p = build_subset_poset(0).unwrap();
        assert_eq!(sizes(&p), [1]);
        let p = build_subset_poset(4).unwrap();
        assert_eq!(sizes(&p), [1, 4, 6, 4, 1]);
        let p = build_subset_poset(3).unwrap();
        let pair = p.pair_regularity(1).unwrap();
        assert_eq!((pair.up_degree(), pair.down_degree()), (Some(2), Some(2)));
        assert_eq!(pair.edge_count, 6);
    }

    #[test]
    fn irregular_poset_detected() {
        let levels = vec![
            vec![Element::Label("a".into()), Element::Label("b".into())],
            vec![Element::Label("c".into()), Element::Label("d".into())],
        ];
        let full = |skip: Option<usize>| {
            let mut edges = Vec::new();
            for lower in 0..2 {
                for upper in 0..2 {
                    if Some(lower * 2 + upper) != skip {
                        edges.push(CoverEdge { lower, upper, multiplicity: 1 });
                    }
                }
            }
            GradedPoset::from_parts(Family::Custom, 0, levels.clone(), vec![edges]).unwrap()
        };
        assert!(full(None).regularity_check().level_regular);
        let broken = full(Some(3)).regularity_check();
        assert!(!broken.level_regular);
        assert_eq!(broken.pairs[0].up_range, (1, 2));
    }

    #[test]
    fn shadows() {
        let p = build_subset_poset(2).unwrap();
        let top = el(&p, 2, "{1,2}");
        let shadow = p.lower_shadow(2, &[top]).unwrap();
        assert_eq!(shadow, [el(&p, 1, "{1}"), el(&p, 1, "{2}")].into_iter().collect());
        assert!(p.lower_shadow(0, &[0]).unwrap().is_empty());

        let s = build_string_poset(2, Relation::Subsequence, 2).unwrap();
        let shadow = s.lower_shadow(2, &[el(&s, 2, "00"), el(&s, 2, "01")]).unwrap();
        assert_eq!(shadow, [el(&s, 1, "0"), el(&s, 1, "1")].into_iter().collect());

        assert_eq!(p.lower_shadow_of(&[(1, 0), (2, 0)]), Err(Error::MixedLevels));
        let (level, up) = p.upper_shadow_of(&[(0, 0)]).unwrap();
        assert_eq!((level, up.len()), (1, 2));
    }

    #[test]
    fn weak_connectivity() {
        let s = build_string_poset(2, Relation::Subsequence, 2).unwrap();
        assert!(s.is_weakly_connected_pair(1).unwrap());
        let t = build_partial_perm_poset(3, Relation::Substring).unwrap();
        assert!(t.is_weakly_connected_pair(1).unwrap());
        // a prefix tree splits into r components above level 1
        let pre = build_string_poset(2, Relation::Prefix, 2).unwrap();
        assert!(!pre.is_weakly_connected_pair(1).unwrap());
        let levels = vec![
            vec![Element::Label("a".into()), Element::Label("b".into())],
            vec![Element::Label("c".into()), Element::Label("d".into())],
        ];
        let edges = vec![CoverEdge { lower: 0, upper: 0, multiplicity: 1 }, CoverEdge { lower: 1, upper: 1, multiplicity: 1 }];
        let two = GradedPoset::from_parts(Family::Custom, 0, levels, vec![edges]).unwrap();
        assert!(!two.is_weakly_connected_pair(0).unwrap());
    }

    #[test]
    fn dot_export() {
        let dot = build_subset_poset(2).unwrap().to_dot(DEFAULT_DOT_CAP).unwrap();
        assert_eq!(dot.matches(" -> ").count(), 4);
        assert_eq!(dot.matches("rank=same").count(), 3);
        assert!(dot.contains("label=\"∅\"") && dot.contains("label=\"{1,2}\""));

        let single = build_subset_poset(0).unwrap().to_dot(10).unwrap();
        assert!(!single.contains("->"));

        let s = build_string_poset(2, Relation::Subsequence, 2).unwrap();
        let dot = s.to_dot(DEFAULT_DOT_CAP).unwrap();
        let one = s.global_id(1, el(&s, 1, "1"));
        let eleven = s.global_id(2, el(&s, 2, "11"));
        assert!(dot.contains(&format!("n{one} -> n{eleven} [label=\"2\"];")));
        assert_eq!(s.to_dot(3), Err(Error::TooLarge { count: 7, cap: 3 }));
    }

    #[test]
    fn json_round_trip_keeps_structure() {
        let p = build_string_poset(2, Relation::Substring, 3).unwrap();
        let json = p.to_json();
        let text = serde_json::to_string(&json).unwrap();
        let back = GradedPoset::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back.to_json().levels, json.levels);
        assert_eq!(back.to_json().edges, json.edges);
        assert_eq!(back.regularity_check().pairs, p.regularity_check().pairs);
    }

    #[test]
    fn malformed_posets_rejected() {
        let levels = vec![vec![Element::Label("a".into())], vec![Element::Label("b".into())]];
        let bad = vec![vec![CoverEdge { lower: 0, upper: 1, multiplicity: 1 }]];
        assert!(GradedPoset::from_parts(Family::Custom, 0, levels.clone(), bad).is_err());
        let zero = vec![vec![CoverEdge { lower: 0, upper: 0, multiplicity: 0 }]];
        assert!(GradedPoset::from_parts(Family::Custom, 0, levels.clone(), zero).is_err());
        let dup = vec![vec![Element::Label("a".into()), Element::Label("a".into())]];
        assert!(GradedPoset::from_parts(Family::Custom, 0, dup, vec![]).is_err());
    }
}
