//! Poset elements: strings, partial permutations, subsets, or opaque labels
//! for hand-built posets.

use std::fmt;

use crate::error::{Error, Result};
use crate::perm::{PartialPermutation, Str};

/// A subset of `[n]`, members kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset {
    members: Vec<u32>,
    n: u32,
}

impl Subset {
    pub fn new(mut members: Vec<u32>, n: u32) -> Result<Self> {
        members.sort_unstable();
        if members.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidParameter("subset has a repeated member".into()));
        }
        if let Some(&symbol) = members.iter().find(|&&m| m == 0 || m > n) {
            return Err(Error::SymbolOutOfRange { symbol, universe: n });
        }
        Ok(Subset { members, n })
    }

    pub fn members(&self) -> &[u32] {
        &self.members
    }

    pub fn universe(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn parse(text: &str, n: u32) -> Result<Self> {
        let text = text.trim();
        if text == "∅" {
            return Subset::new(Vec::new(), n);
        }
        let inner = text
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .ok_or_else(|| Error::Parse(text.to_string()))?;
        let members = inner
            .split(',')
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .map(|p| p.parse::<u32>().map_err(|_| Error::Parse(text.to_string())))
            .collect::<Result<Vec<_>>>()?;
        Subset::new(members, n)
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.members.is_empty() {
            return f.write_str("∅");
        }
        let parts: Vec<String> = self.members.iter().map(|m| m.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Str(Str),
    Perm(PartialPermutation),
    Set(Subset),
    Label(String),
}

impl Element {
    /// Raw symbol sequence, when the element is a sequence.
    pub fn symbols(&self) -> Option<&[u32]> {
        use crate::perm::Sequence;
        match self {
            Element::Str(s) => Some(s.symbols()),
            Element::Perm(p) => Some(p.symbols()),
            _ => None,
        }
    }

    /// Parses `text` as an element of the same kind and universe as `self`.
    pub fn parse_like(&self, text: &str) -> Result<Element> {
        use crate::perm::Sequence;
        Ok(match self {
            Element::Str(s) => Element::Str(Str::parse(text, s.radix())?),
            Element::Perm(p) => Element::Perm(PartialPermutation::parse(text, Some(p.universe()))?),
            Element::Set(s) => Element::Set(Subset::parse(text, s.universe())?),
            Element::Label(_) => Element::Label(text.trim().to_string()),
        })
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Str(s) => s.fmt(f),
            Element::Perm(p) => p.fmt(f),
            Element::Set(s) => s.fmt(f),
            Element::Label(l) => f.write_str(l),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subset_syntax() {
        let s = Subset::parse("{2, 1}", 3).unwrap();
        assert_eq!(s.members(), &[1, 2]);
        assert_eq!(s.to_string(), "{1,2}");
        assert_eq!(Subset::parse("∅", 2).unwrap().to_string(), "∅");
        assert_eq!(Subset::parse("{}", 2).unwrap().len(), 0);
        assert!(Subset::parse("{4}", 3).is_err());
        assert!(Subset::parse("{1,1}", 3).is_err());
    }

    #[test]
    fn parse_like_uses_template_universe() {
        let template = Element::Perm(PartialPermutation::parse("13", Some(3)).unwrap());
        let parsed = template.parse_like("12").unwrap();
        assert_eq!(parsed, Element::Perm(PartialPermutation::new(vec![1, 2], 3).unwrap()));
        assert!(template.parse_like("12@2").is_err());
    }
}
