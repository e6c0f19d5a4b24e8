use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::Args;
use poset_kraft::poset::PosetJson;
use poset_kraft::{Family, GradedPoset, Relation};

/// Which graded poset to build.
#[derive(Debug, Args)]
pub struct PosetArgs {
    /// Subsets of [n] under inclusion.
    #[arg(long, group = "family")]
    pub subsets: bool,
    /// Strings over r symbols, levels 0..=max-level.
    #[arg(long, visible_alias = "str", group = "family")]
    pub strings: bool,
    /// Partial permutations T_k.
    #[arg(long, group = "family")]
    pub perms: bool,
    /// Permutation patterns, with the intermediate partial-permutation levels.
    #[arg(long, group = "family")]
    pub patterns: bool,
    /// A poset in the JSON format written by `hasse --json`.
    #[arg(long, value_name = "FILE", group = "family")]
    pub poset: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub r: Option<u32>,
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long)]
    pub relation: Option<Relation>,
    #[arg(long)]
    pub max_level: Option<usize>,
}

impl PosetArgs {
    pub fn family(&self) -> anyhow::Result<Option<Family>> {
        let need = |v: Option<u32>, flag: &str| v.with_context(|| format!("--{flag} is required"));
        let relation = || self.relation.context("--relation is required");
        Ok(Some(if self.subsets {
            Family::Subsets { n: need(self.n, "n")? }
        } else if self.strings {
            let max_level = self.max_level.context("--max-level is required")?;
            Family::Strings { r: need(self.r, "r")?, relation: relation()?, max_level }
        } else if self.perms {
            Family::PartialPerms { k: need(self.k, "k")?, relation: relation()? }
        } else if self.patterns {
            Family::Patterns { k: need(self.k, "k")?, relation: relation()? }
        } else if self.poset.is_some() {
            return Ok(None);
        } else {
            bail!("choose one of --subsets, --strings, --perms, --patterns or --poset");
        }))
    }

    pub fn build(&self) -> anyhow::Result<GradedPoset> {
        match (self.family()?, &self.poset) {
            (Some(family), _) => Ok(GradedPoset::build(family)?),
            (None, Some(path)) => {
                let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                let json: PosetJson = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
                Ok(GradedPoset::from_json(&json)?)
            }
            (None, None) => unreachable!("family() rejects a missing selector"),
        }
    }
}
