//! `poset-kraft`: batch verification of Kraft-type and LYM-type statements
//! on graded posets of strings, subsets and partial permutations.

mod select;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use poset_kraft::codes::{self, CodeJson, Freeness};
use poset_kraft::lym::{self, AntichainVerdict, Counterexample, McMillan, DEFAULT_SEARCH_BUDGET};
use poset_kraft::perm::{self, EnumerationKind};
use poset_kraft::poset::DEFAULT_DOT_CAP;
use poset_kraft::rational::{decimal, fraction, one};
use poset_kraft::{Antichain, Code, Codomain, Error, ExactRational, Family, GradedPoset, LevelCounts, ParameterSequence, Relation};
use serde_json::{json, Value};

use select::PosetArgs;

#[derive(Debug, Parser)]
#[command(name = "poset-kraft", version, about)]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    /// Print a shortest round-trip decimal next to each fraction.
    #[arg(long, global = true)]
    decimal: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PermKind {
    /// Partial permutations over [k].
    #[value(name = "T")]
    Partial,
    /// Full permutations of length up to k.
    #[value(name = "S")]
    Full,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the elements of a family in lexicographic order.
    Enumerate {
        #[arg(long, group = "kind")]
        perm: Option<PermKind>,
        #[arg(long = "str", visible_alias = "strings", group = "kind")]
        strings: bool,
        #[arg(long, group = "kind")]
        subsets: bool,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        r: Option<u32>,
        #[arg(long)]
        n: Option<u32>,
        /// Only this length. Permutations default to every length 1..=k.
        #[arg(long)]
        l: Option<usize>,
    },
    /// Is no codeword related to another? Exit 1 with a witness if not.
    CheckFree {
        code: PathBuf,
        #[arg(long)]
        relation: Relation,
    },
    /// Kraft-type constants of a code file or a parameter sequence.
    Constants {
        code: Option<PathBuf>,
        #[command(flatten)]
        params: ParamsArgs,
    },
    /// The Kraft sum; exit 1 when it exceeds 1.
    Kraft {
        code: Option<PathBuf>,
        #[command(flatten)]
        params: ParamsArgs,
    },
    /// LYM number of an antichain (JSON `[[level, "element"], ...]`) or of a code's codewords.
    Lym {
        #[command(flatten)]
        poset: PosetArgs,
        #[arg(long, group = "input", required = true)]
        antichain: Option<PathBuf>,
        #[arg(long, group = "input")]
        code: Option<PathBuf>,
    },
    /// Shadow density against set density on one level. Without elements
    /// every nonempty subset of the level is checked.
    LocalLym {
        #[command(flatten)]
        poset: PosetArgs,
        #[arg(long)]
        level: usize,
        elements: Vec<String>,
    },
    /// Greedy prefix-free code with the given length counts.
    Mcmillan {
        #[arg(long, default_value_t = 2)]
        r: u32,
        #[arg(long, value_delimiter = ',', required = true)]
        params: Vec<u64>,
        /// Also write the code as JSON.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Parameters with LYM sum 1 on two levels, then a proof that no antichain has them.
    Counterexample {
        #[command(flatten)]
        poset: PosetArgs,
        /// Lower level; for pattern posets the lower permutation length.
        #[arg(long)]
        level: usize,
        #[arg(long, env = "POSET_KRAFT_BUDGET", default_value_t = DEFAULT_SEARCH_BUDGET)]
        budget: u64,
    },
    /// Exhaustive search for an antichain with prescribed level counts.
    AntichainSearch {
        #[command(flatten)]
        poset: PosetArgs,
        /// `level:count` pairs, comma separated.
        #[arg(long, value_delimiter = ',', group = "want", required = true)]
        counts: Vec<String>,
        /// Counts by element length.
        #[arg(long, value_delimiter = ',', group = "want")]
        params: Vec<u64>,
        #[arg(long, env = "POSET_KRAFT_BUDGET", default_value_t = DEFAULT_SEARCH_BUDGET)]
        budget: u64,
    },
    /// Hasse diagram as DOT, or the poset as JSON with --json.
    Hasse {
        #[command(flatten)]
        poset: PosetArgs,
        #[arg(long, default_value_t = DEFAULT_DOT_CAP)]
        cap: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Degree audit of every consecutive level pair; exit 1 if not level-regular.
    Regularity {
        #[command(flatten)]
        poset: PosetArgs,
    },
}

#[derive(Debug, clap::Args)]
struct ParamsArgs {
    /// Codeword counts by length, starting at length 0.
    #[arg(long, value_delimiter = ',')]
    params: Vec<u64>,
    #[arg(long)]
    r: Option<u32>,
    #[arg(long)]
    k: Option<u32>,
}

/// Whether the checked property held.
enum Verdict {
    Holds,
    Fails,
}

struct Output {
    json: bool,
    decimal: bool,
}

impl Output {
    fn number(&self, value: &ExactRational) -> String {
        if self.decimal {
            format!("{} ({})", fraction(value), decimal(value))
        } else {
            fraction(value)
        }
    }

    fn number_json(&self, value: &ExactRational) -> Value {
        if self.decimal {
            json!({"fraction": fraction(value), "decimal": decimal(value)})
        } else {
            json!(fraction(value))
        }
    }

    fn emit(&self, value: Value, text: impl FnOnce() -> String) {
        if self.json {
            println!("{}", serde_json::to_string_pretty(&value).expect("values serialize"));
        } else {
            println!("{}", text());
        }
    }
}

fn read_code(path: &Path) -> anyhow::Result<Code> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let json: CodeJson = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(Code::from_json(&json)?)
}

fn read_antichain(poset: &GradedPoset, path: &Path) -> anyhow::Result<Antichain> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut value: Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    if let Some(inner) = value.get_mut("antichain") {
        value = inner.take();
    }
    let members: Vec<(usize, String)> =
        serde_json::from_value(value).context("expected [[level, \"element\"], ...]")?;
    Ok(Antichain::from_texts(poset, &members)?)
}

fn enumerate(
    out: &Output,
    perm: Option<PermKind>,
    strings: bool,
    subsets: bool,
    (k, r, n): (Option<u32>, Option<u32>, Option<u32>),
    l: Option<usize>,
) -> anyhow::Result<Verdict> {
    let elements = match (perm, strings, subsets) {
        (Some(kind), _, _) => {
            let k = k.context("--k is required")?;
            let kind = match kind {
                PermKind::Partial => EnumerationKind::Partial,
                PermKind::Full => EnumerationKind::Full,
            };
            let lengths = match l {
                Some(l) => l..=l,
                None => 1..=k as usize,
            };
            let mut all = Vec::new();
            for l in lengths {
                all.extend(perm::enumerate(kind, k, l)?);
            }
            all
        }
        (None, true, _) => {
            let l = l.context("--l is required")?;
            perm::enumerate(EnumerationKind::Strings, r.context("--r is required")?, l)?
        }
        (None, false, true) => {
            let poset = GradedPoset::build(Family::Subsets { n: n.context("--n is required")? })?;
            let levels = match l {
                Some(l) => {
                    if !poset.has_level(l) {
                        bail!("no subsets of size {l}");
                    }
                    l..=l
                }
                None => poset.level_labels(),
            };
            levels.flat_map(|level| poset.level(level).expect("level exists").to_vec()).collect()
        }
        (None, false, false) => bail!("choose one of --perm T, --perm S, --str or --subsets"),
    };
    let texts: Vec<String> = elements.iter().map(|e| e.to_string()).collect();
    out.emit(json!(texts), || texts.join("\n"));
    eprintln!("{} elements", texts.len());
    Ok(Verdict::Holds)
}

fn check_free(out: &Output, path: &Path, relation: Relation) -> anyhow::Result<Verdict> {
    let code = read_code(path)?;
    match codes::is_free(&code, relation)? {
        Freeness::Free => {
            out.emit(json!({"free": true}), || format!("free under {relation}"));
            Ok(Verdict::Holds)
        }
        Freeness::NotFree { lower, upper } => {
            let (a, b) = (&code.codewords()[lower], &code.codewords()[upper]);
            out.emit(json!({"free": false, "witness": [a.to_string(), b.to_string()]}), || {
                format!("not free under {relation}: {a} ≤ {b}")
            });
            Ok(Verdict::Fails)
        }
    }
}

/// `(name, value)` pairs for a code file or a parameter sequence.
fn constants_of(code: Option<&Path>, args: &ParamsArgs) -> anyhow::Result<Vec<(&'static str, ExactRational)>> {
    if let Some(path) = code {
        let code = read_code(path)?;
        let name = match code.codomain() {
            Codomain::String { .. } => "K",
            Codomain::PartialPerm { .. } => "P",
            Codomain::PermPattern { .. } => "P_S",
        };
        return Ok(vec![(name, codes::code_constant(&code)?)]);
    }
    let params = ParameterSequence::new(args.params.clone());
    let mut values = Vec::new();
    if let Some(r) = args.r {
        values.push(("K", codes::kraft_number(&params, r)?));
    }
    if let Some(k) = args.k {
        values.push(("P", codes::permutation_constant_t(&params, k)?));
        values.push(("P_S", codes::permutation_constant_s(&params, k)?));
    }
    if values.is_empty() {
        bail!("give a code file, or --params with --r or --k");
    }
    Ok(values)
}

fn constants(out: &Output, code: Option<&Path>, args: &ParamsArgs) -> anyhow::Result<Verdict> {
    let values = constants_of(code, args)?;
    let map: serde_json::Map<String, Value> =
        values.iter().map(|(name, v)| (name.to_string(), out.number_json(v))).collect();
    out.emit(Value::Object(map), || {
        values.iter().map(|(name, v)| format!("{name} = {}", out.number(v))).collect::<Vec<_>>().join("\n")
    });
    Ok(Verdict::Holds)
}

fn kraft(out: &Output, code: Option<&Path>, args: &ParamsArgs) -> anyhow::Result<Verdict> {
    let k = match code {
        Some(path) => {
            let code = read_code(path)?;
            let r = code.codomain().alphabet_size();
            if !matches!(code.codomain(), Codomain::String { .. }) {
                bail!("the Kraft sum is defined for string codes");
            }
            codes::kraft_number(&code.parameter_sequence(), r)?
        }
        None => {
            let r = args.r.context("--r is required")?;
            codes::kraft_number(&ParameterSequence::new(args.params.clone()), r)?
        }
    };
    let holds = k <= one();
    out.emit(json!({"K": out.number_json(&k), "holds": holds}), || {
        format!("K = {}\n{}", out.number(&k), if holds { "K ≤ 1" } else { "K > 1" })
    });
    Ok(if holds { Verdict::Holds } else { Verdict::Fails })
}

fn lym_cmd(out: &Output, args: &PosetArgs, antichain: Option<&Path>, code: Option<&Path>) -> anyhow::Result<Verdict> {
    let poset = args.build()?;
    let a = match (antichain, code) {
        (Some(path), _) => read_antichain(&poset, path)?,
        (None, Some(path)) => Antichain::from_code(&poset, &read_code(path)?)?,
        (None, None) => bail!("give --antichain or --code"),
    };
    let l = lym::lym_number(&poset, &a)?;
    let verdict = lym::is_antichain(&poset, &a)?;
    let witness = match &verdict {
        AntichainVerdict::Antichain => None,
        AntichainVerdict::Comparable { lower, upper } => Some([lower, upper].map(|&(level, idx)| {
            poset.level(level).expect("member level").get(idx).expect("member index").to_string()
        })),
    };
    out.emit(json!({"L": out.number_json(&l), "antichain": witness.is_none(), "witness": witness}), || match &witness {
        None => format!("L = {}\nantichain", out.number(&l)),
        Some([a, b]) => format!("L = {}\nnot an antichain: {a} < {b}", out.number(&l)),
    });
    Ok(if witness.is_none() { Verdict::Holds } else { Verdict::Fails })
}

const LOCAL_LYM_EXHAUSTIVE_CAP: usize = 20;

fn local_lym(out: &Output, args: &PosetArgs, level: usize, elements: &[String]) -> anyhow::Result<Verdict> {
    let poset = args.build()?;
    let size = poset.level_size(level)?;
    if elements.is_empty() {
        if size > LOCAL_LYM_EXHAUSTIVE_CAP {
            bail!("level {level} has {size} elements; name the elements to check");
        }
        let mut failure = None;
        let mut checked = 0u64;
        for mask in 1u32..1 << size {
            let members: Vec<usize> = (0..size).filter(|i| mask >> i & 1 == 1).collect();
            let check = lym::local_lym_check(&poset, level, &members)?;
            checked += 1;
            if !check.holds {
                failure = Some(members);
                break;
            }
        }
        let level_elements = poset.level(level)?;
        let failure: Option<Vec<String>> =
            failure.map(|m| m.iter().map(|&i| level_elements[i].to_string()).collect());
        out.emit(json!({"level": level, "subsets_checked": checked, "holds": failure.is_none(), "witness": failure}), || {
            match &failure {
                None => format!("local LYM holds on all {checked} nonempty subsets of level {level}"),
                Some(w) => format!("local LYM fails on {{{}}}", w.join(",")),
            }
        });
        return Ok(if failure.is_none() { Verdict::Holds } else { Verdict::Fails });
    }
    let members = elements.iter().map(|e| poset.find(level, e)).collect::<poset_kraft::Result<Vec<_>>>()?;
    let check = lym::local_lym_check(&poset, level, &members)?;
    out.emit(
        json!({"shadow_density": out.number_json(&check.lhs), "density": out.number_json(&check.rhs), "holds": check.holds}),
        || {
            let sign = if check.holds { "≥" } else { "<" };
            format!("#shadow/#P^({}) = {} {sign} #A/#P^({level}) = {}", level - 1, out.number(&check.lhs), out.number(&check.rhs))
        },
    );
    Ok(if check.holds { Verdict::Holds } else { Verdict::Fails })
}

fn mcmillan(out: &Output, r: u32, params: &[u64], output: Option<&Path>) -> anyhow::Result<Verdict> {
    let params = ParameterSequence::new(params.to_vec());
    match lym::mcmillan_construct(r, &params)? {
        McMillan::Code(code) => {
            let code_json = code.to_json();
            if let Some(path) = output {
                let text = serde_json::to_string_pretty(&code_json)?;
                fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))?;
            }
            out.emit(serde_json::to_value(&code_json)?, || format!("{{{}}}", code_json.codewords.join(",")));
            Ok(Verdict::Holds)
        }
        McMillan::Infeasible { level, requested, available, kraft } => {
            out.emit(
                json!({"feasible": false, "level": level, "requested": requested,
                       "available": available.to_string(), "K": out.number_json(&kraft)}),
                || {
                    format!(
                        "infeasible: {requested} codewords of length {level} requested, {available} available (K = {})",
                        out.number(&kraft)
                    )
                },
            );
            Ok(Verdict::Fails)
        }
    }
}

fn counterexample(out: &Output, args: &PosetArgs, level: usize, budget: u64) -> anyhow::Result<Verdict> {
    let poset = args.build()?;
    let found = match poset.family() {
        Family::Patterns { .. } => lym::pattern_counterexample_params(&poset, level)?,
        _ => lym::counterexample_params(&poset, level)?,
    };
    let c = match found {
        Counterexample::Params(c) => c,
        Counterexample::Rejected(why) => {
            out.emit(json!({"rejected": why.to_string()}), || format!("rejected: {why}"));
            return Ok(Verdict::Fails);
        }
    };
    let search = lym::antichain_exists(&poset, &c.counts, budget)?;
    let (lo, hi) = (c.counts.get(c.lower_level), c.counts.get(c.upper_level));
    out.emit(
        json!({
            "family": poset.family().to_string(),
            "levels": [c.lower_level, c.upper_level],
            "sizes": [c.lower_size, c.upper_size],
            "degrees": c.degrees,
            "gcd": c.gcd,
            "params": [lo, hi],
            "lym_sum": out.number_json(&c.lym_sum),
            "certificate": search.to_json(&poset),
        }),
        || {
            let mut lines = vec![
                format!("family: {}", poset.family()),
                format!("levels: {} and {} with sizes {} and {}", c.lower_level, c.upper_level, c.lower_size, c.upper_size),
            ];
            if let Some((u, d)) = c.degrees {
                lines.push(format!("hypotheses: u = {u} > 1, d = {d} > 1, weakly connected, gcd = {} > 1", c.gcd));
            } else {
                lines.push(format!("gcd = {} > 1", c.gcd));
            }
            lines.push(format!("params: ({lo},{hi})"));
            lines.push(format!("LYM sum: {}", out.number(&c.lym_sum)));
            lines.push(match &search.antichain {
                None => format!("certificate: none-exists after {} search nodes", search.search_nodes),
                Some(a) => format!("antichain exists: {}", a.to_json(&poset)),
            });
            lines.join("\n")
        },
    );
    Ok(if search.exists() { Verdict::Fails } else { Verdict::Holds })
}

fn parse_counts(pairs: &[String]) -> anyhow::Result<LevelCounts> {
    let pairs = pairs
        .iter()
        .map(|p| {
            let (level, count) = p.split_once(':').with_context(|| format!("expected level:count, got {p:?}"))?;
            Ok((level.trim().parse()?, count.trim().parse()?))
        })
        .collect::<anyhow::Result<Vec<(usize, usize)>>>()?;
    Ok(LevelCounts::from_pairs(&pairs))
}

fn antichain_search(
    out: &Output,
    args: &PosetArgs,
    counts: &[String],
    params: &[u64],
    budget: u64,
) -> anyhow::Result<Verdict> {
    let poset = args.build()?;
    let counts = if counts.is_empty() {
        LevelCounts::from_params(poset.family(), &ParameterSequence::new(params.to_vec()))?
    } else {
        parse_counts(counts)?
    };
    let search = lym::antichain_exists(&poset, &counts, budget)?;
    let certificate = search.to_json(&poset);
    out.emit(certificate.clone(), || match &search.antichain {
        Some(_) => format!("exists: {}", certificate["antichain"]),
        None => format!("none-exists after {} search nodes", search.search_nodes),
    });
    Ok(if search.exists() { Verdict::Holds } else { Verdict::Fails })
}

fn hasse(out: &Output, args: &PosetArgs, cap: usize, output: Option<&Path>) -> anyhow::Result<Verdict> {
    let poset = args.build()?;
    let text = if out.json {
        serde_json::to_string_pretty(&poset.to_json())? + "\n"
    } else {
        poset.to_dot(cap)?
    };
    match output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(Verdict::Holds)
}

fn regularity(out: &Output, args: &PosetArgs) -> anyhow::Result<Verdict> {
    let poset = args.build()?;
    let report = poset.regularity_check();
    out.emit(serde_json::to_value(&report)?, || report.to_string());
    Ok(if report.level_regular { Verdict::Holds } else { Verdict::Fails })
}

fn run(cli: Cli) -> anyhow::Result<Verdict> {
    let out = Output { json: cli.json, decimal: cli.decimal };
    match cli.command {
        Command::Enumerate { perm, strings, subsets, k, r, n, l } => enumerate(&out, perm, strings, subsets, (k, r, n), l),
        Command::CheckFree { code, relation } => check_free(&out, &code, relation),
        Command::Constants { code, params } => constants(&out, code.as_deref(), &params),
        Command::Kraft { code, params } => kraft(&out, code.as_deref(), &params),
        Command::Lym { poset, antichain, code } => lym_cmd(&out, &poset, antichain.as_deref(), code.as_deref()),
        Command::LocalLym { poset, level, elements } => local_lym(&out, &poset, level, &elements),
        Command::Mcmillan { r, params, output } => mcmillan(&out, r, &params, output.as_deref()),
        Command::Counterexample { poset, level, budget } => counterexample(&out, &poset, level, budget),
        Command::AntichainSearch { poset, counts, params, budget } => {
            antichain_search(&out, &poset, &counts, &params, budget)
        }
        Command::Hasse { poset, cap, output } => hasse(&out, &poset, cap, output.as_deref()),
        Command::Regularity { poset } => regularity(&out, &poset),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Verdict::Holds) => ExitCode::SUCCESS,
        Ok(Verdict::Fails) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<Error>() {
                Some(Error::BudgetExceeded { .. }) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}
