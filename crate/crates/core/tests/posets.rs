use poset_kraft::element::Element;
use poset_kraft::perm::{seq, Relation};
use poset_kraft::poset::{
    build_partial_perm_poset, build_pattern_poset, build_string_poset, build_subset_poset, Family, GradedPoset,
};

fn all_families() -> Vec<Family> {
    let mut out = Vec::new();
    for n in 0..=8 {
        out.push(Family::Subsets { n });
    }
    for r in 1..=4 {
        for relation in [Relation::Prefix, Relation::Subsequence, Relation::Substring] {
            out.push(Family::Strings { r, relation, max_level: if r == 4 { 4 } else { 5 } });
        }
    }
    for k in 1..=5 {
        for relation in [Relation::Prefix, Relation::Subsequence, Relation::Substring] {
            out.push(Family::PartialPerms { k, relation });
        }
        for relation in [Relation::Pattern, Relation::SubstringPattern] {
            out.push(Family::Patterns { k, relation });
        }
    }
    out
}

#[test]
fn every_family_is_level_regular() {
    for family in all_families() {
        let p = GradedPoset::build(family).unwrap();
        let report = p.regularity_check();
        assert!(report.level_regular, "{family}: {report}");
        for pair in &report.pairs {
            assert!(pair.edge_identity_holds(), "{family}: {pair:?}");
        }
    }
}

#[test]
fn closed_form_degrees() {
    for r in 2..=3u64 {
        let sub = build_string_poset(r as u32, Relation::Subsequence, 4).unwrap();
        let sstr = build_string_poset(r as u32, Relation::Substring, 4).unwrap();
        for l in 1..4u64 {
            let pair = sub.pair_regularity(l as usize).unwrap();
            assert_eq!((pair.up_degree(), pair.down_degree()), (Some((l + 1) * r), Some(l + 1)));
            let pair = sstr.pair_regularity(l as usize).unwrap();
            assert_eq!((pair.up_degree(), pair.down_degree()), (Some(2 * r), Some(2)));
        }
    }
    let k = 5u64;
    for (relation, up, down) in [
        (Relation::Prefix, (|k: u64, l: u64| k - l) as fn(u64, u64) -> u64, (|_: u64| 1) as fn(u64) -> u64),
        (Relation::Subsequence, |k, l| (k - l) * (l + 1), |l| l + 1),
        (Relation::Substring, |k, l| 2 * (k - l), |_| 2),
    ] {
        let p = build_partial_perm_poset(k as u32, relation).unwrap();
        for l in 1..k {
            let pair = p.pair_regularity(l as usize).unwrap();
            assert_eq!(pair.up_degree(), Some(up(k, l)), "{relation} l={l}");
            assert_eq!(pair.down_degree(), Some(down(l)), "{relation} l={l}");
        }
    }
    for n in 1..=6u64 {
        let p = build_subset_poset(n as u32).unwrap();
        for i in 0..n {
            let pair = p.pair_regularity(i as usize).unwrap();
            assert_eq!((pair.up_degree(), pair.down_degree()), (Some(n - i), Some(i + 1)));
        }
    }
}

/// Reachability through covers must coincide with the direct relation.
fn assert_reachability_matches(p: &GradedPoset, levels: &[usize], related: impl Fn(&Element, &Element) -> bool) {
    for &la in levels {
        for &lb in levels.iter().filter(|&&lb| lb > la) {
            for (ia, a) in p.level(la).unwrap().iter().enumerate() {
                for (ib, b) in p.level(lb).unwrap().iter().enumerate() {
                    assert_eq!(
                        p.is_strictly_below((la, ia), (lb, ib)),
                        related(a, b),
                        "{} at {la} vs {} at {lb} in {}",
                        a,
                        b,
                        p.family()
                    );
                }
            }
        }
    }
}

#[test]
fn reachability_equals_direct_relation() {
    for relation in [Relation::Prefix, Relation::Subsequence, Relation::Substring] {
        for r in 1..=3 {
            let p = build_string_poset(r, relation, 4).unwrap();
            let levels: Vec<usize> = p.level_labels().collect();
            assert_reachability_matches(&p, &levels, |a, b| relation.holds(a.symbols().unwrap(), b.symbols().unwrap()));
        }
        for k in 1..=4 {
            let p = build_partial_perm_poset(k, relation).unwrap();
            let levels: Vec<usize> = p.level_labels().collect();
            assert_reachability_matches(&p, &levels, |a, b| relation.holds(a.symbols().unwrap(), b.symbols().unwrap()));
        }
    }
    for relation in [Relation::Pattern, Relation::SubstringPattern] {
        for k in 1..=4 {
            let p = build_pattern_poset(k, relation).unwrap();
            let levels: Vec<usize> = p.level_labels().filter(|l| l % 2 == 0).collect();
            assert_reachability_matches(&p, &levels, |a, b| relation.holds(a.symbols().unwrap(), b.symbols().unwrap()));
        }
    }
    for n in 0..=5 {
        let p = build_subset_poset(n).unwrap();
        let levels: Vec<usize> = p.level_labels().collect();
        assert_reachability_matches(&p, &levels, |a, b| match (a, b) {
            (Element::Set(a), Element::Set(b)) => a.members().iter().all(|m| b.members().contains(m)),
            _ => unreachable!(),
        });
    }
}

#[test]
fn pattern_reachability_matches_direct_check_on_all_pairs() {
    // the k ≤ 4 pattern posets against seq::is_pattern_in, including intermediate levels
    for k in 2..=4 {
        let p = build_pattern_poset(k, Relation::Pattern).unwrap();
        for la in p.level_labels() {
            for lb in p.level_labels().filter(|&l| l > la && l % 2 == 0) {
                for (ia, a) in p.level(la).unwrap().iter().enumerate() {
                    for (ib, b) in p.level(lb).unwrap().iter().enumerate() {
                        let (a, b) = (a.symbols().unwrap(), b.symbols().unwrap());
                        let expected = if la % 2 == 0 {
                            seq::is_pattern_in(a, b)
                        } else {
                            // above an intermediate element sit its one-insertion completions
                            let missing = (1..=a.len() as u32 + 1).find(|s| !a.contains(s)).unwrap();
                            (0..=a.len()).any(|pos| {
                                let mut sigma = a.to_vec();
                                sigma.insert(pos, missing);
                                seq::is_pattern_in(&sigma, b)
                            })
                        };
                        assert_eq!(p.is_strictly_below((la, ia), (lb, ib)), expected);
                    }
                }
            }
        }
    }
}

#[test]
fn lower_of_upper_shadow_contains_element() {
    for family in all_families().into_iter().filter(|f| !matches!(f, Family::Subsets { n } if *n > 6)) {
        let p = GradedPoset::build(family).unwrap();
        for level in p.level_labels().take_while(|&l| l < p.last_level()) {
            for x in 0..p.level_size(level).unwrap() {
                let up: Vec<usize> = p.upper_shadow(level, &[x]).unwrap().into_iter().collect();
                assert!(p.lower_shadow(level + 1, &up).unwrap().contains(&x), "{family}");
            }
        }
    }
}

#[test]
fn consecutive_levels_are_connected_where_expected() {
    for relation in [Relation::Subsequence, Relation::Substring] {
        for r in 2..=3 {
            let p = build_string_poset(r, relation, 3).unwrap();
            for l in 0..3 {
                assert!(p.is_weakly_connected_pair(l).unwrap());
            }
        }
        let p = build_partial_perm_poset(4, relation).unwrap();
        for l in 1..3 {
            assert!(p.is_weakly_connected_pair(l).unwrap(), "{relation} {l}");
        }
    }
}
