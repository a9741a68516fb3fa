//! Pattern queries over the live structures.
//!
//! A pattern of length `m` occurs in text `k` ending at position `j`
//! (1-based) when `T_k[j-m+1 ..= j]` spells it. Finding returns the DAWG
//! class whose strings end exactly where the pattern ends; counting sums
//! prefix anchors over that class's suffix-link subtree, which is valid at
//! any moment during construction. Listing the positions themselves uses a
//! [`PrefixMap`] snapshot, typically built once after finalizing.

use crate::dawg::{Dawg, NodeId, SOURCE};
use crate::stree::{EdgeLabel, Stree, StNodeId, ST_ROOT};
use crate::text::TextStore;

/// Locate the pattern's class by walking DAWG edges from the source.
pub fn find_dawg(dawg: &Dawg, pattern: &[char]) -> Option<NodeId> {
    dawg.lookup(pattern)
}

/// Locate the pattern's class by descending the suffix tree with a DAWG
/// cursor alongside. Spelled-out edges are verified against the stored
/// texts; entering an unexpanded leaf edge consumes its known first
/// character, after which the cursor alone carries the walk. Both finders
/// agree on every pattern.
pub fn find_stree(
    store: &TextStore,
    dawg: &Dawg,
    stree: &Stree,
    pattern: &[char],
) -> Option<NodeId> {
    let mut cur: NodeId = SOURCE;
    let mut node: StNodeId = ST_ROOT;
    let mut i = 0;
    while i < pattern.len() {
        let child = stree.child(node, pattern[i])?;
        let label = stree
            .label_in(child)
            .expect("a non-root node always has an incoming edge");
        match label {
            EdgeLabel::Full { text, start, end } => {
                for pos in start..=end {
                    if i == pattern.len() {
                        return Some(cur);
                    }
                    if store.at(text, pos) != pattern[i] {
                        return None;
                    }
                    cur = advance(dawg, cur, pattern[i]);
                    i += 1;
                }
                node = child;
            }
            EdgeLabel::Lazy { first } => {
                debug_assert_eq!(first, pattern[i]);
                cur = advance(dawg, cur, pattern[i]);
                i += 1;
                while i < pattern.len() {
                    cur = dawg.edge(cur, pattern[i])?.0;
                    i += 1;
                }
                return Some(cur);
            }
        }
    }
    Some(cur)
}

/// Step the cursor along a character the tree already vouches for.
fn advance(dawg: &Dawg, cur: NodeId, c: char) -> NodeId {
    dawg.edge(cur, c)
        .expect("every tree path spells a substring, so the cursor advances")
        .0
}

/// Number of positions where this class's strings end, right now: the sum
/// of prefix anchors over its suffix-link subtree. A prefix of some text
/// has the pattern as a suffix exactly when its own class sits below the
/// pattern's class in the suffix-link tree.
pub fn count_ends(dawg: &Dawg, v: NodeId) -> u64 {
    let mut total = 0;
    let mut stack = vec![v];
    while let Some(u) = stack.pop() {
        total += dawg.prefix_count(u);
        stack.extend_from_slice(dawg.slink_children(u));
    }
    total
}

/// Occurrence count for a pattern, zero when it is not a substring of any
/// text. The empty pattern ends everywhere, including before each text's
/// first character.
pub fn count_pattern(dawg: &Dawg, pattern: &[char]) -> u64 {
    match find_dawg(dawg, pattern) {
        Some(v) => count_ends(dawg, v),
        None => 0,
    }
}

/// Snapshot mapping each DAWG class to the text prefixes it contains:
/// entry `(k, j)` at the class of `T_k[1 ..= j]`. Collecting a class's
/// suffix-link subtree then lists every position where its strings end.
/// The snapshot reflects the texts at build time; appends stale it.
pub struct PrefixMap {
    ends: Vec<Vec<(usize, usize)>>,
}

impl PrefixMap {
    pub fn build(store: &TextStore, dawg: &Dawg) -> PrefixMap {
        let mut ends = vec![Vec::new(); dawg.len()];
        for k in 1..=store.text_count() {
            let mut cur = SOURCE;
            ends[cur].push((k, 0));
            for j in 1..=store.len(k) {
                cur = dawg
                    .edge(cur, store.at(k, j))
                    .expect("each text is walkable through the automaton")
                    .0;
                ends[cur].push((k, j));
            }
        }
        PrefixMap { ends }
    }

    /// Prefixes anchored at exactly this class.
    pub fn ends_at(&self, v: NodeId) -> &[(usize, usize)] {
        &self.ends[v]
    }

    /// All positions where the class's strings end, sorted by text then
    /// position.
    pub fn report(&self, dawg: &Dawg, v: NodeId) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            out.extend_from_slice(&self.ends[u]);
            stack.extend_from_slice(dawg.slink_children(u));
        }
        out.sort_unstable();
        out
    }

    /// Ending positions of a pattern, empty when it does not occur.
    pub fn report_pattern(&self, dawg: &Dawg, pattern: &[char]) -> Vec<(usize, usize)> {
        match find_dawg(dawg, pattern) {
            Some(v) => self.report(dawg, v),
            None => Vec::new(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index::OnlineIndex;
    use crate::text::UpdateOp;

    fn index_of(texts: &[&str]) -> OnlineIndex {
        let mut index = OnlineIndex::new("walkup").unwrap();
        for (i, t) in texts.iter().enumerate() {
            for c in t.chars() {
                index.apply(UpdateOp::new(i + 1, c)).unwrap();
            }
        }
        index
    }

    fn naive_ends(store: &TextStore, pattern: &[char]) -> Vec<(usize, usize)> {
        let m = pattern.len();
        let mut out = Vec::new();
        for k in 1..=store.text_count() {
            for j in m..=store.len(k) {
                let hit = (0..m).all(|t| store.at(k, j - m + 1 + t) == pattern[t]);
                if hit {
                    out.push((k, j));
                }
            }
        }
        out
    }

    // Every pattern a fixture can answer, plus misses: both finders agree
    // and the counts and reports match a direct scan.
    fn check_all_patterns(index: &OnlineIndex, extra: &[&str]) {
        let store = index.store();
        let dawg = index.dawg();
        let map = PrefixMap::build(store, dawg);
        let mut patterns: Vec<Vec<char>> = vec![Vec::new()];
        for k in 1..=store.text_count() {
            for i in 1..=store.len(k) {
                for j in i..=store.len(k) {
                    patterns.push((i..=j).map(|p| store.at(k, p)).collect());
                }
            }
        }
        patterns.extend(extra.iter().map(|s| s.chars().collect()));
        for p in &patterns {
            let expected = naive_ends(store, p);
            let via_dawg = find_dawg(dawg, p);
            let via_tree = find_stree(store, dawg, index.stree(), p);
            assert_eq!(via_dawg, via_tree, "finders disagree on {p:?}");
            assert_eq!(via_dawg.is_some(), !expected.is_empty() || p.is_empty());
            assert_eq!(count_pattern(dawg, p), expected.len() as u64, "count of {p:?}");
            assert_eq!(map.report_pattern(dawg, p), expected, "report of {p:?}");
        }
    }

    #[test]
    fn one_text_all_substrings() {
        let index = index_of(&["abcabxabcd"]);
        check_all_patterns(&index, &["zz", "abd", "abcabxabcda", "x", "d"]);
    }

    #[test]
    fn three_texts_share_occurrences() {
        let index = index_of(&["aaab", "ababc", "bab"]);
        check_all_patterns(&index, &["abab", "ca", "bb", "aaaa"]);
        // "ab" ends at (1,4) in aaab, (2,2) and (2,4) in ababc, and (3,3)
        // in bab.
        let dawg = index.dawg();
        let map = PrefixMap::build(index.store(), dawg);
        let ab: Vec<char> = "ab".chars().collect();
        assert_eq!(count_pattern(dawg, &ab), 4);
        assert_eq!(
            map.report_pattern(dawg, &ab),
            vec![(1, 4), (2, 2), (2, 4), (3, 3)]
        );
    }

    #[test]
    fn counts_stay_honest_while_growing() {
        let ops = [
            (1, 'a'), (2, 'b'), (1, 'b'), (2, 'a'), (2, 'b'), (1, 'a'),
            (3, 'a'), (3, 'b'), (1, 'b'), (2, 'b'), (2, 'a'), (3, 'a'),
        ];
        let mut index = OnlineIndex::new("walkup").unwrap();
        let probes: Vec<Vec<char>> =
            ["a", "b", "ab", "ba", "abb", "bab", "aba"].iter().map(|s| s.chars().collect()).collect();
        for (k, c) in ops {
            index.apply(UpdateOp::new(k, c)).unwrap();
            for p in &probes {
                assert_eq!(
                    count_pattern(index.dawg(), p),
                    naive_ends(index.store(), p).len() as u64,
                    "live count of {p:?}"
                );
            }
        }
    }

    #[test]
    fn empty_pattern_ends_everywhere() {
        let index = index_of(&["abc", "de"]);
        let dawg = index.dawg();
        assert_eq!(find_dawg(dawg, &[]), Some(SOURCE));
        assert_eq!(count_pattern(dawg, &[]), 7, "four ends in abc, three in de");
        let map = PrefixMap::build(index.store(), dawg);
        assert_eq!(
            map.report_pattern(dawg, &[]),
            vec![(1, 0), (1, 1), (1, 2), (1, 3), (2, 0), (2, 1), (2, 2)]
        );
    }

    #[test]
    fn finalize_keeps_both_finders_agreeing() {
        let mut index = index_of(&["mississippi", "missing"]);
        index.finalize();
        check_all_patterns(&index, &["ssiss", "ippi", "ping", "missx"]);
    }
}
