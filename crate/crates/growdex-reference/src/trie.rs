//! Incrementally grown suffix trie over the whole collection.
//!
//! This is the per-step reference: one node per distinct substring, with
//! suffix links, live occurrence counts (|Epos|), and the current suffix
//! loci of every text. Appending one character to text `k` extends each
//! suffix locus of `T_k` by one child (creating nodes only for substrings
//! that are genuinely new), so a full replay costs O(Σ|T_k| per step) —
//! fast enough to shadow every update of a long run.

use growdex::text::UpdateOp;
use std::collections::BTreeMap;

#[derive(Debug, Clone)]
pub struct TrieNode {
    pub children: BTreeMap<char, usize>,
    pub parent: Option<usize>,
    pub in_char: Option<char>,
    /// Node for this string minus its first character (root: none).
    pub slink: Option<usize>,
    /// Inverse of `slink`, in creation order.
    pub slink_children: Vec<usize>,
    pub depth: usize,
    /// |Epos| of this node's string. The root also counts the position-0
    /// end of every registered text.
    pub occ: usize,
}

#[derive(Debug, Clone)]
pub struct GrowingTrie {
    pub nodes: Vec<TrieNode>,
    /// Per text: the node of each suffix, longest first, ending with the
    /// root (for ε).
    suffix_loci: Vec<Vec<usize>>,
}

pub const ROOT: usize = 0;

impl Default for GrowingTrie {
    fn default() -> Self {
        GrowingTrie::new()
    }
}

impl GrowingTrie {
    pub fn new() -> GrowingTrie {
        GrowingTrie {
            nodes: vec![TrieNode {
                children: BTreeMap::new(),
                parent: None,
                in_char: None,
                slink: None,
                slink_children: Vec::new(),
                depth: 0,
                occ: 0,
            }],
            suffix_loci: Vec::new(),
        }
    }

    pub fn text_count(&self) -> usize {
        self.suffix_loci.len()
    }

    /// Applies one append. Panics on an invalid text id (reference code).
    pub fn step(&mut self, op: UpdateOp) {
        let k = op.text_id;
        assert!(
            k >= 1 && k <= self.suffix_loci.len() + 1,
            "text id {k} out of range"
        );
        if k == self.suffix_loci.len() + 1 {
            // Registering text k: ε gains the end position (k, 0).
            self.suffix_loci.push(vec![ROOT]);
            self.nodes[ROOT].occ += 1;
        }
        let old_loci = std::mem::take(&mut self.suffix_loci[k - 1]);
        let mut new_loci = Vec::with_capacity(old_loci.len() + 1);
        // Extend every suffix of T_k by the new character, longest first.
        // Creations form a prefix of the walk (substrings are suffix-closed),
        // and each created node's suffix link is the next, shorter locus.
        let mut pending_slink: Option<usize> = None;
        for &u in &old_loci {
            let (child, created) = self.child_or_create(u, op.ch);
            self.nodes[child].occ += 1;
            if let Some(p) = pending_slink {
                self.nodes[p].slink = Some(child);
                self.nodes[child].slink_children.push(p);
            }
            pending_slink = if created {
                Some(child)
            } else {
                debug_assert!(
                    self.nodes[child].slink.is_some() || child == ROOT,
                    "existing non-root nodes already have suffix links"
                );
                None
            };
            new_loci.push(child);
        }
        debug_assert!(pending_slink.is_none() || old_loci.last() == Some(&ROOT));
        // ε is a suffix of the new text too: (k, new length) lands on root.
        self.nodes[ROOT].occ += 1;
        new_loci.push(ROOT);
        self.suffix_loci[k - 1] = new_loci;
    }

    fn child_or_create(&mut self, u: usize, a: char) -> (usize, bool) {
        if let Some(&c) = self.nodes[u].children.get(&a) {
            return (c, false);
        }
        let id = self.nodes.len();
        let depth = self.nodes[u].depth + 1;
        self.nodes.push(TrieNode {
            children: BTreeMap::new(),
            parent: Some(u),
            in_char: Some(a),
            slink: if depth == 1 { Some(ROOT) } else { None },
            slink_children: Vec::new(),
            depth,
            occ: 0,
        });
        if depth == 1 {
            self.nodes[ROOT].slink_children.push(id);
        }
        self.nodes[u].children.insert(a, id);
        (id, true)
    }

    /// Node of string `x`, walking from the root.
    pub fn node_of(&self, x: &[char]) -> Option<usize> {
        let mut cur = ROOT;
        for &c in x {
            cur = *self.nodes[cur].children.get(&c)?;
        }
        Some(cur)
    }

    /// The string a node spells, via parent pointers.
    pub fn string_of(&self, v: usize) -> Vec<char> {
        let mut out = Vec::with_capacity(self.nodes[v].depth);
        let mut cur = v;
        while let Some(p) = self.nodes[cur].parent {
            out.push(self.nodes[cur].in_char.unwrap());
            cur = p;
        }
        out.reverse();
        out
    }

    /// Current suffix loci of text `k`, longest first, ending at the root.
    pub fn suffix_nodes(&self, k: usize) -> &[usize] {
        &self.suffix_loci[k - 1]
    }

    /// Is `v` currently a suffix of text `k`?
    pub fn is_current_suffix(&self, v: usize, k: usize) -> bool {
        self.suffix_loci[k - 1].contains(&v)
    }

    /// Deepest node of `v`'s equivalence class (the class's longest member).
    /// Same class ⟺ suffix-link related with equal occ; at most one
    /// suffix-link child can tie, so the walk is well-defined.
    pub fn class_rep(&self, v: usize) -> usize {
        let mut cur = v;
        loop {
            let occ = self.nodes[cur].occ;
            let mut equal = self.nodes[cur]
                .slink_children
                .iter()
                .filter(|&&c| self.nodes[c].occ == occ);
            match equal.next() {
                Some(&c) => {
                    debug_assert!(equal.next().is_none(), "two equal-occ slink children");
                    cur = c;
                }
                None => return cur,
            }
        }
    }

    /// Shallowest node of `v`'s class (the class's shortest member).
    pub fn class_shortest(&self, v: usize) -> usize {
        let mut cur = v;
        while let Some(s) = self.nodes[cur].slink {
            if self.nodes[s].occ != self.nodes[cur].occ {
                break;
            }
            cur = s;
        }
        cur
    }
}

/// From-scratch trie of a finished store: replays texts one after another.
/// The result is interleaving-independent (it only depends on the final
/// substring set and text lengths).
pub fn naive_suffix_trie(store: &growdex::text::TextStore) -> GrowingTrie {
    assert!(
        store.total_len() <= crate::epos::DEFAULT_SIZE_GUARD,
        "naive trie size guard"
    );
    let mut trie = GrowingTrie::new();
    for k in 1..=store.text_count() {
        for &c in store.text(k) {
            trie.step(UpdateOp::new(k, c));
        }
    }
    trie
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::epos::EposTable;
    use crate::gen::random_ops;
    use growdex::text::TextStore;

    fn chars(s: &str) -> Vec<char> {
        s.chars().collect()
    }

    fn replay(ops: &[UpdateOp]) -> (GrowingTrie, TextStore) {
        let mut trie = GrowingTrie::new();
        let mut store = TextStore::new();
        for &op in ops {
            trie.step(op);
            store.append(op).unwrap();
        }
        (trie, store)
    }

    /// Full definitional agreement with the Epos table.
    fn assert_matches_epos(trie: &GrowingTrie, store: &TextStore) {
        let table = EposTable::build(store);
        assert_eq!(trie.nodes.len(), table.substring_count());
        for s in table.substrings() {
            let v = trie
                .node_of(s)
                .unwrap_or_else(|| panic!("substring {s:?} missing from trie"));
            assert_eq!(
                trie.nodes[v].occ,
                table.epos(s).unwrap().len(),
                "occ mismatch for {s:?}"
            );
            assert_eq!(&trie.string_of(v), s);
        }
        // Suffix links drop the first character.
        for v in 1..trie.nodes.len() {
            let s = trie.string_of(v);
            assert_eq!(trie.nodes[v].slink, trie.node_of(&s[1..]));
        }
        // Class structure agrees: group trie nodes by representative and
        // compare member strings against Epos classes.
        let mut by_rep: BTreeMap<usize, Vec<Vec<char>>> = BTreeMap::new();
        for v in 0..trie.nodes.len() {
            by_rep.entry(trie.class_rep(v)).or_default().push(trie.string_of(v));
        }
        let mut trie_classes: Vec<Vec<Vec<char>>> = by_rep
            .into_values()
            .map(|mut m| {
                m.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
                m
            })
            .collect();
        trie_classes.sort();
        let mut epos_classes: Vec<Vec<Vec<char>>> =
            table.classes().into_iter().map(|c| c.members).collect();
        epos_classes.sort();
        assert_eq!(trie_classes, epos_classes);
        // class_shortest inverts class_rep's walk.
        for v in 0..trie.nodes.len() {
            let rep = trie.class_rep(v);
            assert_eq!(trie.class_rep(trie.class_shortest(v)), rep);
            assert_eq!(trie.class_shortest(trie.class_rep(v)), trie.class_shortest(v));
        }
    }

    #[test]
    fn single_two_char_text() {
        let (trie, store) = replay(&[UpdateOp::new(1, 'a'), UpdateOp::new(1, 'b')]);
        // Distinct substrings of {ab}: ε, a, ab, b.
        assert_eq!(trie.nodes.len(), 4);
        assert_matches_epos(&trie, &store);
    }

    #[test]
    fn suffix_status_tracks_growth() {
        // Collection {aaab, ababc, bab}: "bab" is a current suffix of text 3,
        // "abab" is a suffix of no text.
        let mut ops = Vec::new();
        for (k, t) in [(1, "aaab"), (2, "ababc"), (3, "bab")] {
            for c in t.chars() {
                ops.push(UpdateOp::new(k, c));
            }
        }
        let (trie, store) = replay(&ops);
        let bab = trie.node_of(&chars("bab")).unwrap();
        assert!(trie.is_current_suffix(bab, 3));
        assert!(!trie.is_current_suffix(bab, 1) && !trie.is_current_suffix(bab, 2));
        let abab = trie.node_of(&chars("abab")).unwrap();
        assert!((1..=3).all(|k| !trie.is_current_suffix(abab, k)));
        assert_matches_epos(&trie, &store);
    }

    #[test]
    fn unary_alphabet_chain() {
        let (trie, store) = replay(&[
            UpdateOp::new(1, 'a'),
            UpdateOp::new(1, 'a'),
            UpdateOp::new(1, 'a'),
        ]);
        assert_eq!(trie.nodes.len(), 4, "ε, a, aa, aaa");
        assert_matches_epos(&trie, &store);
        // All four are distinct classes (occ 4/3/2/1), a chain of reps.
        for v in 0..4 {
            assert_eq!(trie.class_rep(v), v);
        }
    }

    #[test]
    fn interleaved_random_growth_matches_epos_table_each_step() {
        for seed in 0..12u64 {
            let sigma = [1, 2, 3, 26][seed as usize % 4];
            let ops = random_ops(seed, 40, 3, sigma);
            let mut trie = GrowingTrie::new();
            let mut store = TextStore::new();
            for &op in &ops {
                trie.step(op);
                store.append(op).unwrap();
                assert_matches_epos(&trie, &store);
            }
        }
    }

    #[test]
    fn from_scratch_equals_incremental() {
        let ops = random_ops(99, 120, 4, 3);
        let (trie, store) = replay(&ops);
        let scratch = naive_suffix_trie(&store);
        assert_eq!(trie.nodes.len(), scratch.nodes.len());
        for v in 0..trie.nodes.len() {
            let s = trie.string_of(v);
            let w = scratch.node_of(&s).unwrap();
            assert_eq!(trie.nodes[v].occ, scratch.nodes[w].occ);
            assert_eq!(
                trie.nodes[v].children.keys().collect::<Vec<_>>(),
                scratch.nodes[w].children.keys().collect::<Vec<_>>()
            );
        }
    }
}
