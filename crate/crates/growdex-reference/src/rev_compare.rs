//! Naive reference for the reverse-tree export: an uncompacted trie of
//! every suffix of every reversed text, checked edge by edge against the
//! exported tree. Suffix ends carry multiplicity marks, so the comparison
//! also pins which nodes must stay explicit without branching.

use growdex::rstree::RevTree;
use growdex::text::TextStore;
use std::collections::BTreeMap;

struct TrieNode {
    children: BTreeMap<char, usize>,
    marks: u64,
}

/// Trie over every reversed prefix of the current texts: inserting text k
/// up to position j walks T_k[j], T_k[j-1], …, T_k[1] and marks the end.
/// The empty prefix of each text marks the root.
fn naive_rev_trie(store: &TextStore) -> Vec<TrieNode> {
    let mut nodes = vec![TrieNode { children: BTreeMap::new(), marks: 0 }];
    for k in 1..=store.text_count() {
        for j in 0..=store.len(k) {
            let mut cur = 0;
            for i in (1..=j).rev() {
                let c = store.at(k, i);
                cur = match nodes[cur].children.get(&c) {
                    Some(&next) => next,
                    None => {
                        let next = nodes.len();
                        nodes.push(TrieNode { children: BTreeMap::new(), marks: 0 });
                        nodes[cur].children.insert(c, next);
                        next
                    }
                };
            }
            nodes[cur].marks += 1;
        }
    }
    nodes
}

/// Compare the exported tree against the trie: same branching characters
/// everywhere, every edge label walkable with strictly unary unmarked
/// interiors, matching suffix-mark multiplicities, and no unreachable
/// exported nodes.
pub fn check_rev_tree(store: &TextStore, tree: &RevTree) -> Result<(), String> {
    let trie = naive_rev_trie(store);
    let mut visited = 0usize;
    let mut stack = vec![(tree.root(), 0usize)];
    while let Some((av, tv)) = stack.pop() {
        visited += 1;
        let a = tree.node(av);
        if a.suffix_marks != trie[tv].marks {
            return Err(format!(
                "node {av} claims {} suffix ends, texts show {}",
                a.suffix_marks, trie[tv].marks
            ));
        }
        let tree_chars: Vec<char> = a.children.iter().map(|&u| tree.node(u).label[0]).collect();
        let trie_chars: Vec<char> = trie[tv].children.keys().copied().collect();
        if tree_chars != trie_chars {
            return Err(format!(
                "node {av} branches on {tree_chars:?}, texts show {trie_chars:?}"
            ));
        }
        for &u in &a.children {
            let label = &tree.node(u).label;
            let mut t = tv;
            for (step, &c) in label.iter().enumerate() {
                if step > 0 {
                    if trie[t].children.len() != 1 {
                        return Err(format!("edge into {u} runs through a branching point"));
                    }
                    if trie[t].marks != 0 {
                        return Err(format!("edge into {u} hides a suffix end"));
                    }
                }
                t = match trie[t].children.get(&c) {
                    Some(&next) => next,
                    None => return Err(format!("edge into {u} spells {c:?} off the texts")),
                };
            }
            if tree.node(u).depth != a.depth + label.len() {
                return Err(format!(
                    "node {u} at depth {} under depth {} via {} characters",
                    tree.node(u).depth,
                    a.depth,
                    label.len()
                ));
            }
            stack.push((u, t));
        }
    }
    if visited != tree.len() {
        return Err(format!(
            "{} exported nodes, {visited} reachable from the root",
            tree.len()
        ));
    }
    Ok(())
}
