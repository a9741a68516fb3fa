//! Lock-step structural comparison between the online suffix tree and the
//! definitional growing trie.
//!
//! The trie knows ground truth. The compacted tree keeps the root, every
//! branching trie node, and every childless trie node (strings with no
//! right extension), with the unary runs between them collapsed into
//! edges. `check_stree` walks both structures together, pinning one trie
//! node to each explicit tree node while verifying depths, child
//! alphabets, and edge labels character by character against the trie —
//! any occurrence spelling the right string is accepted, positions are the
//! implementation's business. Count identities then force the mapping to
//! be a bijection. Suffix links are checked against the trie's own, and
//! left-extension links must be exactly the inverse of (suffix link,
//! leading character), nothing more and nothing less. Live leaves must
//! still be lazy — growth never rewrites them — and after `finalize`
//! every leaf label must spell the full path to its childless trie node.

use crate::trie::{GrowingTrie, ROOT};
use growdex::stree::{EdgeLabel, StNodeId, Stree, ST_ROOT};
use growdex::text::TextStore;

/// Full structural check; `Err` carries a human-readable mismatch.
pub fn check_stree(store: &TextStore, trie: &GrowingTrie, tree: &Stree) -> Result<(), String> {
    let mut trie_of: Vec<Option<usize>> = vec![None; tree.len()];
    let mut first_of: Vec<Option<char>> = vec![None; tree.len()];
    let mut stack: Vec<(StNodeId, usize)> = vec![(ST_ROOT, ROOT)];
    let mut internal_seen = 0usize;
    let mut leaf_seen = 0usize;
    let mut rslink_entries = 0usize;
    trie_of[ST_ROOT] = Some(ROOT);

    while let Some((av, tv)) = stack.pop() {
        internal_seen += 1;
        if tree.str_depth(av) != trie.nodes[tv].depth {
            return Err(format!(
                "node {av}: depth {} but its string (trie {tv}) has depth {}",
                tree.str_depth(av),
                trie.nodes[tv].depth
            ));
        }
        if av != ST_ROOT && trie.nodes[tv].children.len() < 2 {
            return Err(format!(
                "internal node {av} sits on a non-branching substring (trie {tv})"
            ));
        }
        let tree_keys: Vec<char> = tree.children(av).map(|(c, _)| c).collect();
        let trie_keys: Vec<char> = trie.nodes[tv].children.keys().copied().collect();
        if tree_keys != trie_keys {
            return Err(format!(
                "node {av}: child keys {tree_keys:?} ≠ trie continuations {trie_keys:?}"
            ));
        }
        rslink_entries += tree.rslinks(av).count();

        for (c, child) in tree.children(av) {
            let leading = if av == ST_ROOT { c } else { first_of[av].unwrap() };
            if tree.is_leaf(child) {
                leaf_seen += 1;
                if tree.slink(child).is_some() {
                    return Err(format!("leaf {child} carries a suffix link"));
                }
                if tree.rslinks(child).next().is_some() {
                    return Err(format!("leaf {child} owns left-extension links"));
                }
                match tree.label_in(child) {
                    Some(EdgeLabel::Lazy { first }) => {
                        if tree.is_finalized() {
                            return Err(format!("leaf {child} still lazy after finalize"));
                        }
                        if first != c {
                            return Err(format!(
                                "leaf {child}: lazy first {first:?} ≠ its key {c:?}"
                            ));
                        }
                    }
                    Some(EdgeLabel::Full { text, start, end }) => {
                        if !tree.is_finalized() {
                            return Err(format!("live leaf {child} has a full label"));
                        }
                        let x = walk_label(store, trie, tv, c, text, start, end)
                            .map_err(|e| format!("leaf {child}: {e}"))?;
                        if !trie.nodes[x].children.is_empty() {
                            return Err(format!(
                                "leaf {child}: its string extends right (trie {x})"
                            ));
                        }
                        if tree.str_depth(child) != trie.nodes[x].depth {
                            return Err(format!(
                                "leaf {child}: depth {} ≠ spelled depth {}",
                                tree.str_depth(child),
                                trie.nodes[x].depth
                            ));
                        }
                    }
                    None => return Err(format!("leaf {child} has no in-edge")),
                }
            } else {
                let Some(EdgeLabel::Full { text, start, end }) = tree.label_in(child) else {
                    return Err(format!("internal edge to {child} is not fully labeled"));
                };
                let x = walk_label(store, trie, tv, c, text, start, end)
                    .map_err(|e| format!("edge to {child}: {e}"))?;
                trie_of[child] = Some(x);
                first_of[child] = Some(leading);
                stack.push((child, x));
            }
        }
    }

    // The walk injects explicit nodes into {root} ∪ branching ∪ childless;
    // equal counts make it onto.
    let mut branching_nonroot = 0usize;
    let mut childless = 0usize;
    for v in 1..trie.nodes.len() {
        match trie.nodes[v].children.len() {
            0 => childless += 1,
            d if d >= 2 => branching_nonroot += 1,
            _ => {}
        }
    }
    if internal_seen != branching_nonroot + 1 {
        return Err(format!(
            "{internal_seen} internal nodes for {branching_nonroot} branching substrings"
        ));
    }
    if leaf_seen != childless {
        return Err(format!(
            "{leaf_seen} leaves for {childless} right-nonextensible substrings"
        ));
    }
    if tree.len() != internal_seen + leaf_seen {
        return Err(format!(
            "{} nodes total but {internal_seen} internal + {leaf_seen} leaves reached",
            tree.len()
        ));
    }

    // Suffix links against the trie's, and the left-extension exchange:
    // every internal non-root node is the target of exactly one link,
    // owned by its suffix-link partner under its leading character.
    if tree.slink(ST_ROOT).is_some() {
        return Err("the root carries a suffix link".into());
    }
    for av in 1..tree.len() {
        if tree.is_leaf(av) {
            continue;
        }
        let tv = trie_of[av].expect("count identities leave no internal node unvisited");
        let Some(z) = tree.slink(av) else {
            return Err(format!("internal node {av} lacks a suffix link"));
        };
        let expect = trie.nodes[tv].slink.expect("non-root trie nodes have suffix links");
        if trie_of.get(z).copied().flatten() != Some(expect) {
            return Err(format!(
                "suffix link of {av} lands on {z}, not its string minus one character"
            ));
        }
        let b = first_of[av].expect("visited internal nodes know their leading character");
        if tree.rslink(z, b) != Some(av) {
            return Err(format!(
                "left extension of {z} by {b:?} should be {av}, got {:?}",
                tree.rslink(z, b)
            ));
        }
    }
    if rslink_entries != internal_seen - 1 {
        return Err(format!(
            "{rslink_entries} left-extension links for {} internal non-root nodes",
            internal_seen - 1
        ));
    }
    Ok(())
}

/// Walk one edge label through the trie: it must continue the path with
/// the edge's key, stay unary strictly inside, and it returns the node it
/// lands on.
fn walk_label(
    store: &TextStore,
    trie: &GrowingTrie,
    from: usize,
    key: char,
    text: usize,
    start: usize,
    end: usize,
) -> Result<usize, String> {
    if text < 1 || text > store.text_count() || start < 1 || end > store.len(text) || start > end {
        return Err(format!("label ⟨{text},{start},{end}⟩ out of bounds"));
    }
    if store.at(text, start) != key {
        return Err(format!(
            "label ⟨{text},{start},{end}⟩ starts with {:?}, key is {key:?}",
            store.at(text, start)
        ));
    }
    let mut x = from;
    for p in start..=end {
        let ch = store.at(text, p);
        x = match trie.nodes[x].children.get(&ch) {
            Some(&y) => y,
            None => {
                return Err(format!(
                    "label ⟨{text},{start},{end}⟩ spells a string leaving the trie at {ch:?}"
                ))
            }
        };
        if p != end && trie.nodes[x].children.len() != 1 {
            return Err(format!(
                "label ⟨{text},{start},{end}⟩ passes through an explicit string at depth {}",
                trie.nodes[x].depth
            ));
        }
    }
    Ok(x)
}
