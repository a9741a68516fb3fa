//! Export of the suffix-link tree read as the suffix tree of the reversed
//! texts. Each class stands for the reverse of its longest member, its
//! parent is its suffix link, and the connecting edge spells the reversed
//! extension, recovered from the longest-path tree's position labels.

use crate::dawg::{Dawg, NodeId, SOURCE};
use crate::lpt::Lpt;
use crate::text::TextStore;

#[derive(Debug, Clone)]
pub struct RevNode {
    /// Suffix link of the class; `None` for the root.
    pub parent: Option<NodeId>,
    /// Edge label from the parent, spelled in reversed-text order.
    pub label: Vec<char>,
    /// Length of the (reversed) longest member this node stands for.
    pub depth: usize,
    /// How many reversed-text suffixes end exactly here.
    pub suffix_marks: u64,
    /// Children ordered by the first character of their edge labels.
    pub children: Vec<NodeId>,
}

/// A tree over the DAWG's node ids; the root is the source class.
#[derive(Debug, Clone)]
pub struct RevTree {
    nodes: Vec<RevNode>,
}

impl RevTree {
    pub fn root(&self) -> NodeId {
        SOURCE
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, v: NodeId) -> &RevNode {
        &self.nodes[v]
    }
}

/// Read the reverse suffix tree off the current structures. With
/// `require_markers`, first verifies that every text begins with its own
/// marker character occurring nowhere else; the exported tree is then the
/// plain suffix tree of the reversed texts, every suffix a leaf. Without
/// markers the tree is the same object, with suffix ends of the reversed
/// texts explicit even where they do not branch.
pub fn export_reverse_suffix_tree(
    store: &TextStore,
    dawg: &Dawg,
    lpt: &Lpt,
    require_markers: bool,
) -> Result<RevTree, String> {
    if require_markers {
        verify_markers(store)?;
    }
    let mut nodes: Vec<RevNode> = (0..dawg.len())
        .map(|v| RevNode {
            parent: None,
            label: Vec::new(),
            depth: dawg.long_len(v),
            suffix_marks: dawg.prefix_count(v),
            children: Vec::new(),
        })
        .collect();
    for v in 1..dawg.len() {
        let parent = dawg.slink(v).expect("only the source lacks a suffix link");
        let upper = dawg.long_len(parent);
        let (h, j) = lpt
            .node(v)
            .label_in
            .expect("only the source lacks a position label");
        // The longest member occupies T_h[j-depth+1 ..= j]; past the
        // parent's portion, its reverse reads positions j-upper down to
        // j-depth+1.
        let label: Vec<char> = (j - nodes[v].depth + 1..=j - upper)
            .rev()
            .map(|i| store.at(h, i))
            .collect();
        debug_assert_eq!(nodes[v].depth, upper + label.len());
        nodes[v].parent = Some(parent);
        nodes[v].label = label;
        nodes[parent].children.push(v);
    }
    for v in 0..nodes.len() {
        let mut children = std::mem::take(&mut nodes[v].children);
        children.sort_by_key(|&u| nodes[u].label[0]);
        debug_assert!(
            children.windows(2).all(|w| nodes[w[0]].label[0] != nodes[w[1]].label[0]),
            "sibling edges start with distinct characters"
        );
        debug_assert!(
            v == SOURCE || !children.is_empty() || nodes[v].suffix_marks > 0,
            "an unmarked node always branches further"
        );
        nodes[v].children = children;
    }
    Ok(RevTree { nodes })
}

/// Every text must start with a character unique to it and absent from
/// every other position of the collection.
fn verify_markers(store: &TextStore) -> Result<(), String> {
    let mut markers = std::collections::BTreeMap::new();
    for k in 1..=store.text_count() {
        let c = store.at(k, 1);
        if let Some(other) = markers.insert(c, k) {
            return Err(format!("texts {other} and {k} share the first character {c:?}"));
        }
    }
    for k in 1..=store.text_count() {
        for i in 2..=store.len(k) {
            if let Some(&owner) = markers.get(&store.at(k, i)) {
                return Err(format!(
                    "text {owner}'s marker {:?} reappears at position {i} of text {k}",
                    store.at(k, i)
                ));
            }
        }
    }
    Ok(())
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

    fn export(index: &OnlineIndex, markers: bool) -> Result<RevTree, String> {
        export_reverse_suffix_tree(index.store(), index.dawg(), index.lpt(), markers)
    }

    fn spell(tree: &RevTree, path: &str) -> NodeId {
        let mut v = tree.root();
        let mut want: Vec<char> = path.chars().collect();
        want.reverse();
        while !want.is_empty() {
            let &next = tree
                .node(v)
                .children
                .iter()
                .find(|&&u| tree.node(u).label[0] == *want.last().unwrap())
                .unwrap_or_else(|| panic!("no edge for {:?} under {v}", want.last()));
            for &c in &tree.node(next).label {
                assert_eq!(Some(c), want.pop(), "edge into {next} diverges");
            }
            v = next;
        }
        v
    }

    #[test]
    fn single_marked_text_has_two_leaves() {
        let index = index_of(&["0a"]);
        let tree = export(&index, true).unwrap();
        assert_eq!(tree.len(), 3);
        let root = tree.node(tree.root());
        assert_eq!(root.depth, 0);
        assert_eq!(root.suffix_marks, 1, "the empty suffix of the one text");
        assert_eq!(root.children.len(), 2);
        let zero = spell(&tree, "0");
        let a0 = spell(&tree, "a0");
        assert_eq!(tree.node(zero).label, vec!['0']);
        assert_eq!(tree.node(zero).depth, 1);
        assert_eq!(tree.node(a0).label, vec!['a', '0']);
        assert_eq!(tree.node(a0).depth, 2);
        for leaf in [zero, a0] {
            assert!(tree.node(leaf).children.is_empty());
            assert_eq!(tree.node(leaf).suffix_marks, 1);
            assert_eq!(tree.node(leaf).parent, Some(tree.root()));
        }
    }

    #[test]
    fn two_marked_texts_share_branching_nodes() {
        let index = index_of(&["0ab", "1ba"]);
        let tree = export(&index, true).unwrap();
        // Reversed texts ba0 and ab1: six suffixes, all leaves, plus the
        // root and the branching nodes a and b.
        assert_eq!(tree.len(), 9);
        let chars: Vec<char> = tree
            .node(tree.root())
            .children
            .iter()
            .map(|&u| tree.node(u).label[0])
            .collect();
        assert_eq!(chars, vec!['0', '1', 'a', 'b']);
        let a = spell(&tree, "a");
        let b = spell(&tree, "b");
        assert_eq!(tree.node(a).children.len(), 2);
        assert_eq!(tree.node(b).children.len(), 2);
        assert_eq!(tree.node(spell(&tree, "ba0")).label, vec!['a', '0']);
        assert_eq!(tree.node(spell(&tree, "ab1")).label, vec!['b', '1']);
        for path in ["ba0", "a0", "0", "ab1", "b1", "1"] {
            let v = spell(&tree, path);
            assert!(tree.node(v).children.is_empty(), "{path} ends in a leaf");
            assert_eq!(tree.node(v).depth, path.len());
            assert_eq!(tree.node(v).suffix_marks, 1);
        }
    }

    #[test]
    fn unmarked_suffix_ends_stay_explicit() {
        // Text aa reversed is aa; the suffix a ends inside the aa path yet
        // owns a node, because a and aa lie in different classes.
        let index = index_of(&["aa"]);
        let tree = export(&index, false).unwrap();
        assert_eq!(tree.len(), 3);
        let a = spell(&tree, "a");
        let aa = spell(&tree, "aa");
        assert_eq!(tree.node(a).children, vec![aa]);
        assert_eq!(tree.node(a).suffix_marks, 1);
        assert_eq!(tree.node(aa).label, vec!['a']);
        assert_eq!(tree.node(aa).parent, Some(a));
    }

    #[test]
    fn repeated_first_characters_are_rejected() {
        let index = index_of(&["ab", "ac"]);
        let err = export(&index, true).unwrap_err();
        assert!(err.contains("share the first character"), "{err}");
        assert!(export(&index, false).is_ok());
    }

    #[test]
    fn reappearing_marker_is_rejected() {
        let index = index_of(&["0ab0"]);
        let err = export(&index, true).unwrap_err();
        assert!(err.contains("reappears"), "{err}");
    }

    #[test]
    fn empty_collection_exports_a_lone_root() {
        let index = OnlineIndex::new("walkup").unwrap();
        let tree = export(&index, true).unwrap();
        assert_eq!(tree.len(), 1);
        assert_eq!(tree.node(tree.root()).suffix_marks, 0);
        assert!(tree.node(tree.root()).children.is_empty());
    }
}
