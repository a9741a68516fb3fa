//! Longest-path tree: the spanning tree of the DAWG's primary edges.
//!
//! Every DAWG node owns one LPT node sitting at string depth `long_len`;
//! the tree relation is "source of the unique primary in-edge". Because a
//! split reuses the split node's index for the half keeping the longest
//! member, and only redirects secondary edges below the clone's length,
//! LPT positions never move: growth is purely by leaf insertion (the sink,
//! and the clone under the node whose redirected edge became primary).
//!
//! Nodes are marked once their DAWG class becomes branching (out-degree
//! ≥ 2); a marked node is cross-linked to the suffix-tree node spelling its
//! longest member. The link can lag by part of a step: a node that becomes
//! branching now gets its suffix-tree partner only during the tree update
//! of the same step, so fresh marks sit on a pending list until then.
//!
//! Order within one step matters: `insert_leaves` first (the new update's
//! repeated-suffix class may be the fresh clone), then `locate_lrs` — which
//! must run against the *old* mark set, before `commit_marks`. Committing
//! first would let the locate query land on a node whose link is still
//! pending: appending 'a' to "aba" makes the repeated-suffix class [a]
//! newly branching and also the locate start. Old marks are sufficient
//! above the start: every branching proper prefix of a class's longest
//! member was already branching before the update.
//!
//! In-edge labels are pairs ⟨h, j⟩: the class's longest member ends at
//! position j of text h. The pair is written at creation and stays valid
//! forever — texts only grow and splits keep the longest member with the
//! node index — so any character of the longest member (and of every class
//! member, which are its suffixes) can be read off the text store.

use crate::dawg::{Dawg, DawgUpdate, NodeId, SOURCE};
use crate::dyntree::{DynNodeId, DynTree};
use crate::text::TextStore;

/// Handle of a suffix-tree node; opaque here.
pub type StreeHandle = usize;

#[derive(Debug, Clone, Copy)]
pub struct LptNode {
    pub dt_handle: DynNodeId,
    /// ⟨h, j⟩: the longest class member ends at position j of text h.
    /// `None` only for the source.
    pub label_in: Option<(usize, usize)>,
    /// Suffix-tree node spelling the longest class member; set for the
    /// source at construction, and for every other node once marked and
    /// linked.
    pub stree_link: Option<StreeHandle>,
}

/// Start locus for the new-leaf insertions of one update: the longest
/// already-present suffix of the grown text, as (lowest linked ancestor,
/// first character below it, character count below it).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocateRef {
    pub base: StreeHandle,
    /// `None` iff `len == 0`.
    pub first_char: Option<char>,
    pub len: usize,
}

#[derive(Debug)]
pub struct Lpt {
    /// Indexed by DAWG node id.
    nodes: Vec<LptNode>,
    dt: DynTree,
    /// Inverse of `dt_handle`.
    dt_to_dawg: Vec<NodeId>,
    /// Marked this step, awaiting their suffix-tree partners: (DAWG node,
    /// long length), sorted by length ascending when taken.
    pending: Vec<(NodeId, usize)>,
}

impl Lpt {
    pub fn new(stree_root: StreeHandle) -> Lpt {
        let dt = DynTree::new(false);
        let root = dt.root();
        Lpt {
            nodes: vec![LptNode {
                dt_handle: root,
                label_in: None,
                stree_link: Some(stree_root),
            }],
            dt,
            dt_to_dawg: vec![SOURCE],
            pending: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.len() <= 1
    }

    pub fn node(&self, v: NodeId) -> &LptNode {
        &self.nodes[v]
    }

    pub fn is_marked(&self, v: NodeId) -> bool {
        self.dt.is_marked(self.nodes[v].dt_handle)
    }

    /// LPT parent of `v`: the source of its primary in-edge.
    pub fn parent(&self, v: NodeId) -> Option<NodeId> {
        self.dt
            .parent(self.nodes[v].dt_handle)
            .map(|d| self.dt_to_dawg[d])
    }

    pub fn dyntree_stats(&self) -> crate::dyntree::DynTreeStats {
        self.dt.stats()
    }

    /// Phase 1 of a step: add leaves for the nodes the DAWG update created.
    /// Both get the label ⟨k, |T_k|⟩ — each one's longest member is a
    /// suffix of the grown text, ending at its new end.
    pub fn insert_leaves(&mut self, up: &DawgUpdate) {
        let label = (up.text_id, up.new_len);
        if let Some(sink) = up.new_sink {
            self.push_leaf(sink, up.old_act, label);
        }
        if let Some(split) = up.split {
            self.push_leaf(split.clone, split.found_node, label);
        }
    }

    fn push_leaf(&mut self, v: NodeId, parent: NodeId, label: (usize, usize)) {
        assert_eq!(v, self.nodes.len(), "LPT and DAWG ids must stay in step");
        let dt_handle = self.dt.insert_leaf(self.nodes[parent].dt_handle);
        self.nodes.push(LptNode {
            dt_handle,
            label_in: Some(label),
            stree_link: None,
        });
        debug_assert_eq!(self.dt_to_dawg.len(), dt_handle);
        self.dt_to_dawg.push(v);
    }

    /// Phase 2: locate the longest repeated suffix of the grown text in the
    /// suffix tree. Runs over the marks committed by *previous* steps; the
    /// current update's leaves must already be inserted.
    ///
    /// The walk starts at the repeated-suffix class `y` and takes the
    /// nearest marked ancestor `v` (inclusive; the unmarked source stands
    /// in when nothing is marked). The locus is then `len` characters below
    /// v's tree partner, and the first of them is read off y's in-edge
    /// label: y's longest member is the repeated suffix, ending at ⟨h, j⟩,
    /// so the character entering depth |long(v)| + 1 sits at j − len + 1.
    pub fn locate_lrs(&self, store: &TextStore, dawg: &Dawg, up: &DawgUpdate) -> LocateRef {
        let y = up.lrs_node;
        let v = self
            .dt
            .nma(self.nodes[y].dt_handle, true)
            .map(|d| self.dt_to_dawg[d])
            .unwrap_or(SOURCE);
        let len = dawg.long_len(y) - dawg.long_len(v);
        let first_char = if len == 0 {
            None
        } else {
            let (h, j) = self.nodes[y].label_in.expect("non-source has a label");
            Some(store.at(h, j - len + 1))
        };
        let base = self.nodes[v]
            .stree_link
            .expect("marked ancestors always carry their tree link");
        LocateRef {
            base,
            first_char,
            len,
        }
    }

    /// Phase 3: mark everything that became branching in this update and
    /// stash it for linking. The source never waits: its tree partner is
    /// the root, linked from birth.
    pub fn commit_marks(&mut self, up: &DawgUpdate) {
        for &(v, long_len) in &up.newly_branching {
            self.dt.mark(self.nodes[v].dt_handle);
            if v != SOURCE {
                self.pending.push((v, long_len));
            }
        }
        if let Some(split) = up.split {
            if split.born_branching {
                self.dt.mark(self.nodes[split.clone].dt_handle);
                self.pending.push((split.clone, up.lrs_len));
            }
        }
        self.pending.sort_unstable_by_key(|&(_, len)| len);
    }

    /// Marked-but-unlinked nodes of the current step, shortest first. The
    /// caller owns resolving every one before the step ends.
    pub fn take_pending(&mut self) -> Vec<(NodeId, usize)> {
        std::mem::take(&mut self.pending)
    }

    pub fn set_stree_link(&mut self, v: NodeId, tree: StreeHandle) {
        debug_assert!(self.is_marked(v), "links belong to marked nodes");
        debug_assert!(self.nodes[v].stree_link.is_none(), "link set twice");
        self.nodes[v].stree_link = Some(tree);
    }

    /// Full label ⟨h, i, j⟩ for the upper part of a lazily-labeled edge
    /// being split `len` characters below its parent node, whose string is
    /// a member of class `start` and continues with `c`.
    ///
    /// The read goes through the DAWG's c-edge from `start`: the target's
    /// in-label ⟨h, j⟩ ends an occurrence of the target's longest member,
    /// hence of every member — in particular of (parent string)·c — and
    /// interior edge loci continue uniquely, so T_h[j .. j+len−1] spells
    /// the edge as long as it stays inside T_h. Returns `None` when the
    /// c-edge is gone (the parent's string can migrate to a clone whose
    /// longer ex-classmates lack the continuation) or the span overruns
    /// text h; the caller then labels from the updating text instead.
    pub fn label_for_descent(
        &self,
        store: &TextStore,
        dawg: &Dawg,
        start: NodeId,
        c: char,
        len: usize,
    ) -> Option<(usize, usize, usize)> {
        debug_assert!(len >= 1);
        let (target, _) = dawg.edge(start, c)?;
        let (h, j) = self.nodes[target].label_in.expect("non-source has a label");
        debug_assert_eq!(store.at(h, j), c);
        if j + len - 1 <= store.len(h) {
            Some((h, j, j + len - 1))
        } else {
            None
        }
    }
}
