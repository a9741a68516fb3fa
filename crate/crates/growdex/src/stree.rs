//! Generalized suffix tree over a growing text collection, maintained one
//! appended character at a time, in lockstep with the DAWG and its
//! longest-path tree.
//!
//! Leaf edges are lazy: only their first character is stored, and a leaf
//! spells whatever suffix currently reaches deepest through it. An append
//! can silently hand a leaf over to another text — the suffix that used to
//! end there keeps its path, it just stops being the deepest — and nothing
//! structural happens. Real work is confined to the new suffix lengths the
//! DAWG update reports: each one gets a fresh lazy leaf, hung either off an
//! existing node or off a node created by splitting one edge. Internal
//! edges are always fully labeled; the upper half of a split lazy edge gets
//! its span through the longest-path tree, falling back to the updating
//! text's own positions when no recorded occurrence covers the span.
//!
//! Insertion points come from left extensions. The node for the previous
//! (one character shorter) suffix is extended on the left through a
//! reversed suffix link owned by one of its ancestors; picking the owner is
//! delegated to a pluggable oracle, and the landing is then at most one
//! edge above the target. The root's own links stand in when the oracle
//! finds nothing, and a missing root link means no explicit node starts
//! with that character at all, so the descent simply starts at the root.
//!
//! `finalize` pins the leaves down: every text's suffixes are walked
//! longest to shortest, the deepest suffix reaching through each leaf wins
//! it, and the leaf's edge becomes a full span of the winning text. The
//! tree refuses appends afterwards.

use std::collections::{BTreeMap, BTreeSet};

use crate::dawg::{Dawg, DawgUpdate, NodeId, SOURCE};
use crate::dyntree::{DynNodeId, DynTree};
use crate::lpt::{LocateRef, Lpt};
use crate::oracle::SuffixTreeOracle;
use crate::text::TextStore;

pub type StNodeId = usize;

/// The root: depth zero, no in-edge, never a leaf.
pub const ST_ROOT: StNodeId = 0;

/// In-edge label. `Full` spells text[start ..= end] (1-based, inclusive);
/// `Lazy` is a leaf edge, known only by its first character until the tree
/// is finalized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeLabel {
    Full { text: usize, start: usize, end: usize },
    Lazy { first: char },
}

#[derive(Debug)]
struct StNode {
    /// Characters from the root. For a live leaf this is the depth at
    /// creation time — the spelled string only grows afterwards — and it
    /// becomes exact when the tree is finalized.
    str_depth: usize,
    /// `None` only for the root. `Lazy` if and only if the node is a leaf.
    in_edge: Option<EdgeLabel>,
    children: BTreeMap<char, StNodeId>,
    /// Longest proper suffix of this node's string; internal nodes only.
    slink: Option<StNodeId>,
    /// rslinks[b] spells b · (this node's string).
    rslinks: BTreeMap<char, StNodeId>,
    dt_handle: DynNodeId,
    /// A DAWG class whose longest member ends with this node's string;
    /// class longest members never change, so the hint stays valid. Used
    /// to label the upper half when one of this node's lazy child edges
    /// is split.
    lpt_hint: NodeId,
}

/// What one append did to the tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct StreeUpdate {
    pub created_branches: usize,
    pub created_leaves: usize,
    /// Insertion points that were already explicit nodes.
    pub reused_at_node: usize,
    pub split_full: usize,
    pub split_lazy: usize,
    pub oracle_queries: usize,
    /// Times the image fell back to the root itself (no explicit node
    /// starts with the wanted character yet).
    pub root_descents: usize,
    /// Upper labels taken from the updating text because the longest-path
    /// tree had no occurrence covering the span.
    pub label_fallbacks: usize,
    /// Fresh marks handed their tree partners this step.
    pub resolved_links: usize,
    /// The clone's link had to wait for the insertion loop (the repeated
    /// suffix was implicit, which forces a trailing single-character run).
    pub deferred_clone_link: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StreeStats {
    pub nodes: usize,
    pub leaves: usize,
    pub slinks: usize,
    pub rslinks: usize,
    pub oracle_queries: u64,
    pub root_descents: u64,
    pub label_fallbacks: u64,
    pub finalized: bool,
}

#[derive(Debug)]
pub struct Stree {
    nodes: Vec<StNode>,
    dt: DynTree,
    /// Inverse of `dt_handle`.
    dt_to_node: Vec<StNodeId>,
    seen_chars: BTreeSet<char>,
    finalized: bool,
    oracle_queries: u64,
    root_descents: u64,
    label_fallbacks: u64,
}

impl Stree {
    pub fn new() -> Stree {
        let dt = DynTree::new(false);
        let root_dt = dt.root();
        Stree {
            nodes: vec![StNode {
                str_depth: 0,
                in_edge: None,
                children: BTreeMap::new(),
                slink: None,
                rslinks: BTreeMap::new(),
                dt_handle: root_dt,
                lpt_hint: SOURCE,
            }],
            dt,
            dt_to_node: vec![ST_ROOT],
            seen_chars: BTreeSet::new(),
            finalized: false,
            oracle_queries: 0,
            root_descents: 0,
            label_fallbacks: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.len() == 1
    }

    pub fn str_depth(&self, v: StNodeId) -> usize {
        self.nodes[v].str_depth
    }

    pub fn label_in(&self, v: StNodeId) -> Option<EdgeLabel> {
        self.nodes[v].in_edge
    }

    pub fn slink(&self, v: StNodeId) -> Option<StNodeId> {
        self.nodes[v].slink
    }

    pub fn rslink(&self, v: StNodeId, b: char) -> Option<StNodeId> {
        self.nodes[v].rslinks.get(&b).copied()
    }

    pub fn rslinks(&self, v: StNodeId) -> impl Iterator<Item = (char, StNodeId)> + '_ {
        self.nodes[v].rslinks.iter().map(|(&c, &u)| (c, u))
    }

    pub fn child(&self, v: StNodeId, c: char) -> Option<StNodeId> {
        self.nodes[v].children.get(&c).copied()
    }

    pub fn children(&self, v: StNodeId) -> impl Iterator<Item = (char, StNodeId)> + '_ {
        self.nodes[v].children.iter().map(|(&c, &u)| (c, u))
    }

    pub fn out_degree(&self, v: StNodeId) -> usize {
        self.nodes[v].children.len()
    }

    pub fn is_leaf(&self, v: StNodeId) -> bool {
        self.nodes[v].children.is_empty()
    }

    pub fn parent(&self, v: StNodeId) -> Option<StNodeId> {
        self.dt
            .parent(self.nodes[v].dt_handle)
            .map(|d| self.dt_to_node[d])
    }

    pub fn is_finalized(&self) -> bool {
        self.finalized
    }

    /// Preorder comparison of two nodes in the current tree shape.
    pub fn dt_preorder_cmp(&self, u: StNodeId, v: StNodeId) -> std::cmp::Ordering {
        self.dt
            .preorder_cmp(self.nodes[u].dt_handle, self.nodes[v].dt_handle)
    }

    pub fn dt_is_ancestor(&self, u: StNodeId, v: StNodeId) -> bool {
        self.dt
            .is_ancestor(self.nodes[u].dt_handle, self.nodes[v].dt_handle)
    }

    pub fn stats(&self) -> StreeStats {
        let leaves = self.nodes.iter().filter(|n| n.children.is_empty()).count();
        StreeStats {
            nodes: self.nodes.len(),
            leaves,
            slinks: self.nodes.iter().filter(|n| n.slink.is_some()).count(),
            rslinks: self.nodes.iter().map(|n| n.rslinks.len()).sum(),
            oracle_queries: self.oracle_queries,
            root_descents: self.root_descents,
            label_fallbacks: self.label_fallbacks,
            finalized: self.finalized,
        }
    }

    /// Apply one append. The text store must already hold the character,
    /// and the longest-path tree must already hold this update's leaves;
    /// mark bookkeeping for the step happens in here, in order.
    pub fn extend(
        &mut self,
        store: &TextStore,
        dawg: &Dawg,
        lpt: &mut Lpt,
        oracle: &mut dyn SuffixTreeOracle,
        up: &DawgUpdate,
    ) -> StreeUpdate {
        assert!(!self.finalized, "a finalized tree refuses appends");
        let k = up.text_id;
        let a = up.ch;
        let n = up.new_len;
        if self.seen_chars.insert(a) {
            let sigma = self.seen_chars.len();
            oracle.note_alphabet(self, sigma);
        }

        // The locate must run against the marks of previous steps.
        let loc = lpt.locate_lrs(store, dawg, up);
        lpt.commit_marks(up);
        let mut pending = lpt.take_pending();
        let mut stat = StreeUpdate::default();

        // A branching clone's longest member is the repeated suffix itself.
        // When that string already has its own node, link it now; otherwise
        // it is implicit, which forces the text to end in a run of one
        // character, and the loop's first insertion creates exactly it.
        if let Some(split) = up.split {
            if split.born_branching {
                let pos = pending
                    .iter()
                    .position(|&(v, _)| v == split.clone)
                    .expect("a branching clone waits on the pending list");
                if let Some(node) = self.locate_exact(store, k, n, up.lrs_len, loc) {
                    lpt.set_stree_link(split.clone, node);
                    pending.remove(pos);
                    stat.resolved_links += 1;
                } else {
                    stat.deferred_clone_link = true;
                    debug_assert!(
                        !up.new_suffix_lens.is_empty(),
                        "an implicit repeated suffix is about to branch"
                    );
                }
            }
        }

        if up.new_suffix_lens.is_empty() {
            assert!(pending.is_empty(), "fresh marks outside an insertion step");
            return stat;
        }
        let sink = up
            .new_sink
            .expect("an insertion step opens a new class for the grown text");

        // Node spelling the repeated suffix minus its final character: the
        // chain of left extensions starts from it. That string is always
        // explicit here — it extends rightwards in at least two ways.
        let mut prev = if up.lrs_len == 0 {
            ST_ROOT
        } else {
            assert!(
                loc.len <= 1,
                "the insertion start is at most one character under a linked node"
            );
            if loc.len == 1 {
                loc.base
            } else {
                debug_assert!(
                    matches!(
                        self.nodes[loc.base].in_edge,
                        Some(EdgeLabel::Full { start, end, .. }) if start == end
                    ),
                    "one left of an explicit repeated suffix is explicit too"
                );
                self.parent(loc.base).expect("non-root nodes have parents")
            }
        };

        // Deepest already-walked node of the DAWG's extension chain whose
        // longest member still covers the current length; the chain is
        // ordered longest first, so one reverse pointer serves all lengths.
        let chain = &up.chain_visited;
        let mut ci = chain.len() - 1;
        let mut pi = 0;

        for len in up.new_suffix_lens.clone() {
            let lambda = len - 1;
            let b = store.at(k, n - len + 1);
            let branch = if lambda == 0 {
                debug_assert!(
                    !self.nodes[ST_ROOT].children.contains_key(&a),
                    "a single fresh character cannot be in the tree yet"
                );
                ST_ROOT
            } else {
                stat.oracle_queries += 1;
                self.oracle_queries += 1;
                let hit = oracle.query(self, prev, b);
                let image = match hit {
                    Some(u) => {
                        debug_assert_ne!(u, ST_ROOT, "oracles leave the root to the caller");
                        self.rslink(u, b)
                            .expect("the oracle names owners of the wanted link")
                    }
                    None => match self.rslink(ST_ROOT, b) {
                        Some(x) => x,
                        None => {
                            stat.root_descents += 1;
                            self.root_descents += 1;
                            ST_ROOT
                        }
                    },
                };
                let d = self.nodes[image].str_depth;
                debug_assert!(d <= lambda, "the image never overshoots the target");
                if d == lambda {
                    debug_assert_eq!(
                        self.nodes[image].slink,
                        Some(prev),
                        "an explicit target already links one shorter"
                    );
                    debug_assert_eq!(self.nodes[prev].rslinks.get(&b), Some(&image));
                    stat.reused_at_node += 1;
                    image
                } else {
                    while ci > 0 && dawg.long_len(chain[ci]) < lambda {
                        ci -= 1;
                    }
                    let cur = chain[ci];
                    debug_assert!(dawg.long_len(cur) >= lambda);
                    let rem = lambda - d;
                    let c = store.at(k, n - lambda + d);
                    let child = *self.nodes[image]
                        .children
                        .get(&c)
                        .expect("an implicit locus lives inside an existing edge");
                    let (upper, lower, lower_key) = match self.nodes[child]
                        .in_edge
                        .expect("only the root lacks an in-edge")
                    {
                        EdgeLabel::Full { text, start, end } => {
                            stat.split_full += 1;
                            debug_assert!(
                                rem < end + 1 - start,
                                "a landing on the child is a reuse, not a split"
                            );
                            let mid = start + rem;
                            debug_assert_eq!(
                                store.at(text, mid),
                                self.old_continuation(dawg, cur, a),
                                "the class agrees on the one old continuation"
                            );
                            (
                                EdgeLabel::Full { text, start, end: mid - 1 },
                                EdgeLabel::Full { text, start: mid, end },
                                store.at(text, mid),
                            )
                        }
                        EdgeLabel::Lazy { first } => {
                            stat.split_lazy += 1;
                            debug_assert_eq!(first, c);
                            // The leaf's character at the split depth is not
                            // stored anywhere in the tree; the class of the
                            // splitting locus knows it as its one old
                            // continuation.
                            let gamma = self.old_continuation(dawg, cur, a);
                            let hint = self.nodes[image].lpt_hint;
                            let upper = match lpt.label_for_descent(store, dawg, hint, c, rem) {
                                Some((h, i, j)) => EdgeLabel::Full { text: h, start: i, end: j },
                                None => {
                                    stat.label_fallbacks += 1;
                                    self.label_fallbacks += 1;
                                    EdgeLabel::Full { text: k, start: n - rem, end: n - 1 }
                                }
                            };
                            (upper, EdgeLabel::Lazy { first: gamma }, gamma)
                        }
                    };

                    let branch_id = self.nodes.len();
                    *self.nodes[image].children.get_mut(&c).expect("just read") = branch_id;
                    self.nodes[child].in_edge = Some(lower);
                    let dt_handle = self.dt.insert_on_edge(self.nodes[child].dt_handle);
                    debug_assert_eq!(self.dt_to_node.len(), dt_handle);
                    self.dt_to_node.push(branch_id);
                    let mut children = BTreeMap::new();
                    children.insert(lower_key, child);
                    self.nodes.push(StNode {
                        str_depth: lambda,
                        in_edge: Some(upper),
                        children,
                        slink: Some(prev),
                        rslinks: BTreeMap::new(),
                        dt_handle,
                        lpt_hint: cur,
                    });
                    stat.created_branches += 1;
                    // The branch spells b · (string of prev): install the
                    // left-extension link on its owner.
                    let displaced = self.nodes[prev].rslinks.insert(b, branch_id);
                    debug_assert!(
                        displaced.is_none(),
                        "an implicit string cannot have carried a link"
                    );
                    oracle.note_node(self, branch_id);
                    oracle.note_rslink(self, prev, b);
                    branch_id
                }
            };

            let leaf_id = self.nodes.len();
            let dt_handle = self.dt.insert_leaf(self.nodes[branch].dt_handle);
            debug_assert_eq!(self.dt_to_node.len(), dt_handle);
            self.dt_to_node.push(leaf_id);
            self.nodes.push(StNode {
                str_depth: lambda + 1,
                in_edge: Some(EdgeLabel::Lazy { first: a }),
                children: BTreeMap::new(),
                slink: None,
                rslinks: BTreeMap::new(),
                dt_handle,
                lpt_hint: sink,
            });
            let displaced = self.nodes[branch].children.insert(a, leaf_id);
            debug_assert!(displaced.is_none(), "the inserted suffix is genuinely new");
            stat.created_leaves += 1;
            oracle.note_node(self, leaf_id);

            while pi < pending.len() && pending[pi].1 == lambda {
                lpt.set_stree_link(pending[pi].0, branch);
                pi += 1;
                stat.resolved_links += 1;
            }
            prev = branch;
        }
        assert_eq!(pi, pending.len(), "every fresh mark is linked within its step");
        stat
    }

    /// The single pre-update continuation of the class owning a splitting
    /// locus: after the append its out-edges are exactly that character
    /// plus the appended one.
    fn old_continuation(&self, dawg: &Dawg, cur: NodeId, a: char) -> char {
        debug_assert_eq!(dawg.out_degree(cur), 2, "a splitting locus branches two ways");
        dawg.edges(cur)
            .map(|(c, _, _)| c)
            .find(|&c| c != a)
            .expect("a splitting locus keeps one old continuation")
    }

    /// Walk the repeated suffix down from `base`, crossing only fully
    /// labeled edges. Lands exactly on a node, or gives up when the locus
    /// is inside an edge or behind a lazy one.
    fn locate_exact(
        &self,
        store: &TextStore,
        k: usize,
        n: usize,
        lrs_len: usize,
        loc: LocateRef,
    ) -> Option<StNodeId> {
        let mut v = loc.base;
        let mut rem = loc.len;
        while rem > 0 {
            let d = self.nodes[v].str_depth;
            let c = store.at(k, n - lrs_len + d + 1);
            let child = *self.nodes[v]
                .children
                .get(&c)
                .expect("the repeated suffix is present in the tree");
            match self.nodes[child].in_edge.expect("only the root lacks an in-edge") {
                EdgeLabel::Full { start, end, .. } => {
                    let e = end + 1 - start;
                    if e > rem {
                        return None;
                    }
                    v = child;
                    rem -= e;
                }
                EdgeLabel::Lazy { .. } => return None,
            }
        }
        Some(v)
    }

    /// Rewrite every leaf edge as a full span of the text whose suffix
    /// reaches deepest through it, then refuse further appends. Each
    /// text's suffixes are visited longest to shortest, hopping suffix
    /// links between them, so the whole pass is linear in total text size.
    pub fn finalize(&mut self, store: &TextStore) {
        assert!(!self.finalized, "finalize runs once");
        let mut witness: Vec<Option<(usize, usize, usize)>> = vec![None; self.nodes.len()];
        for h in 1..=store.text_count() {
            let m = store.len(h);
            let mut anchor = ST_ROOT;
            for i in 1..=m {
                loop {
                    let d = self.nodes[anchor].str_depth;
                    debug_assert!(i + d <= m + 1, "the anchor spells a prefix of the suffix");
                    if i + d > m {
                        break; // the suffix ends at the anchor: implicit
                    }
                    let c = store.at(h, i + d);
                    let child = *self.nodes[anchor]
                        .children
                        .get(&c)
                        .expect("every current suffix has a path");
                    match self.nodes[child].in_edge.expect("only the root lacks an in-edge") {
                        EdgeLabel::Lazy { .. } => {
                            let depth = m - i + 1;
                            if witness[child].is_none_or(|(_, _, best)| depth > best) {
                                witness[child] = Some((h, i, depth));
                            }
                            break;
                        }
                        EdgeLabel::Full { start, end, .. } => {
                            if m - i + 1 - d < end + 1 - start {
                                break; // ends inside the edge: implicit
                            }
                            anchor = child;
                        }
                    }
                }
                anchor = self.nodes[anchor].slink.unwrap_or(ST_ROOT);
            }
        }
        for (v, w) in witness.into_iter().enumerate().skip(1) {
            if !self.nodes[v].children.is_empty() {
                continue;
            }
            let (h, i, depth) = w.expect("some suffix reaches deepest through each leaf");
            debug_assert_eq!(depth, store.len(h) - i + 1);
            let pd = self.nodes[self.parent(v).expect("leaves hang below the root")].str_depth;
            debug_assert!(
                matches!(
                    self.nodes[v].in_edge,
                    Some(EdgeLabel::Lazy { first }) if first == store.at(h, i + pd)
                ),
                "ownership changes never move a leaf's first character"
            );
            self.nodes[v].in_edge = Some(EdgeLabel::Full {
                text: h,
                start: i + pd,
                end: store.len(h),
            });
            self.nodes[v].str_depth = depth;
        }
        self.finalized = true;
    }
}

impl Default for Stree {
    fn default() -> Self {
        Stree::new()
    }
}
