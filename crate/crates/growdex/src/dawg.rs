//! Generalized DAWG over the growing collection, maintained fully-online.
//!
//! One node per equivalence class of substrings (equal end-position sets);
//! each node stores the length of its longest member. An edge `[x] --a-->
//! [xa]` is *primary* when `long([xa]) = long([x])·a`, *secondary*
//! otherwise. Appending a character moves the text's active node and does
//! one of: follow a primary edge (nothing else changes), split the target
//! of a secondary edge, or create a new sink and walk the suffix-link chain
//! adding edges until an existing `a`-edge is found (splitting its target
//! if that edge is secondary).
//!
//! Splits reuse the split node's arena index for the retained half (the one
//! keeping the longest member), so active handles never dangle: the active
//! node of text `k` always satisfies `long_len = |T_k|`.
//!
//! Each update also reports everything the suffix-tree layers need: the
//! longest repeated suffix and its node, the range of suffix lengths that
//! need new tree leaves, and every node whose out-degree just reached 2.

use std::collections::BTreeMap;
use std::ops::Range;

pub type NodeId = usize;

pub const SOURCE: NodeId = 0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Edge {
    target: NodeId,
    primary: bool,
}

#[derive(Debug, Clone)]
struct Node {
    long_len: usize,
    edges: BTreeMap<char, Edge>,
    slink: Option<NodeId>,
    /// Inverse suffix links, with back-indices for O(1) rewiring.
    slink_children: Vec<NodeId>,
    idx_in_slink_parent: usize,
    /// Number of texts whose length-`long_len` prefix equals this node's
    /// longest member. The class containing a prefix always has that prefix
    /// as its longest member, so these anchors never move on splits; suffix
    /// -link-subtree sums of this field yield live occurrence counts.
    prefix_count: u64,
}

/// Monotone creation counters (nothing is ever deleted).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DawgStats {
    pub nodes_created: u64,
    pub edges_created: u64,
    pub slinks_created: u64,
}

/// Summary of one `extend` call.
#[derive(Debug, Clone)]
pub struct DawgUpdate {
    pub text_id: usize,
    pub ch: char,
    /// |T_k| after the append.
    pub new_len: usize,
    /// Active node of text k before the update.
    pub old_act: NodeId,
    /// Newly created sink, when the active node had no `ch`-edge.
    pub new_sink: Option<NodeId>,
    pub split: Option<SplitInfo>,
    /// Node whose class contains the longest repeated suffix of the new
    /// text (the longest suffix that already occurred before this update).
    pub lrs_node: NodeId,
    pub lrs_len: usize,
    /// Length of the longest suffix of the *old* text that is
    /// right-extensible (has an out-edge; ε counts as extensible since the
    /// root is always explicit in the suffix tree).
    pub extensible_len: usize,
    /// Suffix lengths of the new text that need brand-new suffix-tree
    /// leaves: (lrs_len, extensible_len + 1], normalized to an empty range
    /// when the bounds cross.
    pub new_suffix_lens: Range<usize>,
    /// Pre-existing nodes whose out-degree reached exactly 2 during this
    /// update, with their long lengths (each is a suffix of the old text).
    pub newly_branching: Vec<(NodeId, usize)>,
    /// Suffix-link chain walked when a new sink was made: the old active
    /// node, every node given a fresh `ch`-edge, and the stop node, in walk
    /// order (long lengths strictly decreasing), with the clone spliced in
    /// when the split node was itself on the chain. Node `i` covers the old
    /// text's suffixes of lengths (long(chain[i+1]), long(chain[i])]: the
    /// class of the length-λ suffix is the deepest entry with long ≥ λ.
    /// Empty when no sink was created (nothing between lrs and extensible).
    pub chain_visited: Vec<NodeId>,
}

#[derive(Debug, Clone, Copy)]
pub struct SplitInfo {
    /// Reused index of the split node; keeps the members longer than lrs.
    pub retained: NodeId,
    /// New node owning the lrs and the class's shorter members.
    pub clone: NodeId,
    /// Node whose secondary edge triggered the split; its redirected edge
    /// into `clone` is the clone's primary in-edge.
    pub found_node: NodeId,
    /// Whether the clone was born with out-degree ≥ 2.
    pub born_branching: bool,
}

impl DawgUpdate {
    /// True when the update only moved the active point along an existing
    /// primary edge.
    pub fn followed_primary(&self) -> bool {
        self.new_sink.is_none() && self.split.is_none()
    }
}

#[derive(Debug, Clone)]
pub struct Dawg {
    nodes: Vec<Node>,
    active: Vec<NodeId>,
    stats: DawgStats,
}

impl Default for Dawg {
    fn default() -> Self {
        Dawg::new()
    }
}

impl Dawg {
    pub fn new() -> Dawg {
        let mut d = Dawg {
            nodes: Vec::new(),
            active: Vec::new(),
            stats: DawgStats::default(),
        };
        d.new_node(0);
        d
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn long_len(&self, v: NodeId) -> usize {
        self.nodes[v].long_len
    }

    pub fn slink(&self, v: NodeId) -> Option<NodeId> {
        self.nodes[v].slink
    }

    pub fn slink_children(&self, v: NodeId) -> &[NodeId] {
        &self.nodes[v].slink_children
    }

    pub fn prefix_count(&self, v: NodeId) -> u64 {
        self.nodes[v].prefix_count
    }

    pub fn edge(&self, v: NodeId, c: char) -> Option<(NodeId, bool)> {
        self.nodes[v].edges.get(&c).map(|e| (e.target, e.primary))
    }

    pub fn edges(&self, v: NodeId) -> impl Iterator<Item = (char, NodeId, bool)> + '_ {
        self.nodes[v]
            .edges
            .iter()
            .map(|(&c, e)| (c, e.target, e.primary))
    }

    pub fn out_degree(&self, v: NodeId) -> usize {
        self.nodes[v].edges.len()
    }

    /// Active node of text `k` (its class's longest member is exactly T_k).
    pub fn active(&self, k: usize) -> NodeId {
        self.active[k - 1]
    }

    pub fn text_count(&self) -> usize {
        self.active.len()
    }

    pub fn stats(&self) -> DawgStats {
        self.stats
    }

    /// Node reached by spelling `pattern` from the source, if any.
    pub fn lookup(&self, pattern: &[char]) -> Option<NodeId> {
        let mut cur = SOURCE;
        for &c in pattern {
            cur = self.nodes[cur].edges.get(&c)?.target;
        }
        Some(cur)
    }

    /// Applies the append of `a` to text `k` (registering the text when `k`
    /// is one beyond the current count). The text store is assumed to have
    /// recorded the character already.
    pub fn extend(&mut self, k: usize, a: char) -> DawgUpdate {
        assert!(k >= 1 && k <= self.active.len() + 1, "invalid text id {k}");
        if k == self.active.len() + 1 {
            self.active.push(SOURCE);
            // The new text's empty prefix anchors at the source, mirroring
            // the end position (k, 0) that registration adds to [ε].
            self.nodes[SOURCE].prefix_count += 1;
        }
        let act = self.active[k - 1];
        let new_len = self.nodes[act].long_len + 1;

        // Longest right-extensible suffix of the old text: walk the
        // suffix-link chain to the first node with an out-edge (the source
        // counts: ε's locus, the suffix-tree root, is always explicit).
        // Chain classes consist solely of suffixes of T_k, and edge-less
        // classes have end-position sets within the ≤ K text ends, so this
        // visits O(K) nodes.
        let extensible_len = {
            let mut v = act;
            loop {
                if v == SOURCE || !self.nodes[v].edges.is_empty() {
                    break self.nodes[v].long_len;
                }
                v = self.nodes[v].slink.expect("non-source nodes have slinks");
            }
        };

        let mut newly_branching = Vec::new();
        let mut chain_visited = Vec::new();
        let (new_sink, split, lrs_node, lrs_len) = match self.edge(act, a) {
            Some((t, true)) => {
                // The whole new text already occurred: follow the primary
                // edge; long(t) = T_k·a exactly.
                self.active[k - 1] = t;
                (None, None, t, new_len)
            }
            Some((u, false)) => {
                // T_k·a occurred but is not its class's longest member:
                // split u; the new class [T_k·a] is the clone.
                let info = self.split(u, new_len, act, a, k);
                self.active[k - 1] = info.clone;
                (None, Some(info), info.clone, new_len)
            }
            None => {
                // T_k·a is a brand-new string: new sink, then walk the
                // suffix-link chain adding a-edges until one exists.
                let sink = self.new_node(new_len);
                self.add_edge(act, a, sink, true, &mut newly_branching);
                chain_visited.push(act);
                let mut walk = self.nodes[act].slink;
                let stop = loop {
                    match walk {
                        None => break None,
                        Some(v) => {
                            chain_visited.push(v);
                            match self.edge(v, a) {
                                None => {
                                    self.add_edge(v, a, sink, false, &mut newly_branching);
                                    walk = self.nodes[v].slink;
                                }
                                Some(e) => break Some((v, e)),
                            }
                        }
                    }
                };
                let (split, lrs_node, lrs_len) = match stop {
                    None => {
                        self.set_slink(sink, SOURCE);
                        (None, SOURCE, 0)
                    }
                    Some((_, (u, true))) => {
                        self.set_slink(sink, u);
                        (None, u, self.nodes[u].long_len)
                    }
                    Some((v, (u, false))) => {
                        let lrs_len = self.nodes[v].long_len + 1;
                        let info = self.split(u, lrs_len, v, a, k);
                        self.set_slink(sink, info.clone);
                        // The split node may itself sit on the walked chain
                        // (its class held both long and short suffixes of
                        // the old text). The short ones — exactly the
                        // length-lrs suffix here — moved to the clone, and
                        // the rewired suffix links put the clone right
                        // after it, so mirror that in the recorded chain.
                        if let Some(pos) = chain_visited.iter().position(|&x| x == u) {
                            chain_visited.insert(pos + 1, info.clone);
                        }
                        (Some(info), info.clone, lrs_len)
                    }
                };
                self.active[k - 1] = sink;
                (Some(sink), split, lrs_node, lrs_len)
            }
        };

        // The class containing the new whole-text prefix has it as longest
        // member; anchor the end position (k, new_len) there.
        let act_after = self.active[k - 1];
        debug_assert_eq!(self.nodes[act_after].long_len, new_len);
        self.nodes[act_after].prefix_count += 1;

        let mut range = lrs_len + 1..extensible_len + 2;
        if range.start > range.end {
            range.end = range.start;
        }
        debug_assert!(
            new_sink.is_some() || range.is_empty(),
            "no new suffix-tree leaves unless a new sink was made"
        );
        DawgUpdate {
            text_id: k,
            ch: a,
            new_len,
            old_act: act,
            new_sink,
            split,
            lrs_node,
            lrs_len,
            extensible_len,
            new_suffix_lens: range,
            newly_branching,
            chain_visited,
        }
    }

    /// Splits `u` at length `lrs_len`: the retained half keeps `u`'s index
    /// and the members longer than `lrs_len`; the clone takes the rest,
    /// copies all out-edges (all secondary: every target's longest member
    /// is too long to extend the clone's by one), inherits `u`'s suffix
    /// link, and becomes `u`'s new suffix link. Secondary `a`-edges into
    /// `u` from `found` down its suffix-link chain are redirected to the
    /// clone; the first (from `found` itself) becomes the clone's primary
    /// in-edge.
    fn split(
        &mut self,
        u: NodeId,
        lrs_len: usize,
        found: NodeId,
        a: char,
        _k: usize,
    ) -> SplitInfo {
        debug_assert!(self.nodes[u].long_len > lrs_len);
        debug_assert_eq!(self.nodes[found].long_len + 1, lrs_len);
        let w = self.new_node(lrs_len);
        let copies: Vec<(char, NodeId)> = self.nodes[u]
            .edges
            .iter()
            .map(|(&c, e)| (c, e.target))
            .collect();
        let born_branching = copies.len() >= 2;
        for (c, t) in copies {
            debug_assert!(self.nodes[t].long_len > lrs_len + 1);
            self.nodes[w].edges.insert(c, Edge {
                target: t,
                primary: false,
            });
            self.stats.edges_created += 1;
        }
        let old_slink = self.nodes[u].slink.expect("split node is never the source");
        self.set_slink(w, old_slink);
        self.rewire_slink(u, w);

        let mut cur = Some(found);
        let mut first = true;
        while let Some(v) = cur {
            match self.nodes[v].edges.get_mut(&a) {
                Some(e) if e.target == u => {
                    e.target = w;
                    e.primary = first;
                }
                _ => break,
            }
            first = false;
            cur = self.nodes[v].slink;
        }
        SplitInfo {
            retained: u,
            clone: w,
            found_node: found,
            born_branching,
        }
    }

    fn new_node(&mut self, long_len: usize) -> NodeId {
        let id = self.nodes.len();
        self.nodes.push(Node {
            long_len,
            edges: BTreeMap::new(),
            slink: None,
            slink_children: Vec::new(),
            idx_in_slink_parent: usize::MAX,
            prefix_count: 0,
        });
        self.stats.nodes_created += 1;
        id
    }

    fn add_edge(
        &mut self,
        from: NodeId,
        c: char,
        to: NodeId,
        primary: bool,
        newly_branching: &mut Vec<(NodeId, usize)>,
    ) {
        let prev = self.nodes[from].edges.insert(c, Edge {
            target: to,
            primary,
        });
        debug_assert!(prev.is_none(), "edge already present");
        self.stats.edges_created += 1;
        if self.nodes[from].edges.len() == 2 {
            newly_branching.push((from, self.nodes[from].long_len));
        }
    }

    fn set_slink(&mut self, v: NodeId, parent: NodeId) {
        debug_assert!(self.nodes[v].slink.is_none());
        self.nodes[v].slink = Some(parent);
        self.nodes[v].idx_in_slink_parent = self.nodes[parent].slink_children.len();
        self.nodes[parent].slink_children.push(v);
        self.stats.slinks_created += 1;
    }

    /// Moves `v`'s suffix link to `new_parent` in O(1).
    fn rewire_slink(&mut self, v: NodeId, new_parent: NodeId) {
        let old_parent = self.nodes[v].slink.expect("rewire of unset slink");
        let idx = self.nodes[v].idx_in_slink_parent;
        let list = &mut self.nodes[old_parent].slink_children;
        list.swap_remove(idx);
        if idx < list.len() {
            let moved = list[idx];
            self.nodes[moved].idx_in_slink_parent = idx;
        }
        self.nodes[v].slink = Some(new_parent);
        self.nodes[v].idx_in_slink_parent = self.nodes[new_parent].slink_children.len();
        self.nodes[new_parent].slink_children.push(v);
    }
}
