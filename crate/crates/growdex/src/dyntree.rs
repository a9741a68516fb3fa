//! Semi-dynamic rooted-tree toolkit: nearest-marked-ancestor queries,
//! ancestor tests, and preorder comparison over a tree that grows by leaf
//! insertion and edge subdivision.
//!
//! Every tree node owns two *slots* (open and close) in an Euler sequence;
//! intervals are properly nested, so `u` is an ancestor of `v` iff
//! `open(u) ≤ open(v)` and `close(v) ≤ close(u)`. The sequence lives in a
//! treap with parent pointers and deterministic pseudo-random priorities;
//! slot order is decided by root walks (O(log n) expected per comparison,
//! a deliberate simplification over O(1) list labeling — operation counters
//! make the cost observable). Each treap subtree is augmented with the
//! marked open slot whose close position is furthest right, which prunes
//! nearest-marked-ancestor searches.
//!
//! Marks are monotone: once marked, never unmarked.

use std::cell::Cell;
use std::cmp::Ordering;

/// Handle to a dyntree node.
pub type DynNodeId = usize;

type SlotId = usize;

#[derive(Debug, Clone)]
struct NodeInfo {
    open: SlotId,
    close: SlotId,
    parent: Option<DynNodeId>,
    marked: bool,
}

#[derive(Debug, Clone)]
struct Slot {
    node: DynNodeId,
    is_open: bool,
    prio: u64,
    parent: Option<SlotId>,
    left: Option<SlotId>,
    right: Option<SlotId>,
    /// Among marked nodes whose open slot lies in this treap subtree, the
    /// one whose close slot is last in slot order; `None` if none.
    best: Option<DynNodeId>,
}

/// Operation counters, exposed so the complexity relaxation (treap root
/// walks instead of O(1) order labels) stays measurable.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DynTreeStats {
    pub nodes: u64,
    pub inserts: u64,
    pub marks: u64,
    pub nma_queries: u64,
    pub order_comparisons: u64,
    pub treap_steps: u64,
}

/// Growing rooted tree with monotone marks and NMA queries.
#[derive(Debug, Clone)]
pub struct DynTree {
    nodes: Vec<NodeInfo>,
    slots: Vec<Slot>,
    root_slot: SlotId,
    order_comparisons: Cell<u64>,
    treap_steps: Cell<u64>,
    nma_queries: Cell<u64>,
    inserts: u64,
    marks: u64,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl DynTree {
    /// One-node tree; node 0 is the root.
    pub fn new(root_marked: bool) -> DynTree {
        let mut t = DynTree {
            nodes: Vec::new(),
            slots: Vec::new(),
            root_slot: 0,
            order_comparisons: Cell::new(0),
            treap_steps: Cell::new(0),
            nma_queries: Cell::new(0),
            inserts: 0,
            marks: 0,
        };
        let open = t.new_slot(0, true);
        let close = t.new_slot(0, false);
        t.nodes.push(NodeInfo {
            open,
            close,
            parent: None,
            marked: false,
        });
        // Seed the two-slot treap by priority.
        let (hi, lo) = if t.slots[open].prio >= t.slots[close].prio {
            (open, close)
        } else {
            (close, open)
        };
        t.root_slot = hi;
        if hi == open {
            t.slots[open].right = Some(close);
        } else {
            t.slots[close].left = Some(open);
        }
        t.slots[lo].parent = Some(hi);
        if root_marked {
            t.mark(0);
        }
        t
    }

    pub fn root(&self) -> DynNodeId {
        0
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn parent(&self, v: DynNodeId) -> Option<DynNodeId> {
        self.nodes[v].parent
    }

    pub fn is_marked(&self, v: DynNodeId) -> bool {
        self.nodes[v].marked
    }

    /// Adds an unmarked leaf below `parent` (after its current children).
    pub fn insert_leaf(&mut self, parent: DynNodeId) -> DynNodeId {
        let id = self.nodes.len();
        let open = self.new_slot(id, true);
        let close = self.new_slot(id, false);
        self.nodes.push(NodeInfo {
            open,
            close,
            parent: Some(parent),
            marked: false,
        });
        let parent_close = self.nodes[parent].close;
        self.insert_before(parent_close, open);
        self.insert_before(parent_close, close);
        self.inserts += 1;
        id
    }

    /// Adds an unmarked node on the edge between `child` and its parent;
    /// the new node becomes `child`'s parent. `child` must not be the root.
    pub fn insert_on_edge(&mut self, child: DynNodeId) -> DynNodeId {
        let old_parent = self.nodes[child]
            .parent
            .expect("insert_on_edge requires a non-root child");
        let id = self.nodes.len();
        let open = self.new_slot(id, true);
        let close = self.new_slot(id, false);
        self.nodes.push(NodeInfo {
            open,
            close,
            parent: Some(old_parent),
            marked: false,
        });
        let child_open = self.nodes[child].open;
        let child_close = self.nodes[child].close;
        self.insert_before(child_open, open);
        self.insert_after(child_close, close);
        self.nodes[child].parent = Some(id);
        self.inserts += 1;
        id
    }

    /// Marks `v`. Idempotent; returns whether the node was newly marked.
    pub fn mark(&mut self, v: DynNodeId) -> bool {
        if self.nodes[v].marked {
            return false;
        }
        self.nodes[v].marked = true;
        self.marks += 1;
        // The open slot's ancestors' bests may now need to include v; stop
        // as soon as a recompute leaves a best unchanged.
        let mut cur = Some(self.nodes[v].open);
        while let Some(s) = cur {
            if !self.fix_best(s) {
                break;
            }
            cur = self.slots[s].parent;
        }
        true
    }

    /// Deepest marked node on the root-to-`v` path; includes `v` itself iff
    /// `inclusive`.
    pub fn nma(&self, v: DynNodeId, inclusive: bool) -> Option<DynNodeId> {
        self.nma_queries.set(self.nma_queries.get() + 1);
        if inclusive && self.nodes[v].marked {
            return Some(v);
        }
        let p = self.nodes[v].open;
        // Scan slot groups strictly left of `p`, right to left. Any marked
        // open slot there whose close lies right of `p` is an ancestor
        // (laminar intervals cannot cross), and the rightmost such open is
        // the deepest ancestor.
        if let Some(l) = self.slots[p].left {
            if let Some(hit) = self.scan_subtree(l, p) {
                return Some(hit);
            }
        }
        let mut cur = p;
        while let Some(par) = self.slots[cur].parent {
            self.treap_steps.set(self.treap_steps.get() + 1);
            if self.slots[par].right == Some(cur) {
                if let Some(hit) = self.qualifies(par, p) {
                    return Some(hit);
                }
                if let Some(l) = self.slots[par].left {
                    if let Some(hit) = self.scan_subtree(l, p) {
                        return Some(hit);
                    }
                }
            }
            cur = par;
        }
        None
    }

    /// Ancestor-or-self test via interval containment.
    pub fn is_ancestor(&self, u: DynNodeId, v: DynNodeId) -> bool {
        if u == v {
            return true;
        }
        self.order_lt(self.nodes[u].open, self.nodes[v].open)
            && self.order_lt(self.nodes[v].open, self.nodes[u].close)
    }

    /// Preorder comparison (by open-slot position).
    pub fn preorder_cmp(&self, u: DynNodeId, v: DynNodeId) -> Ordering {
        if u == v {
            Ordering::Equal
        } else if self.order_lt(self.nodes[u].open, self.nodes[v].open) {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }

    pub fn stats(&self) -> DynTreeStats {
        DynTreeStats {
            nodes: self.nodes.len() as u64,
            inserts: self.inserts,
            marks: self.marks,
            nma_queries: self.nma_queries.get(),
            order_comparisons: self.order_comparisons.get(),
            treap_steps: self.treap_steps.get(),
        }
    }

    /// Slot sequence as (node, is_open) pairs, for structural tests.
    #[cfg(test)]
    fn slots_in_order(&self) -> Vec<(DynNodeId, bool)> {
        let mut out = Vec::with_capacity(self.slots.len());
        let mut stack = Vec::new();
        let mut cur = Some(self.root_slot);
        while cur.is_some() || !stack.is_empty() {
            while let Some(s) = cur {
                stack.push(s);
                cur = self.slots[s].left;
            }
            let s = stack.pop().unwrap();
            out.push((self.slots[s].node, self.slots[s].is_open));
            cur = self.slots[s].right;
        }
        out
    }

    // ----- internals -----

    fn new_slot(&mut self, node: DynNodeId, is_open: bool) -> SlotId {
        let id = self.slots.len();
        self.slots.push(Slot {
            node,
            is_open,
            prio: splitmix64(id as u64 ^ 0xA24B_AED4_963E_E407),
            parent: None,
            left: None,
            right: None,
            best: None,
        });
        id
    }

    /// Is `v` (marked, open, close right of `p`) an NMA candidate?
    fn qualifies(&self, slot: SlotId, p: SlotId) -> Option<DynNodeId> {
        let s = &self.slots[slot];
        if s.is_open && self.nodes[s.node].marked && self.order_lt(p, self.nodes[s.node].close) {
            Some(s.node)
        } else {
            None
        }
    }

    /// Rightmost marked open slot in treap subtree `t` whose close lies
    /// right of `p`; `None` if the subtree has no such slot.
    fn scan_subtree(&self, t: SlotId, p: SlotId) -> Option<DynNodeId> {
        let promising = |sub: Option<SlotId>| -> bool {
            sub.and_then(|s| self.slots[s].best)
                .map(|b| self.order_lt(p, self.nodes[b].close))
                .unwrap_or(false)
        };
        if !promising(Some(t)) {
            return None;
        }
        let mut cur = t;
        loop {
            self.treap_steps.set(self.treap_steps.get() + 1);
            if promising(self.slots[cur].right) {
                cur = self.slots[cur].right.unwrap();
                continue;
            }
            if let Some(hit) = self.qualifies(cur, p) {
                return Some(hit);
            }
            cur = self.slots[cur]
                .left
                .expect("subtree promised a candidate but none found");
        }
    }

    /// `a` strictly before `b` in slot order, by comparing root paths.
    fn order_lt(&self, a: SlotId, b: SlotId) -> bool {
        debug_assert_ne!(a, b);
        self.order_comparisons.set(self.order_comparisons.get() + 1);
        let pa = self.root_path(a);
        let pb = self.root_path(b);
        let mut i = 0;
        while i < pa.len() && i < pb.len() && pa[i] == pb[i] {
            i += 1;
        }
        if i == pa.len() {
            // a is a treap ancestor of b
            self.slots[a].right == Some(pb[i])
        } else if i == pb.len() {
            self.slots[b].left == Some(pa[i])
        } else {
            self.slots[pa[i - 1]].left == Some(pa[i])
        }
    }

    fn root_path(&self, s: SlotId) -> Vec<SlotId> {
        let mut path = vec![s];
        let mut cur = s;
        while let Some(p) = self.slots[cur].parent {
            path.push(p);
            cur = p;
        }
        self.treap_steps
            .set(self.treap_steps.get() + path.len() as u64);
        path.reverse();
        path
    }

    fn insert_before(&mut self, target: SlotId, new: SlotId) {
        if self.slots[target].left.is_none() {
            self.slots[target].left = Some(new);
            self.slots[new].parent = Some(target);
        } else {
            let mut r = self.slots[target].left.unwrap();
            while let Some(nr) = self.slots[r].right {
                r = nr;
            }
            self.slots[r].right = Some(new);
            self.slots[new].parent = Some(r);
        }
        self.bubble_up(new);
    }

    fn insert_after(&mut self, target: SlotId, new: SlotId) {
        if self.slots[target].right.is_none() {
            self.slots[target].right = Some(new);
            self.slots[new].parent = Some(target);
        } else {
            let mut l = self.slots[target].right.unwrap();
            while let Some(nl) = self.slots[l].left {
                l = nl;
            }
            self.slots[l].left = Some(new);
            self.slots[new].parent = Some(l);
        }
        self.bubble_up(new);
    }

    fn bubble_up(&mut self, x: SlotId) {
        while let Some(p) = self.slots[x].parent {
            if self.slots[p].prio >= self.slots[x].prio {
                break;
            }
            self.rotate_up(x, p);
        }
    }

    /// Rotates `x` above its parent `p`, then repairs both augments.
    fn rotate_up(&mut self, x: SlotId, p: SlotId) {
        let grand = self.slots[p].parent;
        if self.slots[p].left == Some(x) {
            let b = self.slots[x].right;
            self.slots[p].left = b;
            if let Some(b) = b {
                self.slots[b].parent = Some(p);
            }
            self.slots[x].right = Some(p);
        } else {
            debug_assert_eq!(self.slots[p].right, Some(x));
            let b = self.slots[x].left;
            self.slots[p].right = b;
            if let Some(b) = b {
                self.slots[b].parent = Some(p);
            }
            self.slots[x].left = Some(p);
        }
        self.slots[p].parent = Some(x);
        self.slots[x].parent = grand;
        match grand {
            None => self.root_slot = x,
            Some(g) => {
                if self.slots[g].left == Some(p) {
                    self.slots[g].left = Some(x);
                } else {
                    self.slots[g].right = Some(x);
                }
            }
        }
        self.fix_best(p);
        self.fix_best(x);
    }

    /// Recomputes `best` for treap node `t` from its children and itself;
    /// returns whether the value changed (also cached for `mark`'s walk).
    fn fix_best(&mut self, t: SlotId) -> bool {
        let self_cand = if self.slots[t].is_open && self.nodes[self.slots[t].node].marked {
            Some(self.slots[t].node)
        } else {
            None
        };
        let left_cand = self.slots[t].left.and_then(|l| self.slots[l].best);
        let right_cand = self.slots[t].right.and_then(|r| self.slots[r].best);
        let mut best = self.later_close(left_cand, self_cand);
        best = self.later_close(best, right_cand);
        let changed = self.slots[t].best != best;
        self.slots[t].best = best;
        changed
    }

    /// Of two candidate nodes, the one whose close slot is later.
    fn later_close(&self, a: Option<DynNodeId>, b: Option<DynNodeId>) -> Option<DynNodeId> {
        match (a, b) {
            (None, x) | (x, None) => x,
            (Some(a), Some(b)) => {
                if a == b {
                    Some(a)
                } else if self.order_lt(self.nodes[a].close, self.nodes[b].close) {
                    Some(b)
                } else {
                    Some(a)
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Parent-walk shadow tree: the ground-truth oracle for every query.
    struct Shadow {
        parent: Vec<Option<usize>>,
        children: Vec<Vec<usize>>,
        marked: Vec<bool>,
    }

    impl Shadow {
        fn new(root_marked: bool) -> Shadow {
            Shadow {
                parent: vec![None],
                children: vec![vec![]],
                marked: vec![root_marked],
            }
        }
        fn insert_leaf(&mut self, p: usize) -> usize {
            let id = self.parent.len();
            self.parent.push(Some(p));
            self.children.push(vec![]);
            self.marked.push(false);
            self.children[p].push(id);
            id
        }
        fn insert_on_edge(&mut self, c: usize) -> usize {
            let id = self.parent.len();
            let p = self.parent[c].unwrap();
            self.parent.push(Some(p));
            self.children.push(vec![c]);
            self.marked.push(false);
            let pos = self.children[p].iter().position(|&x| x == c).unwrap();
            self.children[p][pos] = id;
            self.parent[c] = Some(id);
            id
        }
        fn nma(&self, v: usize, inclusive: bool) -> Option<usize> {
            let mut cur = if inclusive { Some(v) } else { self.parent[v] };
            while let Some(u) = cur {
                if self.marked[u] {
                    return Some(u);
                }
                cur = self.parent[u];
            }
            None
        }
        fn is_ancestor(&self, u: usize, v: usize) -> bool {
            let mut cur = Some(v);
            while let Some(x) = cur {
                if x == u {
                    return true;
                }
                cur = self.parent[x];
            }
            false
        }
        /// Euler tour of (node, is_open) via DFS in child-list order.
        fn euler(&self) -> Vec<(usize, bool)> {
            let mut out = Vec::new();
            let mut stack = vec![(0usize, false)];
            while let Some((v, expanded)) = stack.pop() {
                if expanded {
                    out.push((v, false));
                } else {
                    out.push((v, true));
                    stack.push((v, true));
                    for &c in self.children[v].iter().rev() {
                        stack.push((c, false));
                    }
                }
            }
            out
        }
    }

    #[test]
    fn fresh_tree_nma() {
        let t = DynTree::new(true);
        assert_eq!(t.nma(t.root(), true), Some(0));
        assert_eq!(t.nma(t.root(), false), None);
        let t = DynTree::new(false);
        assert_eq!(t.nma(t.root(), true), None);
    }

    #[test]
    fn hundred_leaves() {
        let mut t = DynTree::new(false);
        for _ in 0..100 {
            t.insert_leaf(t.root());
        }
        assert_eq!(t.len(), 101);
    }

    #[test]
    fn marked_path_queries() {
        let mut t = DynTree::new(true);
        let a = t.insert_leaf(t.root());
        let b = t.insert_leaf(a);
        assert_eq!(t.nma(b, false), Some(t.root()));
        assert!(t.mark(a));
        assert!(!t.mark(a), "re-marking is an idempotent no-op");
        assert_eq!(t.nma(b, false), Some(a));
        assert_eq!(t.nma(b, true), Some(a));
        assert!(t.mark(b));
        assert_eq!(t.nma(b, true), Some(b));
        assert_eq!(t.nma(b, false), Some(a));
    }

    #[test]
    fn edge_subdivision_shifts_depths() {
        let mut t = DynTree::new(false);
        let a = t.insert_leaf(t.root());
        let b = t.insert_leaf(a);
        let mid = t.insert_on_edge(b);
        assert_eq!(t.parent(b), Some(mid));
        assert_eq!(t.parent(mid), Some(a));
        assert!(t.is_ancestor(mid, b));
        assert!(t.is_ancestor(a, mid));
        assert!(!t.is_ancestor(b, mid));
        t.mark(mid);
        assert_eq!(t.nma(b, false), Some(mid));
    }

    #[test]
    fn sibling_order_is_insertion_order() {
        let mut t = DynTree::new(false);
        let a = t.insert_leaf(t.root());
        let b = t.insert_leaf(t.root());
        assert_eq!(t.preorder_cmp(a, b), Ordering::Less);
        assert_eq!(t.preorder_cmp(b, a), Ordering::Greater);
        assert!(!t.is_ancestor(a, b));
        assert!(!t.is_ancestor(b, a));
        assert!(t.is_ancestor(t.root(), a) && t.is_ancestor(t.root(), b));
    }

    /// One pseudo-random structural op; returns the op kind chosen.
    fn apply_random_op(seed: u64, i: u64, t: &mut DynTree, s: &mut Shadow) {
        let r = splitmix64(seed.wrapping_mul(0x9E37).wrapping_add(i));
        let n = t.len();
        let pick = (splitmix64(r) % n as u64) as usize;
        match r % 10 {
            0..=3 => {
                let x = t.insert_leaf(pick);
                let y = s.insert_leaf(pick);
                assert_eq!(x, y);
            }
            4..=5 => {
                if pick != 0 {
                    let x = t.insert_on_edge(pick);
                    let y = s.insert_on_edge(pick);
                    assert_eq!(x, y);
                }
            }
            _ => {
                t.mark(pick);
                s.marked[pick] = true;
            }
        }
    }

    #[test]
    fn random_ops_agree_with_parent_walk_oracle() {
        for seed in 0..30u64 {
            let mut t = DynTree::new(seed % 2 == 0);
            let mut s = Shadow::new(seed % 2 == 0);
            for i in 0..400 {
                apply_random_op(seed, i, &mut t, &mut s);
                // Spot-check a few nodes per step.
                for probe in 0..3 {
                    let v = (splitmix64(seed ^ (i * 31 + probe)) % t.len() as u64) as usize;
                    let u = (splitmix64(seed ^ (i * 37 + probe) ^ 0xF00) % t.len() as u64) as usize;
                    assert_eq!(t.nma(v, true), s.nma(v, true), "inclusive nma of {v}");
                    assert_eq!(t.nma(v, false), s.nma(v, false), "strict nma of {v}");
                    assert_eq!(t.is_ancestor(u, v), s.is_ancestor(u, v));
                    assert_eq!(t.parent(v), s.parent[v]);
                }
            }
            // Full structural agreement at the end.
            let euler = s.euler();
            assert_eq!(t.slots_in_order(), euler, "seed {seed}");
            let pos: std::collections::HashMap<usize, usize> = euler
                .iter()
                .enumerate()
                .filter(|(_, &(_, open))| open)
                .map(|(i, &(v, _))| (v, i))
                .collect();
            for u in 0..t.len() {
                for v in 0..t.len() {
                    let expect = pos[&u].cmp(&pos[&v]);
                    assert_eq!(t.preorder_cmp(u, v), expect);
                }
            }
        }
    }

    proptest! {
        /// After marking m, no node in subtree(m) resolves to a strict
        /// ancestor of m.
        #[test]
        fn marks_shadow_descendants(ops in proptest::collection::vec((0u64..1u64 << 32, 0u8..10), 1..150)) {
            let mut t = DynTree::new(false);
            let mut s = Shadow::new(false);
            for (r, kind) in ops {
                let pick = (r % t.len() as u64) as usize;
                match kind {
                    0..=4 => {
                        t.insert_leaf(pick);
                        s.insert_leaf(pick);
                    }
                    5..=6 => {
                        if pick != 0 {
                            t.insert_on_edge(pick);
                            s.insert_on_edge(pick);
                        }
                    }
                    _ => {
                        t.mark(pick);
                        s.marked[pick] = true;
                        for v in 0..t.len() {
                            if s.is_ancestor(pick, v) {
                                let hit = t.nma(v, true).unwrap();
                                prop_assert!(s.is_ancestor(hit, v));
                                prop_assert!(!s.is_ancestor(hit, pick) || hit == pick);
                            }
                        }
                    }
                }
            }
        }
    }
}
