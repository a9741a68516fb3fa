//! Indexed reversed-suffix-link lookup.
//!
//! The baseline strategy climbs parents, which costs tree depth per lookup.
//! This strategy keeps the answer a few ordered probes away. Nodes are
//! classified by subtree weight — leaves plus reversed links — as heavy
//! (promoted, permanent) or light. Heavy nodes form downward chains that
//! compress into an induced tree; every chain keeps, per character, the
//! ordered list of its link owners. One dynamic nearest-marked-ancestor
//! mirror per character answers "which ancestor chain still holds a link"
//! in the induced tree. Light subtrees stay small — their weight is kept
//! under twice the alphabet bound by promoting on a counter — so they are
//! scanned directly through per-root ordered sets.
//!
//! Chain splits reuse marks that may have gone stale (the mirror trees only
//! ever add marks); lookups skip a stale mark by verifying the chain's set
//! before accepting it. When the alphabet outgrows the current bound the
//! bound doubles and the entire classification is rebuilt from scratch,
//! which keeps the amortized cost low because doublings are logarithmic.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use crate::dyntree::{DynNodeId, DynTree};
use crate::oracle::SuffixTreeOracle;
use crate::stree::{StNodeId, Stree, ST_ROOT};

type ChainId = usize;
const NO_CHAIN: ChainId = usize::MAX;

/// A maximal run of heavy nodes between induced-tree branching points,
/// ordered root-side first. `upper` is the nearest heavy ancestor above the
/// run (`None` above the topmost run); `lower` closes the run and is the
/// node the induced tree actually branches or ends at.
struct Chain {
    upper: Option<StNodeId>,
    lower: StNodeId,
    /// Run members, ascending string depth; `assoc.last() == lower`.
    assoc: Vec<StNodeId>,
    /// Per character: run members owning that reversed link, ascending
    /// string depth. Never stores the root and never keeps empty lists.
    sets: BTreeMap<char, Vec<StNodeId>>,
}

/// Nearest-marked-ancestor view of the induced tree for one character: a
/// chain's node is marked when its per-character set is (or recently was)
/// non-empty. Marks are never removed, so a lookup double-checks the set.
struct Mirror {
    dt: DynTree,
    /// Chain id -> mirror node.
    of_chain: Vec<DynNodeId>,
    /// Mirror node -> chain id; the root sentinel maps to `NO_CHAIN`.
    chain_at: Vec<ChainId>,
}

/// Bookkeeping for one maximal light subtree, keyed by its root.
#[derive(Default)]
struct LightTree {
    /// Exact subtree weight: leaves plus reversed links (the root's own
    /// links included, even when the root is the tree root).
    counter: u64,
    /// Per character: light owners of that reversed link, ascending
    /// preorder. Never stores the root of the whole suffix tree.
    sets: BTreeMap<char, Vec<StNodeId>>,
}

/// Running totals exposed for diagnostics and tests.
#[derive(Debug, Default, Clone, Copy)]
pub struct FullOracleStats {
    pub sigma_cap: usize,
    pub heavy_nodes: usize,
    pub chains: usize,
    pub light_trees: usize,
    pub mirrors: usize,
    pub promotions: u64,
    pub rebuilds: u64,
    pub fresh_chains: u64,
    pub extended_chains: u64,
    pub split_chains: u64,
    pub stale_skips: u64,
}

/// Indexed strategy: heavy chains with per-character ordered sets, light
/// subtrees with counters, and per-character marked mirrors of the induced
/// tree.
pub struct FullOracle {
    /// Current alphabet bound; doubles (with a full rebuild) when exceeded.
    sigma_cap: usize,
    heavy: Vec<bool>,
    /// For heavy nodes, the chain they belong to; `NO_CHAIN` otherwise.
    chain_of: Vec<ChainId>,
    chains: Vec<Chain>,
    mirrors: BTreeMap<char, Mirror>,
    light: BTreeMap<StNodeId, LightTree>,
    promotions: u64,
    rebuilds: u64,
    fresh_chains: u64,
    extended_chains: u64,
    split_chains: u64,
    stale_skips: u64,
}

impl Default for FullOracle {
    fn default() -> Self {
        Self::new()
    }
}

impl FullOracle {
    pub fn new() -> FullOracle {
        let mut light = BTreeMap::new();
        light.insert(ST_ROOT, LightTree::default());
        FullOracle {
            sigma_cap: 1,
            heavy: Vec::new(),
            chain_of: Vec::new(),
            chains: Vec::new(),
            mirrors: BTreeMap::new(),
            light,
            promotions: 0,
            rebuilds: 0,
            fresh_chains: 0,
            extended_chains: 0,
            split_chains: 0,
            stale_skips: 0,
        }
    }

    pub fn stats(&self) -> FullOracleStats {
        FullOracleStats {
            sigma_cap: self.sigma_cap,
            heavy_nodes: self.heavy.iter().filter(|&&h| h).count(),
            chains: self.chains.len(),
            light_trees: self.light.len(),
            mirrors: self.mirrors.len(),
            promotions: self.promotions,
            rebuilds: self.rebuilds,
            fresh_chains: self.fresh_chains,
            extended_chains: self.extended_chains,
            split_chains: self.split_chains,
            stale_skips: self.stale_skips,
        }
    }

    fn ensure_len(&mut self, n: usize) {
        if self.heavy.len() < n {
            self.heavy.resize(n, false);
            self.chain_of.resize(n, NO_CHAIN);
        }
    }

    fn is_heavy(&self, v: StNodeId) -> bool {
        self.heavy.get(v).copied().unwrap_or(false)
    }

    fn light_root(&self, tree: &Stree, v: StNodeId) -> StNodeId {
        debug_assert!(!self.is_heavy(v));
        let mut cur = v;
        while let Some(p) = tree.parent(cur) {
            if self.is_heavy(p) {
                break;
            }
            cur = p;
        }
        cur
    }

    /// Bump a light root's weight counter; promote when it reaches twice
    /// the alphabet bound. Unit increments never overshoot the threshold.
    fn bump(&mut self, tree: &Stree, r: StNodeId) {
        let threshold = 2 * self.sigma_cap as u64;
        let c = {
            let lt = self.light.get_mut(&r).expect("light roots keep an entry");
            lt.counter += 1;
            lt.counter
        };
        debug_assert!(c <= threshold, "counters may only touch the threshold");
        if c == threshold {
            self.promote(tree, r);
        }
    }

    /// Append a chain to the induced tree and sync every existing mirror.
    fn new_chain(&mut self, upper: Option<StNodeId>, lower: StNodeId, assoc: Vec<StNodeId>) -> ChainId {
        debug_assert!(upper.is_none_or(|u| self.is_heavy(u)));
        let id = self.chains.len();
        let parent = upper.map(|u| self.chain_of[u]);
        self.chains.push(Chain {
            upper,
            lower,
            assoc,
            sets: BTreeMap::new(),
        });
        for m in self.mirrors.values_mut() {
            let at = match parent {
                None => m.dt.root(),
                Some(p) => m.of_chain[p],
            };
            let dn = m.dt.insert_leaf(at);
            debug_assert_eq!(dn, m.chain_at.len());
            m.of_chain.push(dn);
            m.chain_at.push(id);
        }
        id
    }

    /// Cut chain `e` at interior node `p`, so a fresh chain can hang off
    /// `p`. The side with fewer members is redirected to a new chain id;
    /// the larger side keeps `e`, so at most half the member pointers move.
    /// Mirror nodes split structurally (the old node keeps its children,
    /// hence always represents the lower part), and marks carried by the
    /// reused node may go stale for the smaller half — lookups skip those.
    fn split_chain(&mut self, tree: &Stree, e: ChainId, p: StNodeId) {
        self.split_chains += 1;
        let dp = tree.str_depth(p);
        let cut = self.chains[e]
            .assoc
            .partition_point(|&x| tree.str_depth(x) <= dp);
        let lower_assoc = self.chains[e].assoc.split_off(cut);
        let upper_assoc = std::mem::take(&mut self.chains[e].assoc);
        debug_assert_eq!(upper_assoc.last().copied(), Some(p));
        debug_assert!(!lower_assoc.is_empty(), "interior cuts leave both halves busy");

        let mut upper_sets: BTreeMap<char, Vec<StNodeId>> = BTreeMap::new();
        let mut lower_sets: BTreeMap<char, Vec<StNodeId>> = BTreeMap::new();
        for (b, set) in std::mem::take(&mut self.chains[e].sets) {
            let c = set.partition_point(|&x| tree.str_depth(x) <= dp);
            let lo = set[c..].to_vec();
            let mut hi = set;
            hi.truncate(c);
            if !hi.is_empty() {
                upper_sets.insert(b, hi);
            }
            if !lo.is_empty() {
                lower_sets.insert(b, lo);
            }
        }

        let old_upper = self.chains[e].upper;
        let old_lower = self.chains[e].lower;
        let f = self.chains.len();
        if upper_assoc.len() <= lower_assoc.len() {
            // The upper half is redirected to the fresh id `f`.
            self.chains[e].upper = Some(p);
            self.chains[e].assoc = lower_assoc;
            self.chains[e].sets = lower_sets;
            self.chains.push(Chain {
                upper: old_upper,
                lower: p,
                assoc: upper_assoc,
                sets: upper_sets,
            });
            for &x in &self.chains[f].assoc {
                self.chain_of[x] = f;
            }
            for (b, m) in self.mirrors.iter_mut() {
                let dn = m.dt.insert_on_edge(m.of_chain[e]);
                debug_assert_eq!(dn, m.chain_at.len());
                m.of_chain.push(dn);
                m.chain_at.push(f);
                if self.chains[f].sets.contains_key(b) {
                    m.dt.mark(dn);
                }
            }
        } else {
            // The lower half is redirected to the fresh id `f`.
            self.chains[e].lower = p;
            self.chains[e].assoc = upper_assoc;
            self.chains[e].sets = upper_sets;
            self.chains.push(Chain {
                upper: Some(p),
                lower: old_lower,
                assoc: lower_assoc,
                sets: lower_sets,
            });
            for &x in &self.chains[f].assoc {
                self.chain_of[x] = f;
            }
            for (b, m) in self.mirrors.iter_mut() {
                let old = m.of_chain[e];
                let dn = m.dt.insert_on_edge(old);
                debug_assert_eq!(dn, m.chain_at.len());
                // The inserted node sits above and becomes the upper half,
                // which kept id `e`; the old node keeps the children and
                // now stands for the redirected lower half `f`.
                m.chain_at.push(e);
                m.chain_at[old] = f;
                m.of_chain[e] = dn;
                m.of_chain.push(old);
                if self.chains[e].sets.contains_key(b) {
                    m.dt.mark(dn);
                }
            }
        }
    }

    /// Mark a chain in one character's mirror, building that mirror from
    /// the current induced tree on first use.
    fn mark_chain(&mut self, b: char, e: ChainId) {
        if let Some(m) = self.mirrors.get_mut(&b) {
            let dn = m.of_chain[e];
            m.dt.mark(dn);
        } else {
            let m = Self::build_mirror(&self.chains, &self.chain_of, b);
            self.mirrors.insert(b, m);
        }
    }

    fn build_mirror(chains: &[Chain], chain_of: &[ChainId], b: char) -> Mirror {
        let n = chains.len();
        let mut kids: Vec<Vec<ChainId>> = vec![Vec::new(); n];
        let mut roots = Vec::new();
        for (e, ch) in chains.iter().enumerate() {
            match ch.upper.map(|u| chain_of[u]) {
                None => roots.push(e),
                Some(pe) => kids[pe].push(e),
            }
        }
        debug_assert_eq!(roots.len(), 1, "the induced tree has one topmost chain");
        let mut dt = DynTree::new(false);
        let mut of_chain = vec![usize::MAX; n];
        let mut chain_at = vec![NO_CHAIN];
        let mut queue: VecDeque<ChainId> = roots.into_iter().collect();
        while let Some(e) = queue.pop_front() {
            let at = match chains[e].upper.map(|u| chain_of[u]) {
                None => dt.root(),
                Some(pe) => of_chain[pe],
            };
            let dn = dt.insert_leaf(at);
            debug_assert_eq!(dn, chain_at.len());
            of_chain[e] = dn;
            chain_at.push(e);
            queue.extend(kids[e].iter().copied());
        }
        debug_assert_eq!(chain_at.len(), n + 1, "every chain lands in the mirror");
        for (e, ch) in chains.iter().enumerate() {
            if ch.sets.contains_key(&b) {
                dt.mark(of_chain[e]);
            }
        }
        Mirror {
            dt,
            of_chain,
            chain_at,
        }
    }

    /// Turn the light tree rooted at `r` into heavy structure: flag a
    /// maximal weight-σ path, attach it to the induced tree, move the
    /// path's links into chain sets, and re-root the subtrees hanging off
    /// the path as fresh light trees.
    fn promote(&mut self, tree: &Stree, r: StNodeId) {
        self.promotions += 1;
        let lt = self.light.remove(&r).expect("light roots keep an entry");
        let threshold = 2 * self.sigma_cap as u64;

        // Exact weights inside the promoted subtree.
        let mut order = vec![r];
        let mut i = 0;
        while i < order.len() {
            let v = order[i];
            i += 1;
            for (_, u) in tree.children(v) {
                order.push(u);
            }
        }
        let mut w: HashMap<StNodeId, u64> = HashMap::with_capacity(order.len());
        for &v in order.iter().rev() {
            let mut x = u64::from(tree.is_leaf(v)) + tree.rslinks(v).count() as u64;
            for (_, u) in tree.children(v) {
                x += w[&u];
            }
            w.insert(v, x);
        }
        debug_assert_eq!(w[&r], lt.counter, "counters mirror true weights");
        debug_assert_eq!(lt.counter, threshold, "promotion fires exactly at the threshold");
        drop(lt);

        // Maximal path of weight at least σ; ties take the smallest edge
        // character so runs are reproducible.
        let floor = self.sigma_cap as u64;
        let mut path = vec![r];
        loop {
            let cur = *path.last().unwrap();
            let mut best: Option<(char, StNodeId, u64)> = None;
            for (c, u) in tree.children(cur) {
                let wu = w[&u];
                if wu < floor {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some((bc, _, bw)) => wu > bw || (wu == bw && c < bc),
                };
                if better {
                    best = Some((c, u, wu));
                }
            }
            match best {
                Some((_, u, _)) => path.push(u),
                None => break,
            }
        }
        let sh = *path.last().unwrap();

        let parent = tree.parent(r);
        let old_heavy_kids = parent.map_or(0, |p| {
            tree.children(p).filter(|&(_, u)| self.is_heavy(u)).count()
        });
        for &s in &path {
            self.heavy[s] = true;
        }

        let pe = match parent {
            None => {
                debug_assert!(self.chains.is_empty(), "only the first promotion starts at the root");
                self.fresh_chains += 1;
                self.new_chain(None, sh, path.clone())
            }
            Some(p) => {
                debug_assert!(self.is_heavy(p), "light trees hang from heavy nodes");
                match old_heavy_kids {
                    0 => {
                        // `p` closed its chain; the path continues it.
                        let e = self.chain_of[p];
                        debug_assert_eq!(self.chains[e].lower, p);
                        self.extended_chains += 1;
                        self.chains[e].lower = sh;
                        self.chains[e].assoc.extend(path.iter().copied());
                        e
                    }
                    1 => {
                        // `p` sat inside a chain: cut there, then hang on.
                        let e = self.chain_of[p];
                        debug_assert_ne!(self.chains[e].lower, p);
                        self.split_chain(tree, e, p);
                        self.fresh_chains += 1;
                        self.new_chain(Some(p), sh, path.clone())
                    }
                    _ => {
                        debug_assert_eq!(self.chains[self.chain_of[p]].lower, p);
                        self.fresh_chains += 1;
                        self.new_chain(Some(p), sh, path.clone())
                    }
                }
            }
        };
        for &s in &path {
            self.chain_of[s] = pe;
        }

        // The path's links move into the chain's ordered sets.
        let mut touched: BTreeSet<char> = BTreeSet::new();
        for &s in &path {
            if s == ST_ROOT {
                continue;
            }
            for (b, _) in tree.rslinks(s) {
                let set = self.chains[pe].sets.entry(b).or_default();
                debug_assert!(set.last().is_none_or(|&x| tree.str_depth(x) < tree.str_depth(s)));
                set.push(s);
                touched.insert(b);
            }
        }
        for b in touched {
            self.mark_chain(b, pe);
        }

        // Subtrees hanging off the path become light trees of their own,
        // each strictly under the threshold since the path took weight σ
        // out of every level.
        let on_path: HashSet<StNodeId> = path.iter().copied().collect();
        for &s in &path {
            for (_, u) in tree.children(s) {
                if on_path.contains(&u) {
                    continue;
                }
                let mut sets: BTreeMap<char, Vec<StNodeId>> = BTreeMap::new();
                let mut stack = vec![u];
                while let Some(x) = stack.pop() {
                    for (b, _) in tree.rslinks(x) {
                        sets.entry(b).or_default().push(x);
                    }
                    for (_, y) in tree.children(x) {
                        stack.push(y);
                    }
                }
                for set in sets.values_mut() {
                    set.sort_by(|&a, &b2| tree.dt_preorder_cmp(a, b2));
                }
                debug_assert!(w[&u] < threshold);
                self.light.insert(
                    u,
                    LightTree {
                        counter: w[&u],
                        sets,
                    },
                );
            }
        }
    }

    fn full_weights(tree: &Stree) -> Vec<u64> {
        let n = tree.len();
        let mut order = Vec::with_capacity(n);
        order.push(ST_ROOT);
        let mut i = 0;
        while i < order.len() {
            let v = order[i];
            i += 1;
            for (_, u) in tree.children(v) {
                order.push(u);
            }
        }
        debug_assert_eq!(order.len(), n);
        let mut w = vec![0u64; n];
        for &v in order.iter().rev() {
            let mut x = u64::from(tree.is_leaf(v)) + tree.rslinks(v).count() as u64;
            for (_, u) in tree.children(v) {
                x += w[u];
            }
            w[v] = x;
        }
        w
    }

    /// Reclassify everything under the current alphabet bound: recompute
    /// weights, flag heavy nodes by threshold, rebuild chains and light
    /// trees, and drop the mirrors (they are rebuilt lazily per character).
    fn rebuild(&mut self, tree: &Stree) {
        self.rebuilds += 1;
        let n = tree.len();
        self.heavy = vec![false; n];
        self.chain_of = vec![NO_CHAIN; n];
        self.chains.clear();
        self.mirrors.clear();
        self.light.clear();

        let w = Self::full_weights(tree);
        let threshold = 2 * self.sigma_cap as u64;
        for (v, &wv) in w.iter().enumerate() {
            self.heavy[v] = wv >= threshold;
        }

        if self.heavy[ST_ROOT] {
            let mut hkids = vec![0usize; n];
            for v in 0..n {
                if v != ST_ROOT && self.heavy[v] {
                    hkids[tree.parent(v).expect("non-root node has a parent")] += 1;
                }
            }
            for v in 0..n {
                if !self.heavy[v] || hkids[v] == 1 {
                    continue;
                }
                // `v` closes a chain: collect the run of pass-through
                // ancestors above it.
                let mut assoc = vec![v];
                let mut upper = None;
                let mut cur = v;
                while let Some(p) = tree.parent(cur) {
                    debug_assert!(self.heavy[p], "heavy nodes close upward");
                    if hkids[p] != 1 {
                        upper = Some(p);
                        break;
                    }
                    assoc.push(p);
                    cur = p;
                }
                assoc.reverse();
                let id = self.chains.len();
                for &x in &assoc {
                    self.chain_of[x] = id;
                }
                let mut sets: BTreeMap<char, Vec<StNodeId>> = BTreeMap::new();
                for &x in &assoc {
                    if x == ST_ROOT {
                        continue;
                    }
                    for (b, _) in tree.rslinks(x) {
                        sets.entry(b).or_default().push(x);
                    }
                }
                self.chains.push(Chain {
                    upper,
                    lower: v,
                    assoc,
                    sets,
                });
            }
        }

        for (v, &wv) in w.iter().enumerate() {
            if self.heavy[v] {
                continue;
            }
            let rooted = tree.parent(v).is_none_or(|p| self.heavy[p]);
            if !rooted {
                continue;
            }
            let mut sets: BTreeMap<char, Vec<StNodeId>> = BTreeMap::new();
            let mut stack = vec![v];
            while let Some(x) = stack.pop() {
                // The root's own links weigh into the counter but never
                // enter the sets: the root is no legal answer.
                if x != ST_ROOT {
                    for (b, _) in tree.rslinks(x) {
                        sets.entry(b).or_default().push(x);
                    }
                }
                for (_, y) in tree.children(x) {
                    stack.push(y);
                }
            }
            for set in sets.values_mut() {
                set.sort_by(|&a, &b2| tree.dt_preorder_cmp(a, b2));
            }
            debug_assert!(wv < threshold);
            self.light.insert(
                v,
                LightTree {
                    counter: wv,
                    sets,
                },
            );
        }
    }

    /// Nearest link owner at or above heavy node `v`: first the ordered
    /// set of `v`'s own chain, then ancestor chains through the mirror,
    /// skipping marks whose set has since been split empty.
    fn heavy_query(&mut self, tree: &Stree, v: StNodeId, b: char) -> Option<StNodeId> {
        let e0 = self.chain_of[v];
        debug_assert_ne!(e0, NO_CHAIN);
        if let Some(set) = self.chains[e0].sets.get(&b) {
            let dv = tree.str_depth(v);
            let i = set.partition_point(|&x| tree.str_depth(x) <= dv);
            if i > 0 {
                return Some(set[i - 1]);
            }
        }
        let m = self.mirrors.get(&b)?;
        let mut dn = m.of_chain[e0];
        loop {
            let up = m.dt.parent(dn)?;
            let hit = m.dt.nma(up, true)?;
            let he = m.chain_at[hit];
            debug_assert_ne!(he, NO_CHAIN, "the mirror sentinel stays unmarked");
            if let Some(set) = self.chains[he].sets.get(&b) {
                debug_assert!(!set.is_empty(), "chain sets never keep empty lists");
                return Some(*set.last().expect("checked non-empty"));
            }
            self.stale_skips += 1;
            dn = hit;
        }
    }

    #[cfg(test)]
    pub(crate) fn validate(&self, tree: &Stree) {
        let n = tree.len();
        assert_eq!(self.heavy.len(), n);
        assert_eq!(self.chain_of.len(), n);
        let w = Self::full_weights(tree);
        let threshold = 2 * self.sigma_cap as u64;
        let floor = self.sigma_cap as u64;

        for (v, &wv) in w.iter().enumerate() {
            if self.heavy[v] {
                assert!(wv >= floor, "heavy nodes weigh at least the bound");
                if let Some(p) = tree.parent(v) {
                    assert!(self.heavy[p], "heavy nodes close upward");
                }
                let e = self.chain_of[v];
                assert_ne!(e, NO_CHAIN);
                assert!(self.chains[e].assoc.contains(&v));
            } else {
                assert!(wv < threshold, "light weights stay under the threshold");
                assert_eq!(self.chain_of[v], NO_CHAIN);
            }
        }

        let mut covered = vec![false; n];
        for (id, ch) in self.chains.iter().enumerate() {
            assert!(!ch.assoc.is_empty());
            assert_eq!(ch.assoc.last().copied(), Some(ch.lower));
            assert_eq!(tree.parent(ch.assoc[0]), ch.upper);
            for win in ch.assoc.windows(2) {
                assert_eq!(tree.parent(win[1]), Some(win[0]));
            }
            for &x in &ch.assoc {
                assert!(self.heavy[x]);
                assert_eq!(self.chain_of[x], id);
                assert!(!covered[x], "chains partition the heavy nodes");
                covered[x] = true;
            }
            for &x in &ch.assoc {
                let hk = tree.children(x).filter(|&(_, u)| self.heavy[u]).count();
                if x == ch.lower {
                    assert_ne!(hk, 1, "a chain ends where the induced tree branches or stops");
                } else {
                    assert_eq!(hk, 1, "interior chain nodes pass straight through");
                }
            }
            if let Some(u) = ch.upper {
                let hk = tree.children(u).filter(|&(_, c)| self.heavy[c]).count();
                assert!(hk >= 2, "a chain hangs from a branching point");
            }
            let mut expected: BTreeMap<char, Vec<StNodeId>> = BTreeMap::new();
            for &x in &ch.assoc {
                if x == ST_ROOT {
                    continue;
                }
                for (b, _) in tree.rslinks(x) {
                    expected.entry(b).or_default().push(x);
                }
            }
            assert_eq!(expected, ch.sets, "chain sets hold exactly the run's links");
        }
        for (v, &c) in covered.iter().enumerate() {
            if self.heavy[v] {
                assert!(c, "every heavy node sits on a chain");
            }
        }

        for (&r, lt) in &self.light {
            assert!(!self.heavy[r]);
            if let Some(p) = tree.parent(r) {
                assert!(self.heavy[p], "light roots hang from heavy nodes");
            }
            assert_eq!(lt.counter, w[r], "counters mirror true weights");
            assert!(lt.counter < threshold);
            let mut expected: BTreeMap<char, Vec<StNodeId>> = BTreeMap::new();
            let mut stack = vec![r];
            while let Some(x) = stack.pop() {
                assert!(!self.heavy[x], "light trees hold no heavy nodes");
                if x != ST_ROOT {
                    for (b, _) in tree.rslinks(x) {
                        expected.entry(b).or_default().push(x);
                    }
                }
                for (_, y) in tree.children(x) {
                    stack.push(y);
                }
            }
            for set in expected.values_mut() {
                set.sort_by(|&a, &b2| tree.dt_preorder_cmp(a, b2));
            }
            assert_eq!(&expected, &lt.sets, "light sets hold exactly the subtree's links");
        }
        for v in 0..n {
            if self.heavy[v] {
                continue;
            }
            let rooted = tree.parent(v).is_none_or(|p| self.heavy[p]);
            if rooted {
                assert!(self.light.contains_key(&v), "every light root keeps an entry");
            }
        }

        for (b, m) in &self.mirrors {
            assert_eq!(m.of_chain.len(), self.chains.len());
            assert_eq!(m.chain_at.len(), m.dt.len());
            for (e, ch) in self.chains.iter().enumerate() {
                let dn = m.of_chain[e];
                assert_eq!(m.chain_at[dn], e);
                let pd = match ch.upper.map(|u| self.chain_of[u]) {
                    None => m.dt.root(),
                    Some(pe) => m.of_chain[pe],
                };
                assert_eq!(m.dt.parent(dn), Some(pd), "mirrors track the induced tree");
                if ch.sets.contains_key(b) {
                    assert!(m.dt.is_marked(dn), "chains holding links stay marked");
                }
            }
        }
    }
}

impl SuffixTreeOracle for FullOracle {
    fn name(&self) -> &'static str {
        "full"
    }

    fn query(&mut self, tree: &Stree, v: StNodeId, b: char) -> Option<StNodeId> {
        if v == ST_ROOT {
            return None;
        }
        if self.is_heavy(v) {
            return self.heavy_query(tree, v, b);
        }
        let r = self.light_root(tree, v);
        let lt = self.light.get(&r).expect("light roots keep an entry");
        if let Some(set) = lt.sets.get(&b) {
            // Entries up to `v`'s preorder slot are the candidates; the
            // first ancestor met scanning backwards is the deepest one.
            let ip = set.partition_point(|&x| tree.dt_preorder_cmp(x, v) != Ordering::Greater);
            for i in (0..ip).rev() {
                if tree.dt_is_ancestor(set[i], v) {
                    return Some(set[i]);
                }
            }
        }
        match tree.parent(r) {
            None => None,
            Some(p) => {
                debug_assert!(self.is_heavy(p));
                self.heavy_query(tree, p, b)
            }
        }
    }

    fn note_node(&mut self, tree: &Stree, v: StNodeId) {
        self.ensure_len(tree.len());
        debug_assert!(!self.heavy[v]);
        let mut kids = tree.children(v).map(|(_, u)| u);
        let first = kids.next();
        debug_assert!(kids.next().is_none(), "fresh nodes carry at most one child");
        match first {
            None => {
                // A fresh leaf adds one unit of weight somewhere.
                let p = tree.parent(v).expect("fresh leaves hang below the root");
                if self.is_heavy(p) {
                    self.light.insert(
                        v,
                        LightTree {
                            counter: 1,
                            sets: BTreeMap::new(),
                        },
                    );
                } else {
                    let r = self.light_root(tree, p);
                    self.bump(tree, r);
                }
            }
            Some(c) => {
                // A split point takes over its single child's spot; no
                // weight moves because the new node is neither a leaf nor
                // a link owner yet.
                if self.is_heavy(c) {
                    self.heavy[v] = true;
                    let e = self.chain_of[c];
                    debug_assert_ne!(e, NO_CHAIN);
                    self.chain_of[v] = e;
                    let dv = tree.str_depth(v);
                    debug_assert!(self.chains[e]
                        .upper
                        .is_none_or(|u| tree.str_depth(u) < dv));
                    let pos = self.chains[e]
                        .assoc
                        .partition_point(|&x| tree.str_depth(x) < dv);
                    self.chains[e].assoc.insert(pos, v);
                } else {
                    let p = tree.parent(v).expect("split points hang below the root");
                    if self.is_heavy(p) {
                        // The child was a light root; the split point now
                        // roots that tree, with unchanged weight.
                        let lt = self.light.remove(&c).expect("light roots keep an entry");
                        self.light.insert(v, lt);
                    }
                }
            }
        }
    }

    fn note_rslink(&mut self, tree: &Stree, owner: StNodeId, b: char) {
        self.ensure_len(tree.len());
        if self.is_heavy(owner) {
            if owner == ST_ROOT {
                // The root is never a legal answer; its links only weigh
                // into light counters, and a heavy root has none.
                return;
            }
            let e = self.chain_of[owner];
            let d = tree.str_depth(owner);
            let set = self.chains[e].sets.entry(b).or_default();
            let pos = set.partition_point(|&x| tree.str_depth(x) < d);
            debug_assert!(pos == set.len() || set[pos] != owner, "one link per node and character");
            set.insert(pos, owner);
            self.mark_chain(b, e);
        } else {
            let r = self.light_root(tree, owner);
            if owner != ST_ROOT {
                let lt = self.light.get_mut(&r).expect("light roots keep an entry");
                let set = lt.sets.entry(b).or_default();
                let pos = match set.binary_search_by(|&x| tree.dt_preorder_cmp(x, owner)) {
                    Err(pos) => pos,
                    Ok(_) => unreachable!("one link per node and character"),
                };
                set.insert(pos, owner);
            }
            self.bump(tree, r);
        }
    }

    fn note_alphabet(&mut self, tree: &Stree, sigma: usize) {
        self.ensure_len(tree.len());
        if sigma <= self.sigma_cap {
            return;
        }
        while self.sigma_cap < sigma {
            self.sigma_cap *= 2;
        }
        self.rebuild(tree);
    }

    fn debug_dump(&self, _tree: &Stree) -> Option<String> {
        let mut out = String::new();
        out.push_str("{\"strategy\":\"full\",\"sigma_cap\":");
        out.push_str(&self.sigma_cap.to_string());
        out.push_str(",\"heavy\":[");
        let mut first = true;
        for (v, &h) in self.heavy.iter().enumerate() {
            if h {
                if !first {
                    out.push(',');
                }
                first = false;
                out.push_str(&v.to_string());
            }
        }
        out.push_str("],\"chains\":[");
        for (e, ch) in self.chains.iter().enumerate() {
            if e > 0 {
                out.push(',');
            }
            out.push_str("{\"upper\":");
            match ch.upper {
                None => out.push_str("null"),
                Some(u) => out.push_str(&u.to_string()),
            }
            out.push_str(",\"lower\":");
            out.push_str(&ch.lower.to_string());
            out.push_str(",\"nodes\":[");
            for (i, x) in ch.assoc.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&x.to_string());
            }
            // Link owners are keyed by character code point to stay
            // JSON-safe for any alphabet.
            out.push_str("],\"links\":{");
            for (i, (b, set)) in ch.sets.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push('"');
                out.push_str(&(*b as u32).to_string());
                out.push_str("\":[");
                for (j, x) in set.iter().enumerate() {
                    if j > 0 {
                        out.push(',');
                    }
                    out.push_str(&x.to_string());
                }
                out.push(']');
            }
            out.push_str("}}");
        }
        out.push_str("],\"light\":[");
        for (i, (r, lt)) in self.light.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str("{\"root\":");
            out.push_str(&r.to_string());
            out.push_str(",\"weight\":");
            out.push_str(&lt.counter.to_string());
            out.push('}');
        }
        out.push_str("],\"counters\":{\"promotions\":");
        out.push_str(&self.promotions.to_string());
        out.push_str(",\"rebuilds\":");
        out.push_str(&self.rebuilds.to_string());
        out.push_str(",\"fresh_chains\":");
        out.push_str(&self.fresh_chains.to_string());
        out.push_str(",\"extended_chains\":");
        out.push_str(&self.extended_chains.to_string());
        out.push_str(",\"split_chains\":");
        out.push_str(&self.split_chains.to_string());
        out.push_str(",\"stale_skips\":");
        out.push_str(&self.stale_skips.to_string());
        out.push_str("}}");
        Some(out)
    }
}
