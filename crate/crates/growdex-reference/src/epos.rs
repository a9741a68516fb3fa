//! Definitional end-position table and the naive DAWG built from it.
//!
//! `EposTable` enumerates every substring of every text and records the set
//! of (text id, end position) pairs where it occurs. Substring equivalence
//! (identical Epos sets) is computed literally, making this the
//! oracle-of-oracles: everything else is anchored to it on small inputs.

use growdex::text::TextStore;
use std::collections::BTreeMap;
use std::collections::BTreeSet;

/// End-position set of one string: all (text id, end position) pairs.
pub type Epos = BTreeSet<(usize, usize)>;

/// Map from every substring of the collection (including ε) to its Epos set.
///
/// ε ends at position 0 of every registered text as well as after every
/// character, so its Epos strictly contains every other string's — the
/// source class never merges with anything.
#[derive(Debug, Clone)]
pub struct EposTable {
    map: BTreeMap<Vec<char>, Epos>,
}

/// One equivalence class: all member strings (shortest first) sharing one
/// Epos set.
#[derive(Debug, Clone)]
pub struct EposClass {
    pub members: Vec<Vec<char>>,
    pub epos: Epos,
}

pub const DEFAULT_SIZE_GUARD: usize = 3000;

impl EposTable {
    pub fn build(store: &TextStore) -> EposTable {
        EposTable::build_with_limit(store, DEFAULT_SIZE_GUARD)
    }

    pub fn build_with_limit(store: &TextStore, max_total_len: usize) -> EposTable {
        assert!(
            store.total_len() <= max_total_len,
            "EposTable size guard: {} > {max_total_len} total characters",
            store.total_len()
        );
        let mut map: BTreeMap<Vec<char>, Epos> = BTreeMap::new();
        let empty = map.entry(Vec::new()).or_default();
        for k in 1..=store.text_count() {
            for j in 0..=store.len(k) {
                empty.insert((k, j));
            }
        }
        for k in 1..=store.text_count() {
            let text = store.text(k);
            for j in 1..=text.len() {
                for i in 1..=j {
                    map.entry(text[i - 1..j].to_vec()).or_default().insert((k, j));
                }
            }
        }
        EposTable { map }
    }

    /// Epos set of `x`; `None` if `x` is not a substring of the collection.
    pub fn epos(&self, x: &[char]) -> Option<&Epos> {
        self.map.get(x)
    }

    /// Number of distinct substrings, ε included.
    pub fn substring_count(&self) -> usize {
        self.map.len()
    }

    pub fn substrings(&self) -> impl Iterator<Item = &Vec<char>> {
        self.map.keys()
    }

    /// Equivalence classes (equal Epos sets), each with members sorted
    /// shortest first. Classes are returned sorted by their longest member,
    /// so the ordering is deterministic.
    pub fn classes(&self) -> Vec<EposClass> {
        let mut grouped: BTreeMap<&Epos, Vec<Vec<char>>> = BTreeMap::new();
        for (s, e) in &self.map {
            grouped.entry(e).or_default().push(s.clone());
        }
        let mut classes: Vec<EposClass> = grouped
            .into_iter()
            .map(|(e, mut members)| {
                members.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
                EposClass {
                    members,
                    epos: e.clone(),
                }
            })
            .collect();
        classes.sort_by(|a, b| {
            a.members
                .last()
                .unwrap()
                .cmp(b.members.last().unwrap())
        });
        classes
    }
}

impl EposClass {
    pub fn long(&self) -> &[char] {
        self.members.last().unwrap()
    }

    pub fn shortest(&self) -> &[char] {
        self.members.first().unwrap()
    }
}

/// Node of the definitionally built DAWG. Node 0 is the source (class of ε).
#[derive(Debug, Clone)]
pub struct NaiveDawgNode {
    /// Longest member of the class.
    pub long: Vec<char>,
    /// Length of the shortest member.
    pub min_len: usize,
    /// Out-edges: char → (target, primary).
    pub edges: BTreeMap<char, (usize, bool)>,
    pub slink: Option<usize>,
    /// |Epos| of the class.
    pub occ: usize,
}

#[derive(Debug, Clone)]
pub struct NaiveDawg {
    pub nodes: Vec<NaiveDawgNode>,
}

impl NaiveDawg {
    pub fn source(&self) -> usize {
        0
    }

    pub fn long_len(&self, v: usize) -> usize {
        self.nodes[v].long.len()
    }
}

/// Builds the minimal DAWG by literal Epos-class construction: one node per
/// class; an `a`-edge from [x] to [xa] whenever `long([x])·a` is a
/// substring; the edge is primary iff `long([x])·a = long([xa])`; the
/// suffix link drops the first character of the class's shortest member.
pub fn naive_dawg(store: &TextStore) -> NaiveDawg {
    let table = EposTable::build(store);
    let mut classes = table.classes();
    // Source (class of ε) first; the rest keep their deterministic order.
    let src = classes
        .iter()
        .position(|c| c.shortest().is_empty())
        .expect("ε class always exists");
    classes.swap(0, src);
    let class_of: BTreeMap<Vec<char>, usize> = classes
        .iter()
        .enumerate()
        .flat_map(|(i, c)| c.members.iter().map(move |m| (m.clone(), i)))
        .collect();
    let mut nodes = Vec::with_capacity(classes.len());
    for class in &classes {
        let long = class.long().to_vec();
        let mut edges = BTreeMap::new();
        let mut extension = long.clone();
        for a in collection_alphabet(store) {
            extension.push(a);
            if let Some(&target) = class_of.get(&extension) {
                let primary = classes[target].long() == extension.as_slice();
                edges.insert(a, (target, primary));
            }
            extension.pop();
        }
        let shortest = class.shortest();
        let slink = if shortest.is_empty() {
            None
        } else {
            Some(class_of[&shortest[1..].to_vec()])
        };
        nodes.push(NaiveDawgNode {
            min_len: shortest.len(),
            long,
            edges,
            slink,
            occ: class.epos.len(),
        });
    }
    NaiveDawg { nodes }
}

fn collection_alphabet(store: &TextStore) -> Vec<char> {
    store.alphabet().collect()
}
