//! Reversed-suffix-link lookup strategies.
//!
//! The suffix tree asks one question while placing a new branch: starting
//! from an explicit node, which is the lowest ancestor (the node itself
//! included, the root excluded) carrying a reversed suffix link for a given
//! character? Strategies answer it with different cost profiles; all must
//! agree answer-for-answer, since the caller treats the result as exact.

use crate::stree::{StNodeId, Stree, ST_ROOT};

pub trait SuffixTreeOracle {
    fn name(&self) -> &'static str;

    /// Lowest non-root ancestor of `v` (self included) with a reversed
    /// suffix link for `b`.
    fn query(&mut self, tree: &Stree, v: StNodeId, b: char) -> Option<StNodeId>;

    /// Observe a node freshly inserted into the tree (leaf or split point).
    fn note_node(&mut self, _tree: &Stree, _v: StNodeId) {}

    /// Observe a reversed suffix link for `b` installed on `owner`.
    fn note_rslink(&mut self, _tree: &Stree, _owner: StNodeId, _b: char) {}

    /// Observe the alphabet reaching `sigma` distinct characters.
    fn note_alphabet(&mut self, _tree: &Stree, _sigma: usize) {}

    /// Machine-readable snapshot of whatever classification state the
    /// strategy keeps, as JSON. The baseline keeps none and returns `None`.
    fn debug_dump(&self, _tree: &Stree) -> Option<String> {
        None
    }
}

/// Baseline strategy: climb parents and test each node directly. Always
/// correct, O(depth) per query; the yardstick everything else must match.
#[derive(Debug, Default)]
pub struct WalkupOracle;

impl SuffixTreeOracle for WalkupOracle {
    fn name(&self) -> &'static str {
        "walkup"
    }

    fn query(&mut self, tree: &Stree, v: StNodeId, b: char) -> Option<StNodeId> {
        let mut cur = v;
        while cur != ST_ROOT {
            if tree.rslink(cur, b).is_some() {
                return Some(cur);
            }
            cur = tree.parent(cur).expect("non-root node has a parent");
        }
        None
    }
}

/// Build a strategy by name. `full` is the indexed structure, `walkup` the
/// parent-climbing baseline.
pub fn make_oracle(name: &str) -> Option<Box<dyn SuffixTreeOracle>> {
    match name {
        "walkup" => Some(Box::new(WalkupOracle)),
        "full" => Some(Box::new(crate::oracle_full::FullOracle::new())),
        _ => None,
    }
}

pub const ORACLE_NAMES: &[&str] = &["walkup", "full"];
