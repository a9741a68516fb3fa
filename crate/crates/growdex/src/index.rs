//! One owner for the whole online index: the text store, the DAWG, its
//! longest-path tree, the suffix tree, and the ancestor-search oracle,
//! advanced in lockstep one appended character at a time.

use crate::dawg::{Dawg, DawgStats};
use crate::lpt::Lpt;
use crate::oracle::{make_oracle, SuffixTreeOracle};
use crate::stree::{Stree, StreeStats, StreeUpdate, ST_ROOT};
use crate::text::{TextError, TextStore, UpdateOp};

/// What one append did, across all structures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepSummary {
    /// 1-based ordinal of this append in the whole stream.
    pub step: u64,
    pub text_id: usize,
    pub ch: char,
    /// Length of the updated text afterwards.
    pub new_len: usize,
    /// Longest suffix of the updated text that occurs somewhere else.
    pub repeated_len: usize,
    /// Suffix lengths that needed structural insertion into the tree.
    pub new_suffixes: usize,
    pub tree: StreeUpdate,
}

/// Point-in-time structure sizes, for reporting and budget checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndexStats {
    pub steps: u64,
    pub texts: usize,
    pub total_len: usize,
    pub alphabet: usize,
    pub dawg_nodes: usize,
    pub dawg: DawgStats,
    pub lpt_nodes: usize,
    pub tree: StreeStats,
}

pub struct OnlineIndex {
    store: TextStore,
    dawg: Dawg,
    lpt: Lpt,
    stree: Stree,
    oracle: Box<dyn SuffixTreeOracle>,
    steps: u64,
}

impl OnlineIndex {
    /// `oracle_name` picks the ancestor-search strategy; see
    /// [`crate::oracle::ORACLE_NAMES`].
    pub fn new(oracle_name: &str) -> Result<OnlineIndex, String> {
        let oracle = make_oracle(oracle_name)
            .ok_or_else(|| format!("unknown oracle {oracle_name:?}"))?;
        Ok(Self::with_oracle(oracle))
    }

    /// Build an index around a caller-supplied lookup strategy, letting
    /// tests wrap or instrument one.
    pub fn with_oracle(oracle: Box<dyn SuffixTreeOracle>) -> OnlineIndex {
        OnlineIndex {
            store: TextStore::new(),
            dawg: Dawg::new(),
            lpt: Lpt::new(ST_ROOT),
            stree: Stree::new(),
            oracle,
            steps: 0,
        }
    }

    pub fn store(&self) -> &TextStore {
        &self.store
    }

    pub fn dawg(&self) -> &Dawg {
        &self.dawg
    }

    pub fn lpt(&self) -> &Lpt {
        &self.lpt
    }

    pub fn stree(&self) -> &Stree {
        &self.stree
    }

    pub fn oracle_name(&self) -> &'static str {
        self.oracle.name()
    }

    pub fn is_finalized(&self) -> bool {
        self.stree.is_finalized()
    }

    /// Apply one append to every structure. Errors only on an invalid op
    /// (bad text id); panics if the tree has been finalized.
    pub fn apply(&mut self, op: UpdateOp) -> Result<StepSummary, TextError> {
        assert!(!self.is_finalized(), "a finalized index refuses appends");
        self.store.append(op)?;
        let up = self.dawg.extend(op.text_id, op.ch);
        self.lpt.insert_leaves(&up);
        let tree = self.stree.extend(
            &self.store,
            &self.dawg,
            &mut self.lpt,
            self.oracle.as_mut(),
            &up,
        );
        self.steps += 1;
        Ok(StepSummary {
            step: self.steps,
            text_id: op.text_id,
            ch: op.ch,
            new_len: up.new_len,
            repeated_len: up.lrs_len,
            new_suffixes: up.new_suffix_lens.len(),
            tree,
        })
    }

    /// Pin every lazy leaf to the text reaching deepest through it. The
    /// index stops accepting appends.
    pub fn finalize(&mut self) {
        self.stree.finalize(&self.store);
    }

    /// Read the suffix tree of the reversed texts off the suffix links;
    /// see [`crate::rstree::export_reverse_suffix_tree`].
    pub fn export_reverse_suffix_tree(
        &self,
        require_markers: bool,
    ) -> Result<crate::rstree::RevTree, String> {
        crate::rstree::export_reverse_suffix_tree(
            &self.store,
            &self.dawg,
            &self.lpt,
            require_markers,
        )
    }

    pub fn stats(&self) -> IndexStats {
        IndexStats {
            steps: self.steps,
            texts: self.store.text_count(),
            total_len: self.store.total_len(),
            alphabet: self.store.alphabet_size(),
            dawg_nodes: self.dawg.len(),
            dawg: self.dawg.stats(),
            lpt_nodes: self.lpt.len(),
            tree: self.stree.stats(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn apply_advances_all_structures() {
        let mut index = OnlineIndex::new("walkup").unwrap();
        for (k, c) in [(1, 'a'), (1, 'b'), (2, 'a'), (1, 'a')] {
            let s = index.apply(UpdateOp::new(k, c)).unwrap();
            assert_eq!(s.text_id, k);
            assert_eq!(s.ch, c);
        }
        let stats = index.stats();
        assert_eq!(stats.steps, 4);
        assert_eq!(stats.texts, 2);
        assert_eq!(stats.total_len, 4);
        assert_eq!(stats.alphabet, 2);
        assert_eq!(stats.dawg_nodes, index.dawg().len());
        assert_eq!(stats.lpt_nodes, index.lpt().len());
        assert!(!index.is_finalized());
        index.finalize();
        assert!(index.is_finalized());
    }

    #[test]
    fn unknown_oracle_is_an_error() {
        assert!(OnlineIndex::new("nosuch").is_err());
    }

    #[test]
    fn bad_text_id_is_an_error_and_changes_nothing() {
        let mut index = OnlineIndex::new("walkup").unwrap();
        index.apply(UpdateOp::new(1, 'a')).unwrap();
        let before = index.stats();
        assert!(index.apply(UpdateOp::new(3, 'b')).is_err());
        assert_eq!(index.stats(), before);
    }
}
