//! Replays random fully-online update sequences and validates the online
//! suffix tree against the definitional growing trie after every single
//! step, for every registered oracle, plus once more after finalize.

use growdex::dawg::Dawg;
use growdex::lpt::Lpt;
use growdex::oracle::{make_oracle, SuffixTreeOracle, ORACLE_NAMES};
use growdex::stree::{Stree, StreeUpdate, ST_ROOT};
use growdex::text::{TextStore, UpdateOp};
use growdex_reference::gen::{random_ops, semi_online_ops};
use growdex_reference::stree_compare::check_stree;
use growdex_reference::trie::GrowingTrie;

struct Online {
    store: TextStore,
    dawg: Dawg,
    lpt: Lpt,
    tree: Stree,
    oracle: Box<dyn SuffixTreeOracle>,
}

impl Online {
    fn new(oracle_name: &str) -> Online {
        Online {
            store: TextStore::new(),
            dawg: Dawg::new(),
            lpt: Lpt::new(ST_ROOT),
            tree: Stree::new(),
            oracle: make_oracle(oracle_name).unwrap(),
        }
    }

    fn step(&mut self, op: UpdateOp) -> StreeUpdate {
        self.store.append(op).unwrap();
        let up = self.dawg.extend(op.text_id, op.ch);
        self.lpt.insert_leaves(&up);
        let st = self.tree.extend(
            &self.store,
            &self.dawg,
            &mut self.lpt,
            self.oracle.as_mut(),
            &up,
        );
        // Per-update summary coherence.
        assert_eq!(
            st.created_leaves,
            up.new_suffix_lens.len(),
            "one leaf per new suffix"
        );
        assert_eq!(st.created_branches, st.split_full + st.split_lazy);
        assert!(st.reused_at_node + st.created_branches <= st.oracle_queries + 1);
        st
    }
}

fn replay_and_check(ops: &[UpdateOp], oracle_name: &str, label: &str) {
    let mut on = Online::new(oracle_name);
    let mut trie = GrowingTrie::new();
    for (i, &op) in ops.iter().enumerate() {
        on.step(op);
        trie.step(op);
        check_stree(&on.store, &trie, &on.tree)
            .unwrap_or_else(|e| panic!("{label}, step {i} {op:?}: {e}"));
    }
    on.tree.finalize(&on.store);
    check_stree(&on.store, &trie, &on.tree)
        .unwrap_or_else(|e| panic!("{label}, after finalize: {e}"));
}

fn replay_all_oracles(ops: &[UpdateOp], label: &str) {
    for &name in ORACLE_NAMES {
        replay_and_check(ops, name, &format!("{label}, oracle {name}"));
    }
}

#[test]
fn random_runs_match_reference_every_step() {
    for seed in 0..16u64 {
        let sigma = [1, 2, 3, 4, 26][seed as usize % 5];
        let max_texts = [1, 2, 3, 8][seed as usize % 4];
        let ops = random_ops(seed, 150, max_texts, sigma);
        replay_all_oracles(&ops, &format!("seed {seed} σ={sigma} texts≤{max_texts}"));
    }
}

#[test]
fn semi_online_runs_match_reference_every_step() {
    for seed in 0..6u64 {
        let sigma = [1, 2, 4][seed as usize % 3];
        let ops = semi_online_ops(seed, 120, 4, sigma);
        replay_all_oracles(&ops, &format!("semi-online seed {seed} σ={sigma}"));
    }
}

#[test]
fn single_text_unary_run() {
    let ops: Vec<UpdateOp> = (0..40).map(|_| UpdateOp::new(1, 'a')).collect();
    replay_all_oracles(&ops, "unary run");
}

#[test]
fn many_one_character_texts() {
    // Every text is a fresh single character; the tree is a star and every
    // leaf keeps being taken over by the newest text of its letter.
    let ops: Vec<UpdateOp> = (0..24)
        .map(|i| UpdateOp::new(i + 1, ['a', 'b', 'c'][i % 3]))
        .collect();
    replay_all_oracles(&ops, "one-char texts");
}

#[test]
fn three_text_showcase_fixture() {
    // Interleaved growth of {aaab, ababc, bab} in a deliberately awkward
    // order: text 3 overtakes text 1's leaves, then text 1 wins them back.
    let ops = [
        (1, 'a'),
        (2, 'a'),
        (3, 'b'),
        (2, 'b'),
        (1, 'a'),
        (3, 'a'),
        (2, 'a'),
        (1, 'a'),
        (3, 'b'),
        (2, 'b'),
        (1, 'b'),
        (2, 'c'),
    ]
    .map(|(k, c)| UpdateOp::new(k, c));
    replay_all_oracles(&ops, "three-text showcase");
}
