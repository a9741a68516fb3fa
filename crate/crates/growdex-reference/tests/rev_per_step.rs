//! Replays update sequences and validates the reverse-tree export against
//! the naive reversed-prefix trie after every single step.

use growdex::index::OnlineIndex;
use growdex::text::UpdateOp;
use growdex_reference::gen::{random_ops, semi_online_ops};
use growdex_reference::rev_compare::check_rev_tree;

/// Replace each text's first character with a digit marker unique to it;
/// bodies stay lowercase, so markers never reappear.
fn with_markers(mut ops: Vec<UpdateOp>) -> Vec<UpdateOp> {
    let mut seen = std::collections::BTreeSet::new();
    for op in &mut ops {
        if seen.insert(op.text_id) {
            op.ch = (b'0' + (op.text_id - 1) as u8) as char;
        }
    }
    ops
}

fn replay(ops: &[UpdateOp], markers: bool, label: &str) {
    let mut index = OnlineIndex::new("walkup").unwrap();
    for (i, &op) in ops.iter().enumerate() {
        index.apply(op).unwrap();
        let tree = index
            .export_reverse_suffix_tree(markers)
            .unwrap_or_else(|e| panic!("{label}, step {}: {e}", i + 1));
        check_rev_tree(index.store(), &tree)
            .unwrap_or_else(|e| panic!("{label}, step {}: {e}", i + 1));
    }
}

#[test]
fn marked_random_runs_export_the_reversed_suffix_tree() {
    for seed in 0..10u64 {
        let sigma = [1, 2, 4][seed as usize % 3];
        let texts = [1, 2, 3, 8][seed as usize % 4];
        let ops = with_markers(random_ops(seed, 140, texts, sigma));
        replay(&ops, true, &format!("seed {seed}"));
    }
}

#[test]
fn unmarked_runs_keep_every_prefix_class_visible() {
    for seed in 0..8u64 {
        let sigma = [1, 2, 4, 26][seed as usize % 4];
        let texts = [1, 2, 3, 8][seed as usize % 4];
        let ops = random_ops(seed + 100, 140, texts, sigma);
        replay(&ops, false, &format!("seed {seed}"));
    }
}

#[test]
fn semi_online_marked_run() {
    let ops = with_markers(semi_online_ops(7, 120, 3, 3));
    replay(&ops, true, "semi-online");
}

#[test]
fn unary_text_exports_a_chain() {
    let ops: Vec<UpdateOp> = (0..40).map(|_| UpdateOp::new(1, 'a')).collect();
    replay(&ops, false, "unary");
}
