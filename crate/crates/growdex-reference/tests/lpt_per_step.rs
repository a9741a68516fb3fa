//! Per-step validation of the longest-path tree against from-scratch
//! recomputation: tree shape, marks, labels, and the locate query.

use growdex::dawg::{Dawg, DawgUpdate, NodeId, SOURCE};
use growdex::lpt::{LocateRef, Lpt, StreeHandle};
use growdex::text::{TextStore, UpdateOp};
use growdex_reference::gen::random_ops;

const FAKE_ROOT: StreeHandle = usize::MAX;

/// One step of the combined structure, with pending marks linked to their
/// own DAWG ids (tree handles do not exist yet at this layer).
fn drive(store: &mut TextStore, dawg: &mut Dawg, lpt: &mut Lpt, op: UpdateOp) {
    store.append(op).unwrap();
    let up = dawg.extend(op.text_id, op.ch);
    lpt.insert_leaves(&up);
    let loc = lpt.locate_lrs(store, dawg, &up);
    check_locate(store, dawg, lpt, &loc, &up);
    lpt.commit_marks(&up);
    let pending = lpt.take_pending();
    let mut prev_len = 0;
    for &(v, long_len) in &pending {
        assert!(lpt.is_marked(v), "pending node {v} must be marked");
        assert_eq!(dawg.long_len(v), long_len);
        assert!(long_len >= prev_len, "pending must come shortest first");
        prev_len = long_len;
        lpt.set_stree_link(v, v);
    }
}

/// The longest member of `v`, read off its in-label.
fn long_of(store: &TextStore, dawg: &Dawg, lpt: &Lpt, v: NodeId) -> Vec<char> {
    if v == SOURCE {
        return Vec::new();
    }
    let (h, j) = lpt.node(v).label_in.unwrap();
    let len = dawg.long_len(v);
    (j - len + 1..=j).map(|i| store.at(h, i)).collect()
}

fn check_locate(store: &TextStore, dawg: &Dawg, lpt: &Lpt, loc: &LocateRef, up: &DawgUpdate) {
    let base_node = if loc.base == FAKE_ROOT {
        SOURCE
    } else {
        loc.base // fake handles are the DAWG ids themselves
    };
    // Definitional recomputation: the first marked node on the LPT path
    // from the repeated-suffix class upward (itself included), else the
    // source. The source's own mark is irrelevant — it maps to the root
    // either way.
    let mut expect = SOURCE;
    let mut w = Some(up.lrs_node);
    while let Some(p) = w {
        if p == SOURCE {
            break;
        }
        if lpt.is_marked(p) {
            expect = p;
            break;
        }
        w = lpt.parent(p);
    }
    assert_eq!(base_node, expect, "locate must name the lowest marked node");
    // Expand the reference: base's longest member followed by `len` more
    // characters must be exactly the longest repeated suffix.
    let lrs: Vec<char> = {
        let t = store.text(up.text_id);
        t[t.len() - up.lrs_len..].to_vec()
    };
    let above = long_of(store, dawg, lpt, base_node);
    assert_eq!(above.len() + loc.len, up.lrs_len);
    assert_eq!(&lrs[..above.len()], &above[..], "base must spell a prefix");
    assert_eq!(loc.first_char, lrs.get(above.len()).copied());
}

/// Full-scan invariants after a step.
fn check_state(store: &TextStore, dawg: &Dawg, lpt: &Lpt) {
    assert_eq!(lpt.len(), dawg.len());
    // Primary in-edges: exactly one per non-source node, none into source.
    let mut primary_parent: Vec<Option<NodeId>> = vec![None; dawg.len()];
    for v in 0..dawg.len() {
        for (_c, target, primary) in dawg.edges(v) {
            if primary {
                assert!(
                    primary_parent[target].is_none(),
                    "two primary in-edges into {target}"
                );
                primary_parent[target] = Some(v);
            }
        }
    }
    assert_eq!(primary_parent[SOURCE], None);
    for (v, &expected) in primary_parent.iter().enumerate() {
        assert_eq!(lpt.parent(v), expected, "LPT parent of {v}");
        if let Some(p) = expected {
            assert_eq!(dawg.long_len(v), dawg.long_len(p) + 1);
        } else if v != SOURCE {
            panic!("non-source node {v} lacks a primary in-edge");
        }
        assert_eq!(
            lpt.is_marked(v),
            dawg.out_degree(v) >= 2,
            "mark on {v} must track branching"
        );
        if lpt.is_marked(v) {
            assert!(lpt.node(v).stree_link.is_some(), "{v} marked but unlinked");
        }
        if v != SOURCE {
            let spelled = long_of(store, dawg, lpt, v);
            assert_eq!(
                dawg.lookup(&spelled),
                Some(v),
                "label of {v} must end an occurrence of its longest member"
            );
        }
    }
}

#[test]
fn random_runs_match_recomputation_every_step() {
    for (seed, sigma, max_texts) in [
        (101, 1, 1),
        (102, 2, 2),
        (103, 2, 3),
        (104, 4, 3),
        (105, 4, 8),
        (106, 26, 3),
        (107, 3, 2),
        (108, 2, 8),
    ] {
        let ops = random_ops(seed, 160, max_texts, sigma);
        let mut store = TextStore::new();
        let mut dawg = Dawg::new();
        let mut lpt = Lpt::new(FAKE_ROOT);
        for op in ops {
            drive(&mut store, &mut dawg, &mut lpt, op);
            check_state(&store, &dawg, &lpt);
        }
    }
}

#[test]
fn unary_run_keeps_single_spine() {
    let mut store = TextStore::new();
    let mut dawg = Dawg::new();
    let mut lpt = Lpt::new(FAKE_ROOT);
    for _ in 0..40 {
        drive(&mut store, &mut dawg, &mut lpt, UpdateOp::new(1, 'a'));
        check_state(&store, &dawg, &lpt);
    }
    // a^40: the LPT is a single path, nothing ever branches.
    for v in 0..lpt.len() {
        assert!(!lpt.is_marked(v));
    }
}

#[test]
fn descent_labels_spell_real_continuations() {
    // For every branching class and every out-edge, a label over any
    // in-bounds length must spell the characters that actually follow
    // that class's members in the addressed text.
    for seed in [201, 202, 203] {
        let ops = random_ops(seed, 120, 3, 3);
        let mut store = TextStore::new();
        let mut dawg = Dawg::new();
        let mut lpt = Lpt::new(FAKE_ROOT);
        for op in ops {
            drive(&mut store, &mut dawg, &mut lpt, op);
        }
        for v in 0..dawg.len() {
            let long_v = long_of(&store, &dawg, &lpt, v);
            for (c, _target, _primary) in dawg.edges(v) {
                for len in 1..=3usize {
                    let Some((h, i, j)) = lpt.label_for_descent(&store, &dawg, v, c, len)
                    else {
                        continue;
                    };
                    assert_eq!(j - i + 1, len);
                    assert_eq!(store.at(h, i), c);
                    // The span must extend an occurrence of v's longest
                    // member: long(v)·c ends at ⟨h, i⟩, so the whole of
                    // long(v) ++ span sits inside text h ending at j. The
                    // load-bearing part is that the label position leaves
                    // room for long(v) before it.
                    assert!(
                        i > long_v.len(),
                        "label ⟨{h},{i}⟩ cannot end an occurrence of \
                         a length-{} member's extension",
                        long_v.len()
                    );
                    let before: Vec<char> =
                        (i - long_v.len()..i).map(|p| store.at(h, p)).collect();
                    assert_eq!(
                        before, long_v,
                        "⟨{h},{i}⟩ must end an occurrence of long({v})·{c}"
                    );
                }
            }
        }
    }
}
