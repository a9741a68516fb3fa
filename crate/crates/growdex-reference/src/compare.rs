//! Lock-step structural comparison between the online DAWG and the
//! definitional growing trie.
//!
//! The trie side knows ground truth: classes are maximal suffix-link chains
//! of equal occurrence count, the class representative is the deepest
//! member, and an edge of the class automaton is primary exactly when the
//! representative's child is itself a representative. `check_dawg` builds
//! the node bijection by BFS and then verifies lengths, edges, primary
//! flags, suffix links (with their inverse lists), active nodes, prefix
//! anchors, and the subtree-sum identity that live occurrence counting
//! relies on.

use crate::trie::{GrowingTrie, ROOT};
use growdex::dawg::{Dawg, SOURCE};
use growdex::text::TextStore;
use std::collections::{HashMap, VecDeque};

/// Full structural check; `Err` carries a human-readable mismatch.
pub fn check_dawg(store: &TextStore, trie: &GrowingTrie, dawg: &Dawg) -> Result<(), String> {
    let mut to_rep: HashMap<usize, usize> = HashMap::new();
    let mut from_rep: HashMap<usize, usize> = HashMap::new();
    let mut queue = VecDeque::new();

    let visit = |d: usize,
                     r: usize,
                     to_rep: &mut HashMap<usize, usize>,
                     from_rep: &mut HashMap<usize, usize>,
                     queue: &mut VecDeque<(usize, usize)>|
     -> Result<(), String> {
        match to_rep.get(&d) {
            Some(&prev) if prev != r => Err(format!(
                "dawg node {d} maps to trie reps {prev} and {r}"
            )),
            Some(_) => Ok(()),
            None => {
                if let Some(&prev) = from_rep.get(&r) {
                    return Err(format!("trie rep {r} maps to dawg nodes {prev} and {d}"));
                }
                to_rep.insert(d, r);
                from_rep.insert(r, d);
                queue.push_back((d, r));
                Ok(())
            }
        }
    };

    visit(
        SOURCE,
        trie.class_rep(ROOT),
        &mut to_rep,
        &mut from_rep,
        &mut queue,
    )?;
    while let Some((d, r)) = queue.pop_front() {
        if dawg.long_len(d) != trie.nodes[r].depth {
            return Err(format!(
                "dawg node {d}: long_len {} but rep {r} has depth {}",
                dawg.long_len(d),
                trie.nodes[r].depth
            ));
        }
        let dawg_chars: Vec<char> = dawg.edges(d).map(|(c, _, _)| c).collect();
        let trie_chars: Vec<char> = trie.nodes[r].children.keys().copied().collect();
        if dawg_chars != trie_chars {
            return Err(format!(
                "dawg node {d} edge chars {dawg_chars:?} ≠ rep {r} children {trie_chars:?}"
            ));
        }
        for (c, target, primary) in dawg.edges(d) {
            let child = trie.nodes[r].children[&c];
            let child_rep = trie.class_rep(child);
            let expect_primary = child_rep == child;
            if primary != expect_primary {
                return Err(format!(
                    "dawg edge {d} --{c}--> {target}: primary={primary}, expected {expect_primary}"
                ));
            }
            visit(target, child_rep, &mut to_rep, &mut from_rep, &mut queue)?;
        }
    }

    if to_rep.len() != dawg.len() {
        return Err(format!(
            "only {} of {} dawg nodes reachable from the source",
            to_rep.len(),
            dawg.len()
        ));
    }
    let rep_count = (0..trie.nodes.len())
        .filter(|&v| trie.class_rep(v) == v)
        .count();
    if rep_count != dawg.len() {
        return Err(format!(
            "trie has {rep_count} classes but dawg has {} nodes",
            dawg.len()
        ));
    }

    // Suffix links: drop the first character of the class's shortest member.
    for (&d, &r) in &to_rep {
        if d == SOURCE {
            if dawg.slink(d).is_some() {
                return Err("source must have no suffix link".into());
            }
            continue;
        }
        let shortest = trie.class_shortest(r);
        let expected_rep = trie.class_rep(
            trie.nodes[shortest]
                .slink
                .ok_or_else(|| format!("non-root shortest member {shortest} lacks slink"))?,
        );
        let actual = dawg
            .slink(d)
            .ok_or_else(|| format!("dawg node {d} lacks suffix link"))?;
        if to_rep[&actual] != expected_rep {
            return Err(format!(
                "dawg node {d}: slink {actual} maps to rep {}, expected {expected_rep}",
                to_rep[&actual]
            ));
        }
        // Shortest-member length = long_len(slink) + 1.
        if trie.nodes[shortest].depth != dawg.long_len(actual) + 1 {
            return Err(format!(
                "dawg node {d}: min length {} ≠ slink long {} + 1",
                trie.nodes[shortest].depth,
                dawg.long_len(actual)
            ));
        }
    }

    // slink_children is exactly the inverse of slink.
    let mut inverse: HashMap<usize, Vec<usize>> = HashMap::new();
    for d in 0..dawg.len() {
        if let Some(p) = dawg.slink(d) {
            inverse.entry(p).or_default().push(d);
        }
    }
    for d in 0..dawg.len() {
        let mut stored = dawg.slink_children(d).to_vec();
        stored.sort_unstable();
        let mut expect = inverse.remove(&d).unwrap_or_default();
        expect.sort_unstable();
        if stored != expect {
            return Err(format!(
                "dawg node {d}: slink_children {stored:?} ≠ inverse {expect:?}"
            ));
        }
    }

    // Prefix anchors: each (text, position) anchors at the class of that
    // prefix; the class's longest member is the prefix itself. Position 0
    // (the empty prefix) anchors at the source for every registered text.
    let mut expected_prefix: HashMap<usize, u64> = HashMap::new();
    for k in 1..=store.text_count() {
        let mut cur = ROOT;
        *expected_prefix.entry(from_rep[&ROOT]).or_default() += 1;
        for &c in store.text(k) {
            cur = *trie.nodes[cur]
                .children
                .get(&c)
                .ok_or_else(|| format!("prefix of text {k} missing from trie"))?;
            let rep = trie.class_rep(cur);
            if rep != cur {
                return Err(format!(
                    "prefix locus {cur} of text {k} is not its class rep {rep}"
                ));
            }
            *expected_prefix.entry(from_rep[&cur]).or_default() += 1;
        }
    }
    for d in 0..dawg.len() {
        let expect = expected_prefix.get(&d).copied().unwrap_or(0);
        if dawg.prefix_count(d) != expect {
            return Err(format!(
                "dawg node {d}: prefix_count {} ≠ expected {expect}",
                dawg.prefix_count(d)
            ));
        }
    }

    // Occurrence identity: |Epos(v)| = Σ prefix_count over the suffix-link
    // subtree of v. Computed with one post-order pass.
    let mut subtree = vec![0u64; dawg.len()];
    let mut stack = vec![(SOURCE, false)];
    while let Some((d, expanded)) = stack.pop() {
        if expanded {
            subtree[d] = dawg.prefix_count(d)
                + dawg
                    .slink_children(d)
                    .iter()
                    .map(|&c| subtree[c])
                    .sum::<u64>();
        } else {
            stack.push((d, true));
            for &c in dawg.slink_children(d) {
                stack.push((c, false));
            }
        }
    }
    for (&d, &r) in &to_rep {
        if subtree[d] != trie.nodes[r].occ as u64 {
            return Err(format!(
                "dawg node {d}: prefix subtree sum {} ≠ occ {} of rep {r}",
                subtree[d], trie.nodes[r].occ
            ));
        }
    }

    // Active nodes: class of the whole current text.
    for k in 1..=store.text_count() {
        let full = trie.suffix_nodes(k)[0];
        let expect = from_rep[&trie.class_rep(full)];
        if dawg.active(k) != expect {
            return Err(format!(
                "active({k}) = {} but whole-text class is {expect}",
                dawg.active(k)
            ));
        }
        if dawg.long_len(dawg.active(k)) != store.len(k) {
            return Err(format!(
                "active({k}) long_len {} ≠ |T_{k}| {}",
                dawg.long_len(dawg.active(k)),
                store.len(k)
            ));
        }
    }

    Ok(())
}
