//! Isomorphism checks between DAWG implementations, over a common view
//! trait so the online structure and the naive constructions compare
//! without conversion.

use crate::epos::NaiveDawg;
use growdex::dawg::Dawg;
use std::collections::{HashMap, VecDeque};

/// Read-only view of a DAWG-shaped automaton.
pub trait DawgView {
    fn source(&self) -> usize;
    fn node_count(&self) -> usize;
    fn long_len(&self, v: usize) -> usize;
    /// Out-edges sorted by character: (char, target, primary).
    fn view_edges(&self, v: usize) -> Vec<(char, usize, bool)>;
    fn slink(&self, v: usize) -> Option<usize>;
}

impl DawgView for Dawg {
    fn source(&self) -> usize {
        growdex::dawg::SOURCE
    }
    fn node_count(&self) -> usize {
        self.len()
    }
    fn long_len(&self, v: usize) -> usize {
        Dawg::long_len(self, v)
    }
    fn view_edges(&self, v: usize) -> Vec<(char, usize, bool)> {
        self.edges(v).collect()
    }
    fn slink(&self, v: usize) -> Option<usize> {
        Dawg::slink(self, v)
    }
}

impl DawgView for NaiveDawg {
    fn source(&self) -> usize {
        0
    }
    fn node_count(&self) -> usize {
        self.nodes.len()
    }
    fn long_len(&self, v: usize) -> usize {
        self.nodes[v].long.len()
    }
    fn view_edges(&self, v: usize) -> Vec<(char, usize, bool)> {
        self.nodes[v]
            .edges
            .iter()
            .map(|(&c, &(t, p))| (c, t, p))
            .collect()
    }
    fn slink(&self, v: usize) -> Option<usize> {
        self.nodes[v].slink
    }
}

/// BFS pairing from the sources: edge characters, primary flags, longest
/// lengths, suffix links, and node counts must all agree.
pub fn check_dawg_isomorphic(a: &impl DawgView, b: &impl DawgView) -> Result<(), String> {
    let mut a_to_b: HashMap<usize, usize> = HashMap::new();
    let mut b_to_a: HashMap<usize, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    let visit = |x: usize,
                     y: usize,
                     a_to_b: &mut HashMap<usize, usize>,
                     b_to_a: &mut HashMap<usize, usize>,
                     queue: &mut VecDeque<(usize, usize)>|
     -> Result<(), String> {
        match (a_to_b.get(&x), b_to_a.get(&y)) {
            (Some(&py), Some(&px)) if py == y && px == x => Ok(()),
            (None, None) => {
                a_to_b.insert(x, y);
                b_to_a.insert(y, x);
                queue.push_back((x, y));
                Ok(())
            }
            _ => Err(format!("node pairing conflict at ({x}, {y})")),
        }
    };
    visit(a.source(), b.source(), &mut a_to_b, &mut b_to_a, &mut queue)?;
    while let Some((x, y)) = queue.pop_front() {
        if a.long_len(x) != b.long_len(y) {
            return Err(format!(
                "long_len mismatch at ({x}, {y}): {} vs {}",
                a.long_len(x),
                b.long_len(y)
            ));
        }
        let ex = a.view_edges(x);
        let ey = b.view_edges(y);
        if ex.len() != ey.len() {
            return Err(format!("out-degree mismatch at ({x}, {y})"));
        }
        for ((ca, ta, pa), (cb, tb, pb)) in ex.into_iter().zip(ey) {
            if ca != cb || pa != pb {
                return Err(format!(
                    "edge mismatch at ({x}, {y}): ({ca}, primary={pa}) vs ({cb}, primary={pb})"
                ));
            }
            visit(ta, tb, &mut a_to_b, &mut b_to_a, &mut queue)?;
        }
    }
    if a_to_b.len() != a.node_count() || a_to_b.len() != b.node_count() {
        return Err(format!(
            "node counts differ: {} paired, {} vs {}",
            a_to_b.len(),
            a.node_count(),
            b.node_count()
        ));
    }
    for (&x, &y) in &a_to_b {
        match (a.slink(x), b.slink(y)) {
            (None, None) => {}
            (Some(sx), Some(sy)) if a_to_b.get(&sx) == Some(&sy) => {}
            (sx, sy) => {
                return Err(format!("slink mismatch at ({x}, {y}): {sx:?} vs {sy:?}"))
            }
        }
    }
    Ok(())
}

pub fn dawg_isomorphic(a: &impl DawgView, b: &impl DawgView) -> bool {
    check_dawg_isomorphic(a, b).is_ok()
}
