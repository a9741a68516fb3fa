//! Brute-force reference structures for validating the online index.
//!
//! Everything here is built definitionally and independently of the online
//! algorithms: end-position tables by substring enumeration, an incrementally
//! grown suffix trie, from-scratch compacted suffix trees, and a semi-online
//! builder. Comparators check the online structures against these references
//! after every single update.

pub mod compare;
pub mod epos;
pub mod gen;
pub mod iso;
pub mod rev_compare;
pub mod stree_compare;
pub mod trie;
