//! Online index over a growing collection of texts.
//!
//! The collection grows fully-online: any text may be extended by one
//! character at any time. The library maintains, in lock step:
//!
//! * a generalized DAWG over the collection ([`dawg`]),
//! * its spanning tree of primary edges with a dynamic-tree overlay ([`lpt`]),
//! * a generalized suffix tree with lazily-labeled leaf edges ([`stree`]),
//!   kept current through a pluggable reversed-suffix-link oracle ([`oracle`]),
//!
//! and exposes live pattern queries over both structures ([`query`]).
//! [`index::OnlineIndex`] ties the pieces together; [`text::TextStore`] holds
//! the texts themselves and the update-stream format.

pub mod dawg;
pub mod dyntree;
pub mod index;
pub mod lpt;
pub mod oracle;
pub mod oracle_full;
pub mod query;
pub mod rstree;
pub mod stree;
pub mod text;
