//! Exact flag vectors of low-dimensional polytopes, their coordinates in the
//! (C,D) word basis, and the search for effective and extremal word-sets
//! over corpora of 01-polytopes.

pub mod bitset;
pub mod cdbasis;
pub mod corpus;
pub mod exactnum;
pub mod hull;
pub mod lattice;
pub mod search;
pub mod verify;
