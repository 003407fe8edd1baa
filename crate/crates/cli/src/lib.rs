//! Support code for the `billiard-bounds` binary.

pub mod table;
