//! Plane-geometry theorem proving over derivation hypergraphs of lengths and
//! ratios, checked against a Cartesian oracle.

pub mod dim;
pub mod dsl;
pub mod emit;
pub mod graph;
pub mod num;
pub mod pipeline;
pub mod rules;
pub mod scene;
pub mod verify;
