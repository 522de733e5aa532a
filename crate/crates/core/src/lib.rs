//! Markoff triples modulo a prime: finite-field substrate, rotations and
//! their orders, the mod-p graph, constructive path finding through the
//! cage, and integer lifts with their size bounds.

pub mod bgs;
pub mod experiments;
pub mod field;
pub mod graph;
pub mod lift;
pub mod point;
