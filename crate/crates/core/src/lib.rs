//! Exact combinatorics for stability systems below ω^ω: the derived tree
//! orders, the forcing of stability systems with its extension order, and a
//! replay of the recursive construction against declared stability
//! patterns.

pub mod ordinal;
pub mod stability;
pub mod oracle;
pub mod poset;
pub mod construction;
pub mod gen;
pub mod suites;
pub mod dot;
