//! Angle-preserving maps on the unit sphere and on real and complex projective
//! space.
//!
//! The examples directory is the best entry point, one program per area:
//!
//! - `transition_probability`: sphere and line angles, `Tr PQ`, the gap metric
//! - `level_set_intersections`: cardinality tables, cap diameters, `γ₀`, the tilde point
//! - `closure_certificates`: seed angle to rigidity verdict, with replay
//! - `qubit_bloch`: qubit lines on the Bloch sphere
//! - `wigner_fit`: recover a (conjugate-)linear isometry from a line map
//! - `oracle_checks`: closed forms against the grid oracles
//! - `recursions_and_constants`: the recursive sequences and transcendental roots
//!
//! The `angleforge` binary wraps the same functions (`verify`, `closure`, `fit`, `curves`).

pub mod angle_sets;
pub mod bloch;
pub mod cli;
pub mod closure;
pub mod error;
pub mod linalg;
pub mod oracle;
pub mod symmetry_fit;
