//! Exact tools around Sidorenko's inequality `t_H(G) >= t_{K2}(G)^{|E(H)|}`.
//!
//! * [`graph`], [`graph6`], [`random`], [`iso`]: simple graphs, their text
//!   format, seeded generators and small-scale isomorphism.
//! * [`hom`]: homomorphism counts (enumeration and tree-decomposition DP),
//!   densities and step-function densities.
//! * [`arrange`]: tree-arrangeability of bipartite graphs.
//! * [`construct`]: Cartesian and tensor products, `psi_T`, `phi`, degree
//!   splitting and the named graph catalogue.
//! * [`proof`]: exact evaluation of the normalised functionals attached to a
//!   tree arrangement.
//! * [`verify`]: the exact inequality check, corpus runs and classification.
//!
//! No floating point is used on any verification path.

pub mod arrange;
pub mod construct;
pub mod graph;
pub mod graph6;
pub mod hom;
pub mod iso;
pub mod proof;
pub mod random;
pub mod rational;
pub mod verify;

pub use graph::{Bipartition, Graph};
pub use rational::{BigCount, Rational};
