//! Puiseux series for algebraic space curves.
//!
//! The symbolic side computes the tropical prevariety of a curve system,
//! mixed volumes and exact series expansions; the numeric side runs a
//! polyhedral end game along a moving slice to recover tropisms that hide
//! inside higher-dimensional prevariety cones.

pub mod polycore;
pub mod cone;
pub mod geometry;
pub mod linalg;
pub mod tropical;
pub mod mixedvol;
pub mod homotopy;
pub mod puiseux;
pub mod cli;
