//! Exact set-valued risk measures for conical market models on finite
//! scenario spaces: polyhedral geometry, rational linear programming,
//! market/acceptance-set construction, primal and dual risk evaluation,
//! and superhedging on scenario trees.

// index loops over parallel arrays dominate the numeric kernels; iterator
// rewrites obscure them
#![allow(clippy::needless_range_loop)]

pub mod acceptance;
pub mod dd;
pub mod linalg;
pub mod lp;
pub mod market;
pub mod model_io;
pub mod polyhedra;
pub mod rational;
pub mod riskmeasure;
pub mod superhedge;

#[doc(hidden)]
pub mod testfix;

pub use polyhedra::{Constraint, GeomError, HRep, Polyhedron, VRep};
pub use rational::{QMat, QVec, Rat};
