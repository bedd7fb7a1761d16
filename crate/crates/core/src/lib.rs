//! Exact polyhedral machinery for set-valued Lagrange duality in convex
//! vector programming.
//!
//! Given a finite-dimensional convex vector program with affine data and
//! polyhedral order cones, this crate builds the separator cone of the graph
//! of the upper image at a feasible value `y0`, the Lagrange process derived
//! from it (a closed convex process `Z ⇉ Y`), the image of the associated
//! unconstrained dual program, and checks the minimality and proper
//! efficiency transfer statements between the primal and dual programs.
//!
//! Every decision is made in exact rational arithmetic. The crate is
//! `no_std` and only needs `alloc`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod certify;
pub mod error;
pub mod exactlp;
pub mod model;
pub mod polyhedra;
pub mod process;

pub use error::{Error, Result};
pub use exactlp::{Rational, RationalVector};
