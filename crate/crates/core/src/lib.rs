//! Binary cyclic transversal polytopes.
//!
//! A block configuration is a sequence of non-empty subsets of `F_2^d`. Its
//! cyclic transversal polytope is the convex hull of the incidence vectors of
//! the transversals whose entries sum to zero. This crate builds such
//! configurations (directly or by reduction from SAT, packing, matching and
//! cut problems), enumerates their vertices, generates and separates lifted
//! odd-set inequalities, constructs flow-based extended formulations and
//! rank relaxations, and certifies polyhedral statements with exact rational
//! arithmetic.

pub mod checks;
pub mod config;
pub mod enumerate;
pub mod error;
pub mod extform;
pub mod gf2;
pub mod ineq;
pub mod limits;
pub mod lpfile;
pub mod rational;
pub mod reduce;
pub mod relax;
pub mod sample;
pub mod verify;

pub use config::{BlockConfiguration, CoordIndex};
pub use error::{CtpError, Result};
pub use gf2::{BitMatrix, BitVec};
pub use limits::Limits;
pub use rational::{Rational, RationalPoint};
