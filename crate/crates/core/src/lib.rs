//! Exact invariants of the monoid `CA(G;A)` of cellular automata over a finite
//! group `G` and a finite alphabet `A`.
//!
//! The crate is split along the objects it computes:
//!
//! * [`groups`]: finite groups given by Cayley tables, their subgroup lattice,
//!   conjugacy classes of subgroups, normalisers, quotients and the Möbius
//!   function of the lattice.
//! * [`configs`]: configurations `x: G -> A`, the right shift action, orbits,
//!   stabilisers and the per-class orbit counts `alpha_[H]`.
//! * [`counting`]: aperiodic configuration counts and bounds.
//! * [`ica`]: the wreath-product decomposition of the group of invertible
//!   cellular automata.
//! * [`camonoid`]: a brute-force engine that materialises cellular automata as
//!   explicit self-maps of `A^G` and computes monoid closures.
//! * [`genset`]: the class graph and the generator sets for the relative rank
//!   of the invertible automata inside `CA(G;A)`.
//! * [`cli`]: the command-line front end.
//!
//! Every formula-based routine has a brute-force counterpart so the two can be
//! cross-checked at small sizes.

pub mod camonoid;
pub mod cli;
pub mod configs;
pub mod counting;
mod error;
pub mod exec;
pub mod genset;
pub mod groups;
pub mod ica;
mod limits;

pub use error::{CayleyError, Error, Result};
pub use exec::Execution;
pub use limits::Limits;
