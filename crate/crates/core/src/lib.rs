//! Exact computations for additive combinatorics over `Z/N` and `F_p`.
//!
//! Sets, functions, convolutions and energies are computed by direct
//! enumeration with integer arithmetic wherever the inputs are integral, so
//! identities can be checked with zero tolerance. Complex and spectral
//! quantities use double precision with the tolerances in [`tol`].

pub mod check;
pub mod energy;
pub mod error;
pub mod experiments;
pub mod field;
pub mod func;
pub mod group;
pub mod par;
pub mod spectral;
pub mod tol;
pub mod transform;
pub mod verify;

pub use check::IneqCheck;
pub use error::{Error, Result};
pub use func::{FnValues, GenConvTable, GroupFn, TupleFn};
pub use group::{CyclicGroup, GroupElement, GroupSet, Shift, Sign, TupleSet};
pub use par::Exec;
