//! Checks for the CHSH scenario and the algebra around it.
//!
//! * [`linalg`]: dense complex matrices, Kronecker products, a Jacobi
//!   eigensolver for Hermitian matrices.
//! * [`quantum`]: Pauli observables, density matrices, CHSH values, the
//!   commutator observable `F(A, B)` and the Tsirelson maximum.
//! * [`lhv`]: finite local hidden variable models and the exhaustive local
//!   bound.
//! * [`ks`]: Kochen-Specker contexts, the Mermin-Peres square and
//!   noncontextual coloring search.
//! * [`logic`]: propositional formulas, truth tables and the consistency
//!   case analysis.

#![forbid(unsafe_code)]

pub mod error;
pub mod ks;
pub mod lhv;
pub mod linalg;
pub mod logic;
pub mod outcome;
pub mod quantum;

pub use error::{Error, Result};
pub use outcome::Outcome;
