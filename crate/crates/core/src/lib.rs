//! Exact computations for the tournament profile dimension: tournaments and
//! their canonical forms, Lyndon words over strongly connected tournaments,
//! flag products, density polynomials, step tournamentons, and the blow-up
//! family `W_k` with its Jacobian and Newton inversion.

pub mod budget;
pub mod construction;
pub mod error;
pub mod flagalg;
pub mod poly;
pub mod rational;
pub mod solver;
pub mod tournamentons;
pub mod tournaments;
pub mod verify;
pub mod words;

pub use budget::Budget;
pub use construction::{Certificate, WkContext, WkParams};
pub use error::{Error, Result};
pub use flagalg::{LinComb, Reduction};
pub use poly::{Monomial, Point, Polynomial, VarId};
pub use rational::Rational;
pub use solver::{ProbeReport, SolveOptions, SolveReport, SolveStatus};
pub use tournamentons::{Block, Diagonal, StepTournamenton};
pub use tournaments::{SccDecomposition, Tournament};
pub use words::{Letter, TieBreak, Word, WordCombo};
