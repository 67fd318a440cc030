//! Exact computation of coloured `U_q(sl2)` tangle invariants through
//! Jones–Wenzl projectors, together with checks of the graded algebra
//! computations that categorify them.

pub mod error;
pub mod grasscoh;
pub mod intertwiner;
pub mod invariant;
pub mod linalg;
pub mod qseries;
pub mod quiverkat;
pub mod tangle;
pub mod uqsl2;

pub use error::{Error, Result};
pub use intertwiner::Intertwiner;
pub use invariant::Mode;
pub use qseries::{
    quantum_binomial, quantum_factorial, quantum_integer, BigradedPolynomial, LaurentSeries,
    Rational,
};
pub use tangle::{BoundaryPoint, ColouredDiagram, MoveKind};
pub use uqsl2::{Gen, ModuleElement};
