//! Exact braiding and fusion matrices for the vector representations of
//! B_n, C_n and D_n, link invariants by tensor contraction, an independent
//! Kauffman skein evaluator, and an Airy-function Stokes demo.

pub mod algebra;
pub mod braiding;
pub mod laurent;
pub mod linalg;
pub mod skein;
pub mod tangle;
pub mod thimble;
pub mod verify;

pub use algebra::{make_spec, AlgebraError, AlgebraSpec, Family, WeightLabel};
pub use braiding::{BraidMatrix, BraidingError, FusionMatrix};
pub use laurent::{Gaussian, LaurentError, RingElement};
pub use skein::{PlanarDiagram, SkeinError, SkeinParams};
pub use tangle::{BraidWord, Model, MorseEvent, Tape, TangleError};
pub use thimble::{AiryParams, FlowTrajectory, ThimbleError};
pub use verify::VerifyReport;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Laurent(#[from] LaurentError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Braiding(#[from] BraidingError),
    #[error(transparent)]
    Tangle(#[from] TangleError),
    #[error(transparent)]
    Skein(#[from] SkeinError),
    #[error(transparent)]
    Thimble(#[from] ThimbleError),
}
