//! Incidence algebras of finite preorders over exact rings, their Lie
//! derivations, and the decomposition of a Lie derivation into a derivation
//! plus a central-valued map.

pub mod algebra;
pub mod cli;
pub mod error;
pub mod operators;
pub mod preorder;
pub mod proper;
pub mod ring;
pub mod sample;
pub mod solver;

pub use algebra::IncidenceFunction;
pub use error::{Error, Result};
pub use operators::LinearOperator;
pub use preorder::Preorder;
pub use ring::{RingElement, RingSpec};
