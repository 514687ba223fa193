//! Exact rational polytope laboratory for slice and weakly-open-set diameters
//! in finite truncations of `c0` and `c`.
//!
//! Every geometric routine is generic over an exact ordered [`scalar::Field`];
//! the aliases below fix it to arbitrary-precision rationals.

pub mod error;
pub mod experiments;
pub mod exact_lp;
pub mod constructions;
pub mod polytope;
pub mod scalar;
pub mod seqspace;

pub use error::{Error, Result};

pub type Scalar = num_rational::BigRational;
pub type Vector = seqspace::SeqVector<Scalar>;
pub type Dual = seqspace::Functional<Scalar>;
pub type Model = seqspace::SpaceModel<Scalar>;
pub type Polytope = polytope::VPolytope<Scalar>;
pub type Problem = exact_lp::LpProblem<Scalar>;
