//! Exact rational linear algebra, phase-1 simplex, and square-cone membership.

mod cone;
mod lp;
mod matrix;

pub use cone::{
    cone_membership, cone_membership_with, square_generators, ConeCertificate, ConeGenerator, ConeResult,
    ConeResultJson, ConeTermJson, FarkasCertificate, FarkasJson, GENERATOR_RULE,
};
pub use lp::{lp_feasible, verify_farkas, verify_feasible, LpOutcome};
pub use matrix::{RatMatrix, Rref};
