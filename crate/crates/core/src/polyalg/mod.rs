//! Exact polynomial arithmetic and the monomial-symmetric representation.

mod elementary;
mod partition;
mod poly;
mod sympoly;

pub use elementary::{elementary_symmetric, to_elementary, ElemPoly};
pub use partition::{partitions, Partition};
pub use poly::{Exponent, Poly};
pub(crate) use sympoly::next_permutation;
pub use sympoly::{eval_monomial_symmetric, symmetrize_poly, SymPoly, SymPolyJson};

