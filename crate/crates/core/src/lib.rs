//! Exact computations with symmetrized graph monomials.
//!
//! A loopless multigraph `g` on vertices `x_1..x_n` defines the graph monomial
//! `P_g = ∏ (x_i - x_j)^{a_ij}` and its symmetrization `g̃ = Σ_σ P_g(σx)`.
//! This crate builds these polynomials exactly, enumerates multigraphs up to
//! isomorphism, relates them to the partition-graph and square-graph bases of
//! symmetric translation-invariant polynomials, and classifies them as
//! vanishing, square-cone members, sign-changing, or sums of squares.
//!
//! Discriminants of derivatives `D_{n,k}` are computed exactly so their
//! expansions over square graphs can be checked with an exact LP.

pub mod acceptance;
pub mod bases;
pub mod classify;
pub mod discriminant;
pub mod error;
pub mod graphs;
pub mod linopt;
pub mod polyalg;
pub mod positivity;
pub mod rational;
pub mod symgm;

pub use error::{Error, Result};
pub use graphs::{CanonicalKey, Multigraph};
pub use polyalg::{ElemPoly, Partition, Poly, SymPoly};
pub use rational::Rational;
