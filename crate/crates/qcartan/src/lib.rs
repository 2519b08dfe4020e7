//! Exact arithmetic for the combinatorics of graded Cartan matrices of
//! Iwahori-Hecke algebras of type A at a p-th root of unity.
//!
//! Everything here is computed over exact integers and rationals; there is
//! no floating point anywhere. The crate is organised around the objects it
//! computes:
//!
//! - [`partitions`]: integer partitions, p-cores and p-quotients, and the
//!   index sets (p-regular, p-class-regular, multipartitions, `Q_p(n)`)
//!   that label rows, columns and blocks of the Cartan matrix.
//! - [`qpoly`]: integer polynomials and rational Laurent polynomials in `q`,
//!   the q-integers `[p]_l`, and unexpanded products of q-integers
//!   ([`qpoly::ProductForm`]) which carry all weights and determinants.
//! - [`weights`]: the three partition weights `w_E`, `w_H`, `w_G`, the
//!   Glaisher correspondence, and the diagram involution relating them.
//! - [`determinants`]: block determinant exponents `A_j(d)` and the graded
//!   Cartan determinant polynomials.
//! - [`fock`]: the level-1 q-Fock space, the LLT canonical basis algorithm,
//!   graded decomposition and Cartan matrices, and exact determinants.
//! - [`smith`]: Smith normal form over `Q[q, q^-1]` and over the integers,
//!   plus the elementary-divisor comparison harness.
//! - [`habacus`]: the 4-bar abacus for strict partitions at p = 2 (H-cores,
//!   H-quotients, unfolding, and the block-wise product identity).
//! - [`series`]: truncated integer power series used as independent
//!   counting oracles for every generating-function identity.
//! - [`verify`]: one entry point per verifiable statement, producing
//!   machine-readable reports.

pub mod determinants;
pub mod error;
pub mod fock;
pub mod habacus;
pub mod partitions;
pub mod qpoly;
pub mod series;
pub mod smith;
pub mod verify;
pub mod weights;

pub use error::Error;
pub use partitions::{Multipartition, Partition, QIndex};
pub use qpoly::{LaurentPoly, ProductForm, QPoly};

/// Convenience alias used by all fallible operations in this crate.
pub type Result<T> = std::result::Result<T, Error>;
