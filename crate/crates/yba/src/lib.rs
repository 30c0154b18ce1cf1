//! Exact computational algebra for the quadratic Lie algebras attached to the
//! classical Yang-Baxter equation and its non-unitary variant.
//!
//! The toolkit computes, over exact rational arithmetic only:
//!
//! * quadratic presentations of the algebras `tr_n`, `qtr_n`, the graded
//!   variant `qtr0_n` and the Kohno algebra `pb_n` ([`presentations`]);
//! * graded dimensions of their enveloping algebras by sparse rank, plus
//!   rewriting to a legal-monomial normal form ([`ncalg`]);
//! * Hilbert-polynomial and exponential-generating-function identities
//!   ([`series`]);
//! * the Koszul-dual supercommutative algebras with combinatorial bases
//!   ([`dual`]);
//! * Lie-algebra graded dimensions via ideal spinning and a
//!   Witt/PBW-consistent dimension inversion ([`liealg`]);
//! * permutohedron face complexes and two quotient complexes with exact
//!   integral homology ([`topo`]);
//! * an injective labeling of legal words by tensor-coordinate data
//!   ([`univ`]).
//!
//! No floating point is used anywhere; every dimension, rank and homology
//! group is exact.

pub mod caps;
pub mod combinat;
pub mod dual;
pub mod error;
pub mod exact;
pub mod liealg;
pub mod ncalg;
pub mod presentations;
pub mod series;
pub mod topo;
pub mod univ;

pub use caps::Caps;
pub use error::{Error, Result};
