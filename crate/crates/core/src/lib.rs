//! Exact and numerical toolkit for the standard quantum Hopf fibration.
//!
//! The crate realizes, at desk scale, the U(1)-fibration of quantum SU(2)
//! over the standard Podles sphere in its pullback (fibre-product) picture,
//! and computes the K-theoretic invariants of the associated quantum line
//! bundles:
//!
//! - [`scalar`] — exact arithmetic in the rational function field Q(q);
//! - [`presentation`], [`ncpoly`] — alphabets, oriented rewrite rules, and
//!   PBW normal forms for quantum SU(2), the Podles sphere, the quantum
//!   disc, the circle, and the universal isometry;
//! - [`confluence`] — strategy-agreement harness certifying the rule sets;
//! - [`hopf`] — coproduct, counit, antipode, the circle projection and the
//!   induced U(1)-coaction on quantum SU(2);
//! - [`oprep`] — truncated Hilbert space representations, the symbol map,
//!   and the elementary-matrix constructions inside the quantum disc;
//! - [`pullback`] — the graded fibre-product comodule algebra, line-bundle
//!   grades, and the exact embedding of quantum SU(2);
//! - [`connection`] — strong connections: the explicit one on the pullback,
//!   the axiom checker, and the two-piece combination formula;
//! - [`ktheory`] — Bass idempotents, line-bundle projections, and the index
//!   pairing that yields winding numbers.

pub mod confluence;
pub mod connection;
pub mod error;
pub mod hopf;
pub mod ncpoly;
pub mod oprep;
pub mod par;
pub mod presentation;
pub mod pullback;
pub mod scalar;

pub mod ktheory;

pub use error::{AlgebraError, Result};
pub use ncpoly::{NCPoly, Weight};
pub use presentation::{PresId, Presentation, Word};
pub use scalar::{QPoly, QRat};
