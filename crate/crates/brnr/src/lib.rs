//! Exact linear algebra over F_p for the rationality obstructions of
//! exponent-p central extensions of elementary abelian p-groups.
//!
//! A presentation (the commutator table of such a group) determines an
//! alternating map gamma from wedge^2 U to V. From gamma alone this crate
//! computes the quotients K2_max/K2 and K3_max/K3 in the exterior algebra
//! of U*. The first measures the unramified Brauer group of the invariant
//! field C(G); the second is a lower bound for its degree-three unramified
//! cohomology. Groups where the first vanishes but the second does not are
//! invisible to the classical Brauer obstruction.
//!
//! Modules:
//! * [`field`], [`linalg`] - exact scalar and matrix arithmetic, canonical
//!   subspaces, kernels, annihilators;
//! * [`exterior`], [`render`] - multivectors, wedge products, the pairing,
//!   decomposability, and the `(i,j)` / `[i,j]` text notation;
//! * [`group`] - presentations, gamma, structural checks, the builtin
//!   catalog, and the presentation file format;
//! * [`obstruction`] - the pipeline and its brute-force oracles;
//! * [`explore`] - the X_w construction and candidate searches;
//! * [`selftest`] - the acceptance table behind `brnr selftest`.

pub mod error;
pub mod explore;
pub mod exterior;
pub mod field;
pub mod group;
pub mod linalg;
pub mod obstruction;
pub mod render;
pub mod selftest;

pub use error::{Error, Result};
pub use field::PrimeField;
