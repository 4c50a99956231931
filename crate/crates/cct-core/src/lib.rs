//! Exact-arithmetic construction and certification of cross-bedding cubical
//! tori (CCTs) and the polytope families derived from them.
//!
//! A cross-bedding cubical torus is a cubical 3-complex in the 4-sphere whose
//! vertices fall into *layers*; its quadrilaterals and cubes each span several
//! consecutive layers (they "cross the bedding"). The library builds the
//! symmetric exact family `CT^s[n]` over the field Q(√2,√3), a rational
//! variant, and a numerically certified inscribed variant; it certifies the
//! geometric side conditions these complexes are designed to satisfy
//! (symmetry, transversality, slope, orientation, convex position,
//! reciprocity of the polar dual), extends complexes layer by layer by an
//! exact Cauchy-problem step, and assembles the high-dimensional projectively
//! rigid polytope family `PCCTP_69[n]` through a point-configuration
//! scaffold, a subdirect cone and a Lawrence lift.
//!
//! Everything on the exact path uses arbitrary-precision rational arithmetic
//! (no floating point); numeric output paths use a self-contained dyadic
//! fixed-point float with explicit guard bits.

pub mod cct;
pub mod convex;
pub mod dual;
pub mod export;
pub mod extend;
pub mod geom;
pub mod projective;
pub mod scalar;
pub mod variants;

pub use scalar::{BigFloat, FieldElement, Rational, Scalar};
