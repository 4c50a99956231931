//! Cross-bedding cubical tori: combinatorics, symmetry, and ideality.

pub mod abstract_complex;
pub mod group;
pub mod ideal;
pub mod symmetric;

pub use abstract_complex::{AbstractCct, Axis, Cube, Edge, Quad, VKey};
pub use group::Mat;
pub use ideal::{
    check_alignment, check_ideal, slope_monotone_harness, AlignmentReport, IdealityCertificate,
    SlopeStep, SlopeWitness,
};
pub use symmetric::{build_symmetric, Ambient, SymmetricCct};

use thiserror::Error;

/// Failures of CCT construction and certification preconditions.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CctError {
    #[error("seed {layer} is fixed by a coordinate-pair rotation (pair {pair:?} vanishes)")]
    FixedPointViolation { layer: usize, pair: (usize, usize) },
    #[error("orbit points coincide: {0:?} and {1:?}")]
    OrbitCollision(VKey, VKey),
    #[error("face {0} meets the projection pole")]
    PoleProjection(String),
    #[error("equator projection identifies vertices {0:?} and {1:?}")]
    ProjectionNotInjective(VKey, VKey),
    #[error("complex of width {width} lacks layers {lo}..={hi}")]
    MissingLayers { width: usize, lo: usize, hi: usize },
    #[error("projection anchor degenerate at {0:?}")]
    DegenerateAnchor(VKey),
    #[error("tangent direction degenerate in the slope test at exponent {0}")]
    DegenerateTangent(u32),
    #[error("operation requires ambient {expected:?}, got {got:?}")]
    WrongAmbient { expected: Ambient, got: Ambient },
    #[error("deck translation by {translation:?} fails to act as ρ^{exponent} at {key:?}")]
    TranslationViolation {
        key: VKey,
        translation: (i64, i64, i64),
        exponent: u32,
    },
    #[error("the reflection does not preserve the vertex set of layer {layer}")]
    ReflectionViolation { layer: usize },
    #[error("window [{window},{window}+2]: condition ({condition}) fails at the star of {vertex:?}")]
    TransversalityFailure {
        window: usize,
        vertex: VKey,
        condition: char,
    },
    #[error("window [{window},{window}+2]: π₁ images of {a:?} and {b:?} coincide")]
    Pi1Collision { window: usize, a: VKey, b: VKey },
    #[error("slope not obtuse at the top window: tangent inner-product sign {sign} at exponent {exponent}")]
    SlopeNotObtuse { exponent: u32, sign: i8 },
    #[error("not oriented towards C₀: λ(seed_{top}) does not decrease strictly")]
    NotOriented { top: usize },
}
