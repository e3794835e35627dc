//! Extrinsic differential geometry of timelike surfaces in 3-dimensional
//! Minkowski space.
//!
//! The crate computes fundamental forms, shape operators, Gauss and mean
//! curvature, and classifies points of a timelike surface by the algebraic
//! type of the shape operator (umbilic, quasi-umbilic, or diagonalizable).
//! It generates families of null ruled surfaces, locates umbilic curves,
//! solves the Liouville equation underlying the frame PDEs, and
//! reconstructs surfaces by integrating the moving-frame equations.
//!
//! Modules:
//! - [`mink`]: Minkowski inner product, cross product, causal classes, frames.
//! - [`expr`]: expression parser and second-order jet evaluation.
//! - [`surface`]: fundamental forms, shape operator, pointwise classification.
//! - [`generators`]: null ruled and cylinder surface families.
//! - [`flow`]: Liouville/Backlund residuals and frame integration.
//! - [`loci`]: umbilic locus tracing and whole-surface classification.
//! - [`export`]: OBJ / CSV meshes and JSON reports.
//! - [`cli`]: the `quasumb` command-line front end.

pub mod cli;
pub mod error;
pub mod export;
pub mod expr;
pub mod flow;
pub mod generators;
pub mod loci;
pub mod mink;
pub mod surface;

pub use error::{Error, Result};
pub use expr::{eval_jet2, parse_expr, Expr, Jet2};
pub use mink::{
    boost_null_frame, causal_class, minkowski_cross, minkowski_inner, null_frame_from_orthonormal,
    validate_null_frame, CausalClass, MVec3, NullFrame, OrthoFrame, Sign,
};
pub use surface::{
    classify_point, curvatures, first_fundamental, second_fundamental, shape_operator,
    surface_jet, unit_normal, BuiltinSurface, FirstFundamental, PointClass, PointReport,
    SecondFundamental, ShapeMatrix, SurfaceJet, SurfaceSpec,
};
