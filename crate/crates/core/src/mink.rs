//! Minkowski linear algebra on R^{1,2}.
//!
//! Vectors carry coordinates (x0, x1, x2) with the indefinite inner product
//! `<v, w> = v0*w0 - v1*w1 - v2*w2`, so the x0 axis is the timelike one.
//! The cross product is the Minkowski one, oriented so that
//! `<u, v x w> = det[u v w]` and `e0 x e1 = -e2` for the standard basis.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::ops::{Add, Div, Mul, Neg, Sub};

/// A point or vector of R^{1,2}; x0 is the timelike coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct MVec3 {
    pub x0: f64,
    pub x1: f64,
    pub x2: f64,
}

impl MVec3 {
    pub const ZERO: MVec3 = MVec3 {
        x0: 0.0,
        x1: 0.0,
        x2: 0.0,
    };

    pub const fn new(x0: f64, x1: f64, x2: f64) -> Self {
        MVec3 { x0, x1, x2 }
    }

    /// Squared Euclidean norm, used only for scale estimates and tolerances.
    pub fn euclid_norm_sq(self) -> f64 {
        self.x0 * self.x0 + self.x1 * self.x1 + self.x2 * self.x2
    }

    pub fn euclid_norm(self) -> f64 {
        self.euclid_norm_sq().sqrt()
    }

    pub fn is_finite(self) -> bool {
        self.x0.is_finite() && self.x1.is_finite() && self.x2.is_finite()
    }

    /// Euclidean cross product; only used as an independence measure
    /// (never as a Minkowski-geometric object).
    pub fn euclid_cross(self, w: MVec3) -> MVec3 {
        MVec3::new(
            self.x1 * w.x2 - self.x2 * w.x1,
            self.x2 * w.x0 - self.x0 * w.x2,
            self.x0 * w.x1 - self.x1 * w.x0,
        )
    }
}

impl Add for MVec3 {
    type Output = MVec3;
    fn add(self, w: MVec3) -> MVec3 {
        MVec3::new(self.x0 + w.x0, self.x1 + w.x1, self.x2 + w.x2)
    }
}

impl Sub for MVec3 {
    type Output = MVec3;
    fn sub(self, w: MVec3) -> MVec3 {
        MVec3::new(self.x0 - w.x0, self.x1 - w.x1, self.x2 - w.x2)
    }
}

impl Mul<f64> for MVec3 {
    type Output = MVec3;
    fn mul(self, s: f64) -> MVec3 {
        MVec3::new(self.x0 * s, self.x1 * s, self.x2 * s)
    }
}

impl Mul<MVec3> for f64 {
    type Output = MVec3;
    fn mul(self, v: MVec3) -> MVec3 {
        v * self
    }
}

impl Div<f64> for MVec3 {
    type Output = MVec3;
    fn div(self, s: f64) -> MVec3 {
        MVec3::new(self.x0 / s, self.x1 / s, self.x2 / s)
    }
}

impl Neg for MVec3 {
    type Output = MVec3;
    fn neg(self) -> MVec3 {
        MVec3::new(-self.x0, -self.x1, -self.x2)
    }
}

/// `<v, w> = v0*w0 - v1*w1 - v2*w2`.
pub fn minkowski_inner(v: MVec3, w: MVec3) -> f64 {
    v.x0 * w.x0 - v.x1 * w.x1 - v.x2 * w.x2
}

/// Minkowski cross product, oriented so `<u, v x w> = det[u v w]`.
pub fn minkowski_cross(v: MVec3, w: MVec3) -> MVec3 {
    MVec3::new(
        v.x1 * w.x2 - v.x2 * w.x1,
        v.x0 * w.x2 - v.x2 * w.x0,
        v.x1 * w.x0 - v.x0 * w.x1,
    )
}

/// Causal character of a nonzero vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CausalClass {
    Spacelike,
    Timelike,
    Null,
}

impl std::fmt::Display for CausalClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CausalClass::Spacelike => write!(f, "spacelike"),
            CausalClass::Timelike => write!(f, "timelike"),
            CausalClass::Null => write!(f, "null"),
        }
    }
}

/// Classify `v` by the sign of `<v, v>`, calling it null when `|<v,v>|`
/// is below `tol` times the squared Euclidean norm (scale invariant).
pub fn causal_class(v: MVec3, tol: f64) -> Result<CausalClass> {
    let scale = v.euclid_norm_sq();
    if scale == 0.0 {
        return Err(Error::ZeroVector);
    }
    let q = minkowski_inner(v, v);
    if q.abs() <= tol * scale {
        Ok(CausalClass::Null)
    } else if q > 0.0 {
        Ok(CausalClass::Timelike)
    } else {
        Ok(CausalClass::Spacelike)
    }
}

/// Default tolerance for frame Gram-defect checks.
pub const FRAME_TOL: f64 = 1e-8;

/// Oriented orthonormal frame: `<e0,e0> = 1`, `<e1,e1> = <e2,e2> = -1`,
/// pairwise orthogonal, `e0 x e1 = -e2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrthoFrame {
    pub e0: MVec3,
    pub e1: MVec3,
    pub e2: MVec3,
}

impl OrthoFrame {
    /// The standard basis (1,0,0), (0,1,0), (0,0,1).
    pub fn standard() -> Self {
        OrthoFrame {
            e0: MVec3::new(1.0, 0.0, 0.0),
            e1: MVec3::new(0.0, 1.0, 0.0),
            e2: MVec3::new(0.0, 0.0, 1.0),
        }
    }

    /// Max absolute deviation from the orthonormality and orientation
    /// conditions.
    pub fn gram_defect(&self) -> f64 {
        let mut d: f64 = 0.0;
        d = d.max((minkowski_inner(self.e0, self.e0) - 1.0).abs());
        d = d.max((minkowski_inner(self.e1, self.e1) + 1.0).abs());
        d = d.max((minkowski_inner(self.e2, self.e2) + 1.0).abs());
        d = d.max(minkowski_inner(self.e0, self.e1).abs());
        d = d.max(minkowski_inner(self.e0, self.e2).abs());
        d = d.max(minkowski_inner(self.e1, self.e2).abs());
        let orient = minkowski_cross(self.e0, self.e1) + self.e2;
        d.max(orient.euclid_norm())
    }
}

/// Adapted null frame: f1, f2 null with `<f1,f2> = 1`, f3 unit spacelike
/// orthogonal to both.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NullFrame {
    pub f1: MVec3,
    pub f2: MVec3,
    pub f3: MVec3,
}

impl NullFrame {
    /// The null frame built from the standard orthonormal basis.
    pub fn standard() -> Self {
        null_frame_from_orthonormal(&OrthoFrame::standard())
            .expect("standard basis is a valid oriented frame")
    }
}

/// Build the adapted null frame f1 = (e0+e1)/sqrt(2), f2 = (e0-e1)/sqrt(2),
/// f3 = e2 from an orthonormal frame.
pub fn null_frame_from_orthonormal(f: &OrthoFrame) -> Result<NullFrame> {
    let defect = f.gram_defect();
    if defect > FRAME_TOL {
        return Err(Error::InvalidFrame("orthonormal frame", defect));
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Ok(NullFrame {
        f1: (f.e0 + f.e1) * s,
        f2: (f.e0 - f.e1) * s,
        f3: f.e2,
    })
}

/// Discrete sign in a frame change, kept as an enum so the two-valued
/// ambiguity stays visible in signatures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_f64(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// Frame change (f1, f2, f3) -> (e1*e^theta f1, e1*e^-theta f2, e2*f3).
/// Preserves all null-frame Gram conditions for any theta.
pub fn boost_null_frame(fr: &NullFrame, theta: f64, eps1: Sign, eps2: Sign) -> NullFrame {
    let s1 = eps1.as_f64();
    let s2 = eps2.as_f64();
    NullFrame {
        f1: fr.f1 * (s1 * theta.exp()),
        f2: fr.f2 * (s1 * (-theta).exp()),
        f3: fr.f3 * s2,
    }
}

/// Validity report for a null frame: the worst Gram-condition defect and
/// whether it passes at the given tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameValidity {
    pub max_defect: f64,
    pub pass: bool,
}

/// Check the six Gram conditions of an adapted null frame:
/// `<f1,f1> = <f2,f2> = 0`, `<f1,f2> = 1`, `<f1,f3> = <f2,f3> = 0`,
/// `<f3,f3> = -1`. Reports the max absolute deviation.
pub fn validate_null_frame(fr: &NullFrame, tol: f64) -> FrameValidity {
    let defects = [
        minkowski_inner(fr.f1, fr.f1),
        minkowski_inner(fr.f2, fr.f2),
        minkowski_inner(fr.f1, fr.f2) - 1.0,
        minkowski_inner(fr.f1, fr.f3),
        minkowski_inner(fr.f2, fr.f3),
        minkowski_inner(fr.f3, fr.f3) + 1.0,
    ];
    let max_defect = defects.iter().fold(0.0_f64, |m, d| m.max(d.abs()));
    FrameValidity {
        max_defect,
        pass: max_defect <= tol,
    }
}
