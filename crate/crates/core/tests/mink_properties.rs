//! Property tests for the Minkowski algebra invariants.

use proptest::prelude::*;
use quasumb::mink::{
    boost_null_frame, minkowski_cross, minkowski_inner, validate_null_frame, MVec3, NullFrame,
    Sign,
};

fn vec3() -> impl Strategy<Value = MVec3> {
    (-5.0f64..5.0, -5.0f64..5.0, -5.0f64..5.0).prop_map(|(a, b, c)| MVec3::new(a, b, c))
}

fn det3(u: MVec3, v: MVec3, w: MVec3) -> f64 {
    u.x0 * (v.x1 * w.x2 - v.x2 * w.x1) - v.x0 * (u.x1 * w.x2 - u.x2 * w.x1)
        + w.x0 * (u.x1 * v.x2 - u.x2 * v.x1)
}

proptest! {
    #[test]
    fn inner_is_symmetric_and_bilinear(u in vec3(), v in vec3(), w in vec3(),
                                       a in -3.0f64..3.0, b in -3.0f64..3.0) {
        prop_assert_eq!(minkowski_inner(u, v), minkowski_inner(v, u));
        let lhs = minkowski_inner(u * a + v * b, w);
        let rhs = a * minkowski_inner(u, w) + b * minkowski_inner(v, w);
        let scale = (u.euclid_norm() + v.euclid_norm()) * w.euclid_norm();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * scale.max(1.0));
    }

    #[test]
    fn cross_determinant_identity(u in vec3(), v in vec3(), w in vec3()) {
        let lhs = minkowski_inner(u, minkowski_cross(v, w));
        let rhs = det3(u, v, w);
        let scale = u.euclid_norm() * v.euclid_norm() * w.euclid_norm();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * scale.max(1.0));
    }

    #[test]
    fn cross_is_exactly_antisymmetric(v in vec3(), w in vec3()) {
        prop_assert_eq!(minkowski_cross(v, w), -minkowski_cross(w, v));
    }

    #[test]
    fn cross_is_orthogonal_to_factors(v in vec3(), w in vec3()) {
        let c = minkowski_cross(v, w);
        let scale = (v.euclid_norm() * w.euclid_norm()).max(1.0);
        prop_assert!(minkowski_inner(c, v).abs() <= 1e-12 * scale * v.euclid_norm().max(1.0));
        prop_assert!(minkowski_inner(c, w).abs() <= 1e-12 * scale * w.euclid_norm().max(1.0));
    }

    #[test]
    fn boosts_preserve_the_gram_conditions(theta in -10.0f64..10.0,
                                           flip1 in any::<bool>(), flip2 in any::<bool>()) {
        let s1 = if flip1 { Sign::Minus } else { Sign::Plus };
        let s2 = if flip2 { Sign::Minus } else { Sign::Plus };
        let b = boost_null_frame(&NullFrame::standard(), theta, s1, s2);
        let v = validate_null_frame(&b, 1e-8);
        prop_assert!(v.pass, "defect {} at theta {}", v.max_defect, theta);
    }
}
