//! Geometry of the ordering-parameter constraint plane.
//!
//! Ordering parameters live on the plane `alpha + beta + gamma = -1`; only
//! `(alpha, beta)` are free. The admissible sets considered here form a one-
//! parameter family of equilateral triangles on that plane, symmetric under
//! permutation of the three parameters. Projected on the alpha-beta plane,
//! the triangle of size `b` is
//!
//! ```text
//! -(1 + b) <= alpha <= b/2
//! -(1 + b/2 + alpha) <= beta <= b/2
//! ```
//!
//! valid for `b >= -2/3`, degenerating to the single point
//! `(-1/3, -1/3)` at the lower bound.

use std::fmt;

use thiserror::Error;

/// Smallest admissible region size; the triangle is a point there.
pub const MIN_REGION_SIZE: f64 = -2.0 / 3.0;

/// A point on the constraint plane; `gamma` is always derived.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderingPoint {
    pub alpha: f64,
    pub beta: f64,
}

impl OrderingPoint {
    pub fn new(alpha: f64, beta: f64) -> Self {
        OrderingPoint { alpha, beta }
    }

    /// Third parameter, fixed by the constraint.
    pub fn gamma(&self) -> f64 {
        -1.0 - self.alpha - self.beta
    }
}

impl fmt::Display for OrderingPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.alpha, self.beta, self.gamma())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DomainError {
    #[error("region size b must be >= -2/3, got {b}")]
    SizeBelowMinimum { b: f64 },
    #[error("region size b must be finite, got {b}")]
    NonFiniteSize { b: f64 },
}

/// The projected triangular region of size `b`. Closed: boundary included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region {
    b: f64,
}

impl Region {
    pub fn new(b: f64) -> Result<Self, DomainError> {
        if !b.is_finite() {
            return Err(DomainError::NonFiniteSize { b });
        }
        if b < MIN_REGION_SIZE {
            return Err(DomainError::SizeBelowMinimum { b });
        }
        Ok(Region { b })
    }

    pub fn size(&self) -> f64 {
        self.b
    }

    /// True when the region is the single point `(-1/3, -1/3)`.
    pub fn is_degenerate(&self) -> bool {
        self.b == MIN_REGION_SIZE
    }

    /// Range of the outer variable: `[-(1+b), b/2]`.
    pub fn alpha_range(&self) -> (f64, f64) {
        (-(1.0 + self.b), self.b / 2.0)
    }

    /// Range of the inner variable at fixed alpha: `[-(1+b/2+alpha), b/2]`.
    pub fn beta_range(&self, alpha: f64) -> (f64, f64) {
        (-(1.0 + self.b / 2.0 + alpha), self.b / 2.0)
    }

    /// Square bounding box of the projection (same for both axes).
    pub fn bounding_box(&self) -> (f64, f64) {
        (-(1.0 + self.b), self.b / 2.0)
    }

    /// Membership test for the closed region.
    pub fn contains(&self, alpha: f64, beta: f64) -> bool {
        let (alo, ahi) = self.alpha_range();
        if alpha < alo || alpha > ahi {
            return false;
        }
        let (blo, bhi) = self.beta_range(alpha);
        beta >= blo && beta <= bhi
    }

    /// The three corners; all coincide when the region is degenerate.
    pub fn vertices(&self) -> [OrderingPoint; 3] {
        let b = self.b;
        [
            OrderingPoint::new(b / 2.0, b / 2.0),
            OrderingPoint::new(b / 2.0, -1.0 - b),
            OrderingPoint::new(-1.0 - b, b / 2.0),
        ]
    }

    /// Area of the alpha-beta projection: `(2 + 3b)^2 / 8`.
    pub fn projected_area(&self) -> f64 {
        let s = 2.0 + 3.0 * self.b;
        s * s / 8.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn construction_bounds() {
        assert!(Region::new(0.0).is_ok());
        let degenerate = Region::new(MIN_REGION_SIZE).unwrap();
        assert!(degenerate.is_degenerate());
        assert!(matches!(
            Region::new(-1.0),
            Err(DomainError::SizeBelowMinimum { .. })
        ));
        assert!(Region::new(f64::NAN).is_err());
        assert!(Region::new(f64::INFINITY).is_err());
    }

    #[test]
    fn membership_examples() {
        let r = Region::new(0.0).unwrap();
        assert!(r.contains(-0.5, -0.25));
        assert!(!r.contains(-0.5, -0.75));
        let point = Region::new(MIN_REGION_SIZE).unwrap();
        assert!(point.contains(-1.0 / 3.0, -1.0 / 3.0));
        assert!(!point.contains(-0.3, -0.3));
    }

    #[test]
    fn vertices_match_bounds() {
        let r = Region::new(0.0).unwrap();
        let v = r.vertices();
        assert_eq!((v[0].alpha, v[0].beta), (0.0, 0.0));
        assert_eq!((v[1].alpha, v[1].beta), (0.0, -1.0));
        assert_eq!((v[2].alpha, v[2].beta), (-1.0, 0.0));

        let r = Region::new(2.0).unwrap();
        let v = r.vertices();
        assert_eq!((v[0].alpha, v[0].beta), (1.0, 1.0));
        assert_eq!((v[1].alpha, v[1].beta), (1.0, -3.0));
        assert_eq!((v[2].alpha, v[2].beta), (-3.0, 1.0));

        let point = Region::new(MIN_REGION_SIZE).unwrap();
        for v in point.vertices() {
            assert!((v.alpha + 1.0 / 3.0).abs() < 1e-15);
            assert!((v.beta + 1.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn area_examples() {
        assert!((Region::new(0.0).unwrap().projected_area() - 0.5).abs() < 1e-15);
        assert_eq!(Region::new(MIN_REGION_SIZE).unwrap().projected_area(), 0.0);
        assert!((Region::new(2.0).unwrap().projected_area() - 8.0).abs() < 1e-14);
    }

    #[test]
    fn vertices_lie_in_region_and_midpoint_always_does() {
        for b in [MIN_REGION_SIZE, -0.5, 0.0, 1.0, 4.0] {
            let r = Region::new(b).unwrap();
            for v in r.vertices() {
                assert!(r.contains(v.alpha, v.beta), "vertex {v} outside b={b}");
            }
            assert!(r.contains(-1.0 / 3.0, -1.0 / 3.0));
        }
    }

    #[test]
    fn gamma_is_derived() {
        let p = OrderingPoint::new(-0.25, -0.5);
        assert_eq!(p.gamma(), -0.25);
    }

    proptest! {
        #[test]
        fn permutation_symmetry(
            b in -0.66f64..4.0,
            u in 0.0f64..1.0,
            v in 0.0f64..1.0,
        ) {
            // Sample a point strictly inside via barycentric coordinates,
            // shrunk toward the centroid to stay clear of rounding at the
            // boundary, then check all permutations of (alpha, beta, gamma).
            let r = Region::new(b).unwrap();
            let (u, v) = if u + v > 1.0 { (1.0 - u, 1.0 - v) } else { (u, v) };
            let w = 1.0 - u - v;
            let verts = r.vertices();
            let shrink = 0.98;
            let cx = -1.0 / 3.0;
            let alpha = cx + shrink * (u * verts[0].alpha + v * verts[1].alpha + w * verts[2].alpha - cx);
            let beta = cx + shrink * (u * verts[0].beta + v * verts[1].beta + w * verts[2].beta - cx);
            let gamma = -1.0 - alpha - beta;
            for (x, y) in [
                (alpha, beta), (alpha, gamma), (beta, alpha),
                (beta, gamma), (gamma, alpha), (gamma, beta),
            ] {
                prop_assert!(r.contains(x, y), "({x}, {y}) outside b={b}");
            }
        }

        #[test]
        fn area_monotone_in_size(b1 in -0.66f64..4.0, b2 in -0.66f64..4.0) {
            let (lo, hi) = if b1 <= b2 { (b1, b2) } else { (b2, b1) };
            let a_lo = Region::new(lo).unwrap().projected_area();
            let a_hi = Region::new(hi).unwrap().projected_area();
            prop_assert!(a_lo <= a_hi);
            prop_assert!(a_lo > 0.0); // zero only at exactly -2/3
        }
    }
}
