//! Elementary sets and the weak topology they generate.
//!
//! For `x != y` the elementary set `U_x(y)` is the set of points whose
//! projection onto `[x, y]` is not `y`. Membership is decided from a
//! projection, so every query carries a margin and may come back
//! [`Membership::Indeterminate`] when the margin sits inside the tolerance
//! band.

mod convergence;
mod cover;
mod identities;

pub use convergence::{weak_convergence_report, ConvergenceReport, ProbeSet, Verdict};
pub use cover::{
    ball_net, cone_cover_certificate, sampled_covering_radius, ConeCoverCertificate, CoverOptions,
    Expulsion,
};
pub use identities::{
    check_convex_complement, check_preimage_identity, ComplementCheck, ComplementViolation,
    PreimageCheck, PreimageMismatch,
};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::geometry::{Point, Space, ToleranceConfig};
use crate::projection::ProjectionResult;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    In,
    Out,
    Indeterminate,
}

/// Answer to `z ∈ U_x(y)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct ElementaryQuery<T> {
    pub x: Point<T>,
    pub y: Point<T>,
    pub z: Point<T>,
    pub membership: Membership,
    /// `d(P_[x,y] z, y)`.
    pub margin: T,
    pub projection: ProjectionResult<T>,
}

impl<T: Scalar> ElementaryQuery<T> {
    pub fn is_in(&self) -> bool {
        self.membership == Membership::In
    }

    pub fn is_out(&self) -> bool {
        self.membership == Membership::Out
    }
}

/// Classifies a projection onto `[x, y]` against the end point `y`.
///
/// Out needs the search to have certified the end point and the margin to be
/// within `tol_point`; In needs an uncertified end and a margin above it.
pub(crate) fn classify<T: Scalar>(proj: &ProjectionResult<T>, margin: T, cfg: &ToleranceConfig<T>) -> Membership {
    let near = margin <= cfg.tol_point;
    match (proj.certified_at_end(), near) {
        (true, true) => Membership::Out,
        (false, false) => Membership::In,
        _ => Membership::Indeterminate,
    }
}

/// Decides whether `z ∈ U_x(y)`. Fails when `x` and `y` coincide within
/// `tol_point`.
pub fn in_elementary_set<T: Scalar>(
    space: &Space<T>,
    x: &Point<T>,
    y: &Point<T>,
    z: &Point<T>,
    cfg: &ToleranceConfig<T>,
) -> Result<ElementaryQuery<T>> {
    let x = space.validate_point(x)?;
    let y = space.validate_point(y)?;
    let z = space.validate_point(z)?;
    if space.distance(&x, &y)? <= cfg.tol_point {
        return Err(invalid("elementary set U_x(y) needs x != y"));
    }
    let g = space.geodesic(&x, &y)?;
    let projection = g.project(&z, cfg)?;
    let margin = space.distance(&projection.point, &y)?;
    Ok(ElementaryQuery {
        x,
        y,
        z,
        membership: classify(&projection, margin, cfg),
        margin,
        projection,
    })
}

/// Comparison of the projection test against the closed form
/// `U_x(y) = {z : <z - x, b> < 1}` with `b = (y - x) / |y - x|^2` in `R^n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct HalfspaceAgreement<T> {
    pub projection: Membership,
    /// `<z - x, b>`.
    pub inner: T,
    pub halfspace_in: bool,
    /// `|inner - 1|`.
    pub gap: T,
    /// True when both tests give the same answer; an indeterminate
    /// projection only agrees if `inner` is within `tol_point` of 1.
    pub agree: bool,
}

/// Checks membership of `z` in `U_x(y)` both by projection and through the
/// open half-space formula.
pub fn halfspace_formula_check<T: Scalar>(
    space: &Space<T>,
    x: &Point<T>,
    y: &Point<T>,
    z: &Point<T>,
    cfg: &ToleranceConfig<T>,
) -> Result<HalfspaceAgreement<T>> {
    let Space::Euclidean { .. } = space else {
        return Err(invalid("the half-space formula holds in R^n only"));
    };
    let query = in_elementary_set(space, x, y, z, cfg)?;
    let (Point::Euclidean(xs), Point::Euclidean(ys), Point::Euclidean(zs)) = (x, y, z) else {
        unreachable!("validated by in_elementary_set");
    };
    let mut inner = T::zero();
    let mut norm2 = T::zero();
    for ((a, b), c) in xs.iter().zip(ys).zip(zs) {
        let e = *b - *a;
        inner = inner + (*c - *a) * e;
        norm2 = norm2 + e * e;
    }
    let inner = inner / norm2;
    let halfspace_in = inner < T::one();
    let agree = match query.membership {
        Membership::In => halfspace_in,
        Membership::Out => !halfspace_in,
        Membership::Indeterminate => (inner - T::one()).abs() <= cfg.tol_point,
    };
    let gap = (inner - T::one()).abs();
    Ok(HalfspaceAgreement {
        projection: query.membership,
        inner,
        halfspace_in,
        gap,
        agree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::book::{hypotenuse_midpoint, vertex_a, vertex_b, vertex_c};

    fn cfg() -> ToleranceConfig<f64> {
        ToleranceConfig::default()
    }

    fn e2(x: f64, y: f64) -> Point<f64> {
        Point::Euclidean(vec![x, y])
    }

    #[test]
    fn planar_membership_examples() {
        let r2 = Space::euclidean(2).unwrap();
        let (x, y) = (e2(0.0, 0.0), e2(2.0, 0.0));
        let q = in_elementary_set(&r2, &x, &y, &e2(1.9, 7.0), &cfg()).unwrap();
        assert!(q.is_in());
        assert!((q.margin - 0.1).abs() < 1e-9);
        assert!(in_elementary_set(&r2, &x, &y, &y, &cfg()).unwrap().is_out());
        assert!(in_elementary_set(&r2, &x, &y, &e2(5.0, -3.0), &cfg()).unwrap().is_out());
        assert!(in_elementary_set(&r2, &x, &y, &x, &cfg()).unwrap().is_in());
    }

    #[test]
    fn coincident_ends_are_rejected() {
        let r2 = Space::euclidean(2).unwrap();
        let x = e2(1.0, 1.0);
        assert!(in_elementary_set(&r2, &x, &x, &e2(0.0, 0.0), &cfg()).is_err());
    }

    #[test]
    fn halfspace_formula_agrees_on_examples() {
        let r2 = Space::euclidean(2).unwrap();
        let (x, y) = (e2(0.0, 0.0), e2(2.0, 0.0));
        for z in [e2(1.9, 7.0), e2(2.0, 0.0), e2(5.0, -3.0), e2(-1.0, 0.0), e2(2.0, 4.0)] {
            let a = halfspace_formula_check(&r2, &x, &y, &z, &cfg()).unwrap();
            assert!(a.agree, "{z:?}: {a:?}");
        }
        let a = halfspace_formula_check(&r2, &x, &y, &e2(1.9, 7.0), &cfg()).unwrap();
        assert!((a.inner - 0.95).abs() < 1e-15);
    }

    #[test]
    fn halfspace_formula_needs_euclidean_space() {
        let h = Space::<f64>::halfplane();
        let p = Point::HalfPlane { x: 0.0, y: 1.0 };
        let q = Point::HalfPlane { x: 1.0, y: 1.0 };
        assert!(halfspace_formula_check(&h, &p, &q, &p, &cfg()).is_err());
    }

    #[test]
    fn book_apices_are_expelled_from_u_p_b() {
        let book = Space::book(6, 1.0).unwrap();
        let p = hypotenuse_midpoint(&book, 1).unwrap();
        let b = vertex_b(&book).unwrap();
        for n in 2..=6 {
            let q = in_elementary_set(&book, &p, &b, &vertex_c(&book, n).unwrap(), &cfg()).unwrap();
            assert!(q.is_out(), "C{n}: {q:?}");
        }
        let q = in_elementary_set(&book, &p, &b, &vertex_a(&book).unwrap(), &cfg()).unwrap();
        assert!(q.is_in());
        assert!((q.margin - 0.5f64.sqrt()).abs() < 1e-9);
    }
}
