//! The four model spaces and their closed-form distance and geodesic rules.
//!
//! Each submodule owns the formulas of one space; this module dispatches on
//! [`Space`] and holds the per-geodesic precomputed route data.

pub mod book;
pub mod euclidean;
pub mod halfplane;
pub mod spike;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::geometry::{Point, Space};
use crate::scalar::Scalar;

/// `R^dim`.
pub fn make_euclidean<T: Scalar>(dim: usize) -> Result<Space<T>> {
    Space::euclidean(dim)
}

/// The spike truncated to `branches` branches.
pub fn make_spike<T: Scalar>(branches: u32) -> Result<Space<T>> {
    Space::spike(branches)
}

/// The book of `pages` triangles with legs of length `leg`.
pub fn make_book<T: Scalar>(pages: u32, leg: T) -> Result<Space<T>> {
    Space::book(pages, leg)
}

pub fn make_halfplane<T: Scalar>() -> Space<T> {
    Space::halfplane()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConvexBodyKind {
    ClosedBall,
}

/// A closed convex body; only closed metric balls are supported.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct ConvexBody<T> {
    pub kind: ConvexBodyKind,
    pub center: Point<T>,
    pub radius: T,
}

impl<T: Scalar> ConvexBody<T> {
    pub fn closed_ball(space: &Space<T>, center: Point<T>, radius: T) -> Result<Self> {
        if !(radius > T::zero()) || !radius.is_finite() {
            return Err(invalid("ball radius must be positive and finite"));
        }
        let center = space.validate_point(&center)?;
        Ok(Self {
            kind: ConvexBodyKind::ClosedBall,
            center,
            radius,
        })
    }

    pub fn contains(&self, space: &Space<T>, p: &Point<T>) -> Result<bool> {
        Ok(space.distance(&self.center, p)? <= self.radius)
    }
}

/// Precomputed evaluation data for one geodesic.
#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Route<T> {
    /// Straight segment in `R^n`.
    Linear,
    /// Both endpoints on one branch (or one of them at the origin).
    SpikeBranch { branch: u32 },
    /// Down branch `a` to the origin, then up branch `b`.
    SpikeThroughOrigin,
    /// Straight segment inside one page chart.
    BookPlanar { page: u32 },
    /// Straight to the spine point `(cross, 0)`, then straight on the other page;
    /// the spine is reached at parameter `split`.
    BookCrossing { cross: T, split: T },
    /// Hyperboloid interpolation carried in the light-cone coordinates
    /// `w = 1/y` and `k = x/y` of both endpoints.
    Hyperbolic {
        wa: T,
        ka: T,
        wb: T,
        kb: T,
        sinh_len: T,
    },
}

pub(crate) fn validate<T: Scalar>(space: &Space<T>, p: &Point<T>) -> Result<Point<T>> {
    space.check_tag(p)?;
    match (space, p) {
        (Space::Euclidean { .. }, Point::Euclidean(c)) => {
            if c.iter().any(|x| !x.is_finite()) {
                return Err(invalid("non-finite Euclidean coordinate"));
            }
            Ok(p.clone())
        }
        (Space::Spike { .. }, Point::Spike { branch, s }) => spike::normalize(*branch, *s),
        (Space::Book { leg, .. }, Point::Book { page, u, v }) => book::normalize(*leg, *page, *u, *v),
        (Space::HalfPlane, Point::HalfPlane { x, y }) => halfplane::validate(*x, *y),
        _ => unreachable!("tag checked"),
    }
}

/// Distance between two tag-checked points.
pub(crate) fn distance<T: Scalar>(space: &Space<T>, p: &Point<T>, q: &Point<T>) -> T {
    match (space, p, q) {
        (Space::Euclidean { .. }, Point::Euclidean(a), Point::Euclidean(b)) => euclidean::distance(a, b),
        (
            Space::Spike { .. },
            Point::Spike { branch: m, s },
            Point::Spike { branch: n, s: t },
        ) => spike::distance(*m, *s, *n, *t),
        (
            Space::Book { leg, .. },
            Point::Book { page: i, u: pu, v: pv },
            Point::Book { page: j, u: qu, v: qv },
        ) => book::distance(*leg, [*pu, *pv], *i, [*qu, *qv], *j),
        (Space::HalfPlane, Point::HalfPlane { x: x1, y: y1 }, Point::HalfPlane { x: x2, y: y2 }) => {
            halfplane::distance(*x1, *y1, *x2, *y2)
        }
        _ => unreachable!("tag checked"),
    }
}

pub(crate) fn route<T: Scalar>(space: &Space<T>, a: &Point<T>, b: &Point<T>) -> (T, Route<T>) {
    match (space, a, b) {
        (Space::Euclidean { .. }, Point::Euclidean(x), Point::Euclidean(y)) => {
            (euclidean::distance(x, y), Route::Linear)
        }
        (
            Space::Spike { .. },
            Point::Spike { branch: m, s },
            Point::Spike { branch: n, s: t },
        ) => spike::route(*m, *s, *n, *t),
        (
            Space::Book { leg, .. },
            Point::Book { page: i, u: pu, v: pv },
            Point::Book { page: j, u: qu, v: qv },
        ) => book::route(*leg, [*pu, *pv], *i, [*qu, *qv], *j),
        (Space::HalfPlane, Point::HalfPlane { x: x1, y: y1 }, Point::HalfPlane { x: x2, y: y2 }) => {
            halfplane::route(*x1, *y1, *x2, *y2)
        }
        _ => unreachable!("tag checked"),
    }
}

/// `γ(t)` for `0 < t < 1`.
pub(crate) fn eval<T: Scalar>(
    space: &Space<T>,
    route: &Route<T>,
    a: &Point<T>,
    b: &Point<T>,
    t: T,
) -> Point<T> {
    match (space, route, a, b) {
        (Space::Euclidean { .. }, Route::Linear, Point::Euclidean(x), Point::Euclidean(y)) => {
            Point::Euclidean(euclidean::lerp(x, y, t))
        }
        (Space::Spike { .. }, _, Point::Spike { branch: m, s }, Point::Spike { branch: n, s: u }) => {
            spike::eval(route, *m, *s, *n, *u, t)
        }
        (
            Space::Book { leg, .. },
            _,
            Point::Book { page: i, u: pu, v: pv },
            Point::Book { page: j, u: qu, v: qv },
        ) => book::eval(*leg, route, [*pu, *pv], *i, [*qu, *qv], *j, t),
        (Space::HalfPlane, Route::Hyperbolic { .. }, _, _) => halfplane::eval(route, t),
        _ => unreachable!("route built for this space"),
    }
}
