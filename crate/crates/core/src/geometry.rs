//! The geodesic-space interface shared by all model spaces: the space
//! handle, points, constant-speed geodesics, tolerances and the CN
//! (Bruhat–Tits) midpoint check that every CAT(0) model must pass.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::scalar::Scalar;
use crate::spaces::{self, Route};

/// Which of the four catalog spaces a handle refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpaceKind {
    Euclidean,
    Spike,
    Book,
    HalfPlane,
}

/// A concrete Hadamard model space together with its parameters.
///
/// The spike and the book are finite truncations of countable gluings:
/// branch `n` of the spike is the interval `[0, n]`, and every page of the
/// book is a copy of the isosceles right triangle with legs of length
/// `leg`, glued along the leg from `A = (0, 0)` to `B = (leg, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(
    tag = "kind",
    rename_all = "lowercase",
    try_from = "SpaceRepr<T>",
    into = "SpaceRepr<T>",
    bound = "T: Scalar"
)]
pub enum Space<T> {
    Euclidean { dim: usize },
    Spike { branches: u32 },
    Book { pages: u32, leg: T },
    HalfPlane,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", bound = "T: Scalar")]
enum SpaceRepr<T> {
    Euclidean { dim: usize },
    Spike { branches: u32 },
    Book { pages: u32, leg: T },
    HalfPlane,
}

impl<T: Scalar> TryFrom<SpaceRepr<T>> for Space<T> {
    type Error = Error;

    fn try_from(repr: SpaceRepr<T>) -> Result<Self> {
        match repr {
            SpaceRepr::Euclidean { dim } => Space::euclidean(dim),
            SpaceRepr::Spike { branches } => Space::spike(branches),
            SpaceRepr::Book { pages, leg } => Space::book(pages, leg),
            SpaceRepr::HalfPlane => Ok(Space::halfplane()),
        }
    }
}

impl<T: Scalar> From<Space<T>> for SpaceRepr<T> {
    fn from(space: Space<T>) -> Self {
        match space {
            Space::Euclidean { dim } => SpaceRepr::Euclidean { dim },
            Space::Spike { branches } => SpaceRepr::Spike { branches },
            Space::Book { pages, leg } => SpaceRepr::Book { pages, leg },
            Space::HalfPlane => SpaceRepr::HalfPlane,
        }
    }
}

/// Coordinates of a point of one of the catalog spaces.
///
/// Gluing identifications are normalized on construction: the spike origin
/// is always stored on branch 1 and spine points of the book on page 1, so
/// structural equality coincides with equality in the space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged, bound = "T: Scalar")]
pub enum Point<T> {
    Euclidean(Vec<T>),
    Spike { branch: u32, s: T },
    Book { page: u32, u: T, v: T },
    HalfPlane { x: T, y: T },
}

impl<T: Scalar> Point<T> {
    pub fn kind(&self) -> SpaceKind {
        match self {
            Point::Euclidean(_) => SpaceKind::Euclidean,
            Point::Spike { .. } => SpaceKind::Spike,
            Point::Book { .. } => SpaceKind::Book,
            Point::HalfPlane { .. } => SpaceKind::HalfPlane,
        }
    }
}

/// Tolerances used by every numerical decision in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct ToleranceConfig<T> {
    /// Two points are equal when their distance is at most this.
    pub tol_point: T,
    /// Target bracket width of the 1D minimizer, in geodesic parameter units.
    pub tol_opt: T,
    pub max_iter: usize,
}

impl<T: Scalar> ToleranceConfig<T> {
    pub fn new(tol_point: T, tol_opt: T, max_iter: usize) -> Result<Self> {
        if !(tol_point > T::zero()) || !(tol_opt > T::zero()) {
            return Err(invalid("tolerances must be positive"));
        }
        if tol_opt > tol_point {
            return Err(invalid("tol_opt must not exceed tol_point"));
        }
        if max_iter == 0 {
            return Err(invalid("max_iter must be positive"));
        }
        Ok(Self { tol_point, tol_opt, max_iter })
    }
}

impl<T: Scalar> Default for ToleranceConfig<T> {
    /// `1e-9` / `1e-12` / 200 in double precision; scaled up from machine
    /// epsilon for narrower types.
    fn default() -> Self {
        let eps = T::epsilon();
        Self {
            tol_point: T::of(1e-9).max(eps * T::of(1024.0)),
            tol_opt: T::of(1e-12).max(eps * T::of(128.0)),
            max_iter: 200,
        }
    }
}

impl<T: Scalar> Space<T> {
    /// Euclidean space `R^dim`.
    pub fn euclidean(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("Euclidean dimension must be at least 1"));
        }
        Ok(Space::Euclidean { dim })
    }

    /// The spike truncated to branches `1..=branches`.
    pub fn spike(branches: u32) -> Result<Self> {
        if branches == 0 {
            return Err(invalid("spike needs at least one branch"));
        }
        Ok(Space::Spike { branches })
    }

    /// The book of `pages` isosceles right triangles with legs of length `leg`.
    pub fn book(pages: u32, leg: T) -> Result<Self> {
        if pages == 0 {
            return Err(invalid("book needs at least one page"));
        }
        if !(leg > T::zero()) || !leg.is_finite() {
            return Err(invalid("book leg length must be positive and finite"));
        }
        Ok(Space::Book { pages, leg })
    }

    /// The hyperbolic upper half-plane.
    pub fn halfplane() -> Self {
        Space::HalfPlane
    }

    pub fn kind(&self) -> SpaceKind {
        match self {
            Space::Euclidean { .. } => SpaceKind::Euclidean,
            Space::Spike { .. } => SpaceKind::Spike,
            Space::Book { .. } => SpaceKind::Book,
            Space::HalfPlane => SpaceKind::HalfPlane,
        }
    }

    pub fn point_euclidean(&self, coords: Vec<T>) -> Result<Point<T>> {
        self.validate_point(&Point::Euclidean(coords))
    }

    pub fn point_spike(&self, branch: u32, s: T) -> Result<Point<T>> {
        self.validate_point(&Point::Spike { branch, s })
    }

    pub fn point_book(&self, page: u32, u: T, v: T) -> Result<Point<T>> {
        self.validate_point(&Point::Book { page, u, v })
    }

    pub fn point_halfplane(&self, x: T, y: T) -> Result<Point<T>> {
        self.validate_point(&Point::HalfPlane { x, y })
    }

    /// Checks the membership constraints of `p` and returns its canonical form.
    pub fn validate_point(&self, p: &Point<T>) -> Result<Point<T>> {
        spaces::validate(self, p)
    }

    /// Cheap structural check used on every hot path: tags and dimensions.
    pub(crate) fn check_tag(&self, p: &Point<T>) -> Result<()> {
        match (self, p) {
            (Space::Euclidean { dim }, Point::Euclidean(c)) if c.len() == *dim => Ok(()),
            (Space::Euclidean { dim }, Point::Euclidean(c)) => Err(Error::SpaceMismatch(format!(
                "point of dimension {} in R^{}",
                c.len(),
                dim
            ))),
            (Space::Spike { branches }, Point::Spike { branch, .. }) if *branch <= *branches => {
                Ok(())
            }
            (Space::Book { pages, .. }, Point::Book { page, .. }) if *page <= *pages => Ok(()),
            (Space::HalfPlane, Point::HalfPlane { .. }) => Ok(()),
            _ => Err(Error::SpaceMismatch(format!(
                "{:?} point used in {:?} space",
                p.kind(),
                self.kind()
            ))),
        }
    }

    pub fn distance(&self, p: &Point<T>, q: &Point<T>) -> Result<T> {
        self.check_tag(p)?;
        self.check_tag(q)?;
        Ok(spaces::distance(self, p, q))
    }

    /// Distance-based equality: `d(p, q) <= tol`.
    pub fn same_point(&self, p: &Point<T>, q: &Point<T>, tol: T) -> Result<bool> {
        Ok(self.distance(p, q)? <= tol)
    }

    /// The unique geodesic `[a, b]`.
    pub fn geodesic(&self, a: &Point<T>, b: &Point<T>) -> Result<Geodesic<T>> {
        self.check_tag(a)?;
        self.check_tag(b)?;
        let (length, route) = spaces::route(self, a, b);
        Ok(Geodesic {
            space: *self,
            a: a.clone(),
            b: b.clone(),
            length,
            route,
        })
    }

    pub fn midpoint(&self, a: &Point<T>, b: &Point<T>) -> Result<Point<T>> {
        Ok(self.geodesic(a, b)?.eval(T::half()))
    }
}

/// Constant-speed geodesic `t -> γ(t)`, `t ∈ [0, 1]`, from `a` to `b`.
///
/// Evaluated in closed form from the endpoints; no polyline sampling.
#[derive(Debug, Clone, PartialEq)]
pub struct Geodesic<T> {
    space: Space<T>,
    a: Point<T>,
    b: Point<T>,
    length: T,
    route: Route<T>,
}

impl<T: Scalar> Geodesic<T> {
    pub fn space(&self) -> &Space<T> {
        &self.space
    }

    pub fn start(&self) -> &Point<T> {
        &self.a
    }

    pub fn end(&self) -> &Point<T> {
        &self.b
    }

    pub fn length(&self) -> T {
        self.length
    }

    pub(crate) fn route(&self) -> &Route<T> {
        &self.route
    }

    /// `γ(t)`; fails for `t` outside `[0, 1]`.
    pub fn point_at(&self, t: T) -> Result<Point<T>> {
        if !(t >= T::zero() && t <= T::one()) {
            return Err(invalid(format!("geodesic parameter {t} outside [0, 1]")));
        }
        Ok(self.eval(t))
    }

    /// `γ(t)` without range validation; `t` must lie in `[0, 1]`.
    pub(crate) fn eval(&self, t: T) -> Point<T> {
        if t <= T::zero() {
            return self.a.clone();
        }
        if t >= T::one() {
            return self.b.clone();
        }
        spaces::eval(&self.space, &self.route, &self.a, &self.b, t)
    }
}

/// Distance between two points of `space`.
pub fn distance<T: Scalar>(space: &Space<T>, p: &Point<T>, q: &Point<T>) -> Result<T> {
    space.distance(p, q)
}

/// Point at parameter `t` of the geodesic `g`.
pub fn geodesic_point<T: Scalar>(g: &Geodesic<T>, t: T) -> Result<Point<T>> {
    g.point_at(t)
}

/// Outcome of a CN-inequality evaluation at one triple.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct CnReport<T> {
    /// Midpoint of `[q, r]`.
    pub midpoint: Point<T>,
    /// `d(p, m)^2`.
    pub lhs: T,
    /// `d(p,q)^2 / 2 + d(p,r)^2 / 2 - d(q,r)^2 / 4`.
    pub rhs: T,
    /// `rhs - lhs`; nonnegative in a CAT(0) space.
    pub residual: T,
    pub passes: bool,
}

/// Evaluates the CN inequality `d(p,m)^2 <= d(p,q)^2/2 + d(p,r)^2/2 - d(q,r)^2/4`
/// with `m` the midpoint of `[q, r]`. The triple passes when the residual is at
/// least `-tol`.
pub fn check_cn_inequality<T: Scalar>(
    space: &Space<T>,
    p: &Point<T>,
    q: &Point<T>,
    r: &Point<T>,
    tol: T,
) -> Result<CnReport<T>> {
    let m = space.midpoint(q, r)?;
    let dpm = space.distance(p, &m)?;
    let dpq = space.distance(p, q)?;
    let dpr = space.distance(p, r)?;
    let dqr = space.distance(q, r)?;
    let lhs = dpm * dpm;
    let half = T::half();
    let rhs = half * dpq * dpq + half * dpr * dpr - T::of(0.25) * dqr * dqr;
    let residual = rhs - lhs;
    Ok(CnReport {
        midpoint: m,
        lhs,
        rhs,
        residual,
        passes: residual >= -tol,
    })
}
