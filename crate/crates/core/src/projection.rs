//! Closest-point projection onto compact geodesics and closed balls.
//!
//! Along a geodesic `γ` the profile `t -> d(z, γ(t))` is convex, so the
//! nearest point is found by ternary search on `[0, 1]`. Comparing two
//! profile values by subtracting distances loses all significance near a
//! smooth minimum (the difference is quadratic in the offset), which would
//! limit the minimizer to roughly the square root of machine precision.
//! Each space therefore supplies a comparison of `f(s)` against `f(t)` that
//! factors out `s - t` and keeps full relative precision; the spike, whose
//! profile is piecewise linear, compares values directly.

use std::cmp::Ordering;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{Geodesic, Point, Space, ToleranceConfig};
use crate::scalar::Scalar;
use crate::spaces::{book, euclidean, halfplane, ConvexBody, Route};

/// Nearest point of a geodesic to a query point.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct ProjectionResult<T> {
    pub point: Point<T>,
    /// Geodesic parameter of `point`.
    pub t: T,
    /// `d(z, point)`.
    pub dist: T,
    pub iterations: usize,
    /// Final ternary-search bracket; an endpoint of `[0, 1]` survives only
    /// when every comparison pointed toward it.
    pub bracket: [T; 2],
}

impl<T: Scalar> ProjectionResult<T> {
    /// The search never moved away from `t = 1`: the projection is the end
    /// point up to the optimizer tolerance.
    pub fn certified_at_end(&self) -> bool {
        self.bracket[1] == T::one()
    }

    pub fn certified_at_start(&self) -> bool {
        self.bracket[0] == T::zero()
    }
}

/// `φ(t) = |W0 + t E - Z|^2` on `[t0, t1]`, stored as
/// `c0 = <E, W0 - Z>` and `c1 = |E|^2`, so that
/// `φ(s) - φ(t) = (s - t) (2 c0 + (s + t) c1)`.
#[derive(Debug, Clone, Copy)]
struct Piece<T> {
    t0: T,
    t1: T,
    c0: T,
    c1: T,
}

enum Comparator<T> {
    /// Euclidean segments and book page charts.
    Pieces(Vec<Piece<T>>),
    /// `cosh d(z, γ(t)) = (α sinh((1-t)L) + β sinh(tL)) / sinh L`.
    Hyperbolic { alpha: T, beta: T, len: T },
    Values,
}

/// The convex function `t -> d(z, γ(t))` together with a precise comparator.
pub(crate) struct Profile<'a, T> {
    g: &'a Geodesic<T>,
    z: &'a Point<T>,
    cmp: Comparator<T>,
}

impl<'a, T: Scalar> Profile<'a, T> {
    pub(crate) fn new(g: &'a Geodesic<T>, z: &'a Point<T>) -> Self {
        let cmp = match (g.space(), g.route(), g.start(), g.end(), z) {
            (Space::Euclidean { .. }, _, Point::Euclidean(a), Point::Euclidean(b), Point::Euclidean(zc)) => {
                let e: Vec<T> = b.iter().zip(a).map(|(y, x)| *y - *x).collect();
                let w: Vec<T> = a.iter().zip(zc).map(|(x, z)| *x - *z).collect();
                Comparator::Pieces(vec![Piece {
                    t0: T::zero(),
                    t1: T::one(),
                    c0: euclidean::dot(&e, &w),
                    c1: euclidean::dot(&e, &e),
                }])
            }
            (
                Space::Book { .. },
                route,
                Point::Book { page: i, u: pu, v: pv },
                Point::Book { page: j, u: qu, v: qv },
                Point::Book { page: zp, u: zu, v: zv },
            ) => {
                let pieces = book::pieces(route, [*pu, *pv], *i, [*qu, *qv], *j)
                    .into_iter()
                    .filter(|(_, _, _, t0, t1)| t1 > t0)
                    .map(|(page, start, end, t0, t1)| {
                        let span = t1 - t0;
                        let e = [(end[0] - start[0]) / span, (end[1] - start[1]) / span];
                        let w0 = [start[0] - t0 * e[0], start[1] - t0 * e[1]];
                        let zc = book::chart_coords([*zu, *zv], *zp, page);
                        let w = [w0[0] - zc[0], w0[1] - zc[1]];
                        Piece {
                            t0,
                            t1,
                            c0: e[0] * w[0] + e[1] * w[1],
                            c1: e[0] * e[0] + e[1] * e[1],
                        }
                    })
                    .collect();
                Comparator::Pieces(pieces)
            }
            (
                Space::HalfPlane,
                Route::Hyperbolic { .. },
                Point::HalfPlane { x: ax, y: ay },
                Point::HalfPlane { x: bx, y: by },
                Point::HalfPlane { x: zx, y: zy },
            ) => Comparator::Hyperbolic {
                alpha: halfplane::cosh_distance(*zx, *zy, *ax, *ay),
                beta: halfplane::cosh_distance(*zx, *zy, *bx, *by),
                len: g.length(),
            },
            _ => Comparator::Values,
        };
        Self { g, z, cmp }
    }

    pub(crate) fn value(&self, t: T) -> T {
        crate::spaces::distance(self.g.space(), self.z, &self.g.eval(t))
    }

    /// Orders `f(s)` against `f(t)`.
    pub(crate) fn compare(&self, s: T, t: T) -> Ordering {
        if s == t {
            return Ordering::Equal;
        }
        let direction = if s < t { Ordering::Less } else { Ordering::Greater };
        let (lo, hi) = if s < t { (s, t) } else { (t, s) };
        let factor = match &self.cmp {
            Comparator::Pieces(pieces) => pieces
                .iter()
                .find(|p| p.t0 <= lo && hi <= p.t1)
                .map(|p| T::two() * p.c0 + (s + t) * p.c1),
            Comparator::Hyperbolic { alpha, beta, len } => {
                let sigma = s + t;
                Some(
                    *beta * (sigma * *len * T::half()).cosh()
                        - *alpha * ((T::two() - sigma) * *len * T::half()).cosh(),
                )
            }
            Comparator::Values => None,
        };
        match factor {
            // sign(f(s) - f(t)) = sign(s - t) * sign(factor)
            Some(f) => match f.partial_cmp(&T::zero()).unwrap_or(Ordering::Equal) {
                Ordering::Equal => Ordering::Equal,
                Ordering::Greater => direction,
                Ordering::Less => direction.reverse(),
            },
            None => self
                .value(s)
                .partial_cmp(&self.value(t))
                .unwrap_or(Ordering::Equal),
        }
    }
}

/// Projects `z` onto the geodesic `g`.
///
/// Ternary search shrinks `[0, 1]` until its width is at most `tol_opt`,
/// followed by one parabolic step inside the final bracket. Exact ties shrink
/// both sides, so a flat minimum resolves to the middle of the final bracket.
/// A bracket still touching `0` or `1` snaps to that endpoint.
pub fn project_to_geodesic<T: Scalar>(
    g: &Geodesic<T>,
    z: &Point<T>,
    cfg: &ToleranceConfig<T>,
) -> Result<ProjectionResult<T>> {
    g.space().check_tag(z)?;
    if g.length() == T::zero() {
        let point = g.start().clone();
        let dist = crate::spaces::distance(g.space(), z, &point);
        return Ok(ProjectionResult {
            point,
            t: T::zero(),
            dist,
            iterations: 0,
            bracket: [T::zero(), T::one()],
        });
    }

    let profile = Profile::new(g, z);
    let (mut lo, mut hi) = (T::zero(), T::one());
    let three = T::of(3.0);
    let mut iterations = 0;
    while hi - lo > cfg.tol_opt {
        if iterations >= cfg.max_iter {
            return Err(Error::NonConvergence {
                iterations,
                lo: lo.as_f64(),
                hi: hi.as_f64(),
            });
        }
        let third = (hi - lo) / three;
        let m1 = lo + third;
        let m2 = hi - third;
        match profile.compare(m1, m2) {
            Ordering::Less => hi = m2,
            Ordering::Greater => lo = m1,
            Ordering::Equal => {
                lo = m1;
                hi = m2;
            }
        }
        iterations += 1;
    }

    let mut t = (lo + hi) * T::half();
    if let Some(v) = parabolic_vertex(&profile, lo, t, hi) {
        if profile.compare(v, t) == Ordering::Less {
            t = v;
        }
    }
    if lo == T::zero() && profile.compare(T::zero(), t) != Ordering::Greater {
        t = T::zero();
    }
    if hi == T::one() && profile.compare(T::one(), t) != Ordering::Greater {
        t = T::one();
    }

    let point = g.eval(t);
    let dist = crate::spaces::distance(g.space(), z, &point);
    Ok(ProjectionResult {
        point,
        t,
        dist,
        iterations,
        bracket: [lo, hi],
    })
}

fn parabolic_vertex<T: Scalar>(profile: &Profile<'_, T>, lo: T, mid: T, hi: T) -> Option<T> {
    let (fl, fm, fh) = (profile.value(lo), profile.value(mid), profile.value(hi));
    let curvature = fh - T::two() * fm + fl;
    if !(curvature > T::zero()) {
        return None;
    }
    let h = (hi - lo) * T::half();
    let v = mid - h * T::half() * (fh - fl) / curvature;
    (v >= lo && v <= hi && v.is_finite()).then_some(v)
}

/// Metric projection onto a closed ball: `z` itself inside the ball, otherwise
/// the point of `[center, z]` at distance `radius` from the center.
pub fn project_to_ball<T: Scalar>(
    space: &Space<T>,
    body: &ConvexBody<T>,
    z: &Point<T>,
) -> Result<Point<T>> {
    let d = space.distance(&body.center, z)?;
    if d <= body.radius {
        return Ok(z.clone());
    }
    Ok(space.geodesic(&body.center, z)?.eval(body.radius / d))
}

impl<T: Scalar> Geodesic<T> {
    pub fn project(&self, z: &Point<T>, cfg: &ToleranceConfig<T>) -> Result<ProjectionResult<T>> {
        project_to_geodesic(self, z, cfg)
    }
}
