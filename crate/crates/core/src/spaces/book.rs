//! The book of triangles: copies of a Euclidean isosceles right triangle
//! glued along one leg (the spine).
//!
//! Every page uses the chart `(u, v)` with the right-angle vertex `A` at the
//! origin, `B = (leg, 0)` and `C = (0, leg)`, so the triangle is
//! `u, v >= 0, u + v <= leg` and the spine is `v = 0`. The distance between
//! points on different pages is the shortest path through a spine point;
//! reflecting the second page into the plane of the first turns it into a
//! straight segment whenever that segment meets the spine inside `[A, B]`.

use super::Route;
use crate::error::{invalid, Error, Result};
use crate::geometry::{Point, Space};
use crate::scalar::Scalar;

pub(crate) fn normalize<T: Scalar>(leg: T, page: u32, u: T, v: T) -> Result<Point<T>> {
    if page == 0 {
        return Err(invalid("book pages are numbered from 1"));
    }
    if !u.is_finite() || !v.is_finite() {
        return Err(invalid("non-finite book coordinate"));
    }
    let slack = leg * T::epsilon() * T::of(16.0);
    if u < T::zero() || v < T::zero() || u + v > leg + slack {
        return Err(invalid(format!("({u}, {v}) outside the page triangle with leg {leg}")));
    }
    Ok(canonical(page, u, v))
}

fn canonical<T: Scalar>(page: u32, u: T, v: T) -> Point<T> {
    if v <= T::zero() {
        Point::Book { page: 1, u: u.max(T::zero()), v: T::zero() }
    } else {
        Point::Book { page, u: u.max(T::zero()), v }
    }
}

fn hypot<T: Scalar>(a: T, b: T) -> T {
    a.hypot(b)
}

/// Spine coordinate where the unfolded segment from `p` to `q` meets `v = 0`,
/// clamped to `[0, leg]`; the flag reports whether clamping was needed.
fn crossing<T: Scalar>(leg: T, p: [T; 2], q: [T; 2]) -> (T, bool) {
    let c = p[0] + (q[0] - p[0]) * p[1] / (p[1] + q[1]);
    if c < T::zero() {
        (T::zero(), true)
    } else if c > leg {
        (leg, true)
    } else {
        (c, false)
    }
}

fn same_chart<T: Scalar>(p: [T; 2], i: u32, q: [T; 2], j: u32) -> bool {
    i == j || p[1] == T::zero() || q[1] == T::zero()
}

pub(crate) fn distance<T: Scalar>(leg: T, p: [T; 2], i: u32, q: [T; 2], j: u32) -> T {
    if same_chart(p, i, q, j) {
        return hypot(p[0] - q[0], p[1] - q[1]);
    }
    let (c, clamped) = crossing(leg, p, q);
    if clamped {
        hypot(p[0] - c, p[1]) + hypot(q[0] - c, q[1])
    } else {
        hypot(p[0] - q[0], p[1] + q[1])
    }
}

pub(crate) fn route<T: Scalar>(leg: T, p: [T; 2], i: u32, q: [T; 2], j: u32) -> (T, Route<T>) {
    if same_chart(p, i, q, j) {
        let page = if p[1] > T::zero() {
            i
        } else if q[1] > T::zero() {
            j
        } else {
            1
        };
        return (hypot(p[0] - q[0], p[1] - q[1]), Route::BookPlanar { page });
    }
    let (c, clamped) = crossing(leg, p, q);
    let first = hypot(p[0] - c, p[1]);
    let second = hypot(q[0] - c, q[1]);
    let len = if clamped { first + second } else { hypot(p[0] - q[0], p[1] + q[1]) };
    (len, Route::BookCrossing { cross: c, split: first / (first + second) })
}

pub(crate) fn eval<T: Scalar>(
    leg: T,
    route: &Route<T>,
    p: [T; 2],
    i: u32,
    q: [T; 2],
    j: u32,
    t: T,
) -> Point<T> {
    let lerp = |a: [T; 2], b: [T; 2], s: T| [a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])];
    let clip = |w: [T; 2]| [w[0].max(T::zero()).min(leg), w[1].max(T::zero())];
    match route {
        Route::BookPlanar { page } => {
            let w = clip(lerp(p, q, t));
            canonical(*page, w[0], w[1])
        }
        Route::BookCrossing { cross, split } => {
            let spine = [*cross, T::zero()];
            if t <= *split {
                let w = clip(lerp(p, spine, t / *split));
                canonical(i, w[0], w[1])
            } else {
                let w = clip(lerp(spine, q, (t - *split) / (T::one() - *split)));
                canonical(j, w[0], w[1])
            }
        }
        _ => unreachable!("book route"),
    }
}

/// Planar pieces of a book geodesic: `(page, start, end, t_start, t_end)`.
pub(crate) fn pieces<T: Scalar>(
    route: &Route<T>,
    p: [T; 2],
    i: u32,
    q: [T; 2],
    j: u32,
) -> Vec<(u32, [T; 2], [T; 2], T, T)> {
    match route {
        Route::BookPlanar { page } => vec![(*page, p, q, T::zero(), T::one())],
        Route::BookCrossing { cross, split } => {
            let spine = [*cross, T::zero()];
            vec![(i, p, spine, T::zero(), *split), (j, spine, q, *split, T::one())]
        }
        _ => unreachable!("book route"),
    }
}

/// Coordinates of `z` in the chart of `page`: reflected across the spine
/// when `z` lies in the interior of a different page.
pub(crate) fn chart_coords<T: Scalar>(z: [T; 2], z_page: u32, page: u32) -> [T; 2] {
    if z_page == page || z[1] == T::zero() {
        z
    } else {
        [z[0], -z[1]]
    }
}

fn leg_of<T: Scalar>(space: &Space<T>) -> Result<T> {
    match space {
        Space::Book { leg, .. } => Ok(*leg),
        _ => Err(Error::SpaceMismatch(format!("{:?} is not a book", space.kind()))),
    }
}

/// The right-angle vertex `A` shared by all pages.
pub fn vertex_a<T: Scalar>(space: &Space<T>) -> Result<Point<T>> {
    leg_of(space)?;
    Ok(Point::Book { page: 1, u: T::zero(), v: T::zero() })
}

/// The other spine vertex `B`.
pub fn vertex_b<T: Scalar>(space: &Space<T>) -> Result<Point<T>> {
    let leg = leg_of(space)?;
    Ok(Point::Book { page: 1, u: leg, v: T::zero() })
}

/// The apex `C_n` of page `n`.
pub fn vertex_c<T: Scalar>(space: &Space<T>, page: u32) -> Result<Point<T>> {
    let leg = leg_of(space)?;
    space.point_book(page, T::zero(), leg)
}

/// Midpoint of the hypotenuse `[B, C_n]` of page `n`.
pub fn hypotenuse_midpoint<T: Scalar>(space: &Space<T>, page: u32) -> Result<Point<T>> {
    let leg = leg_of(space)?;
    space.point_book(page, leg * T::half(), leg * T::half())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn book() -> Space<f64> {
        Space::book(6, 1.0).unwrap()
    }

    fn bp(page: u32, u: f64, v: f64) -> Point<f64> {
        Point::Book { page, u, v }
    }

    /// Independent oracle: minimize |p - s| + |s - q| over spine samples s.
    fn spine_grid(p: [f64; 2], q: [f64; 2], leg: f64, n: usize) -> f64 {
        (0..=n)
            .map(|k| {
                let s = leg * k as f64 / n as f64;
                (p[0] - s).hypot(p[1]) + (q[0] - s).hypot(q[1])
            })
            .fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn apex_to_apex_goes_through_a() {
        let h = book();
        let c2 = vertex_c(&h, 2).unwrap();
        let c3 = vertex_c(&h, 3).unwrap();
        assert_abs_diff_eq!(spine_grid([0.0, 1.0], [0.0, 1.0], 1.0, 10_000), 2.0, epsilon = 1e-12);
        assert_eq!(h.distance(&c2, &c3).unwrap(), 2.0);
        let mid = h.midpoint(&c2, &c3).unwrap();
        assert_eq!(mid, vertex_a(&h).unwrap());
    }

    #[test]
    fn same_page_distances() {
        let h = book();
        let a = vertex_a(&h).unwrap();
        assert_eq!(h.distance(&a, &vertex_c(&h, 5).unwrap()).unwrap(), 1.0);
        let b = vertex_b(&h).unwrap();
        let c2 = vertex_c(&h, 2).unwrap();
        assert_abs_diff_eq!(h.distance(&c2, &b).unwrap(), 2f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(spine_grid([0.0, 1.0], [1.0, 0.0], 1.0, 10_000), 2f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn spine_points_are_identified() {
        let h = book();
        assert_eq!(h.point_book(4, 0.3, 0.0).unwrap(), bp(1, 0.3, 0.0));
        assert!(h.point_book(2, 0.7, 0.5).is_err());
        assert!(h.point_book(7, 0.1, 0.1).is_err());
        assert!(h.point_book(0, 0.1, 0.1).is_err());
    }

    #[test]
    fn cross_page_distance_matches_spine_grid() {
        let h = book();
        let cases = [
            ([0.2, 0.3], [0.6, 0.1]),
            ([0.9, 0.05], [0.0, 0.99]),
            ([0.45, 0.5], [0.45, 0.5]),
            ([0.0, 0.2], [1.0 - 1e-9, 1e-9]),
        ];
        for (p, q) in cases {
            let d = h.distance(&bp(2, p[0], p[1]), &bp(5, q[0], q[1])).unwrap();
            assert_abs_diff_eq!(d, spine_grid(p, q, 1.0, 10_000), epsilon = 1e-6);
        }
    }

    #[test]
    fn cross_page_geodesic_touches_spine() {
        let h = book();
        let g = h.geodesic(&bp(2, 0.2, 0.6), &bp(3, 0.7, 0.2)).unwrap();
        let Route::BookCrossing { cross, split } = *g.route() else {
            panic!("expected crossing route")
        };
        match g.point_at(split).unwrap() {
            Point::Book { v, u, .. } => {
                assert_eq!(v, 0.0);
                assert_abs_diff_eq!(u, cross, epsilon = 1e-15);
            }
            _ => unreachable!(),
        }
        assert_abs_diff_eq!(
            h.distance(g.start(), &g.point_at(split).unwrap()).unwrap(),
            split * g.length(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn vertex_helpers_reject_other_spaces() {
        let e = Space::<f64>::euclidean(2).unwrap();
        assert!(vertex_a(&e).is_err());
        assert!(hypotenuse_midpoint(&book(), 1).is_ok());
    }
}
