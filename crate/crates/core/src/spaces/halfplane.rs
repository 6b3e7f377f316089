//! The hyperbolic upper half-plane `{(x, y) : y > 0}` with curvature -1.
//!
//! Geodesics are evaluated through the hyperboloid model, where the
//! constant-speed geodesic is `(sinh((1-t)L) p + sinh(tL) q) / sinh L`.
//! Only the two light-cone coordinates `X0 - X2 = 1/y` and `X1 = x/y` are
//! needed to map back, so the interpolation never subtracts large numbers
//! and vertical rays need no special case.

use super::Route;
use crate::error::{invalid, Result};
use crate::geometry::Point;
use crate::scalar::Scalar;

pub(crate) fn validate<T: Scalar>(x: T, y: T) -> Result<Point<T>> {
    if !x.is_finite() || !y.is_finite() || !(y > T::zero()) {
        return Err(invalid(format!("({x}, {y}) is not in the upper half-plane")));
    }
    Ok(Point::HalfPlane { x, y })
}

/// `arcosh(1 + |z-w|^2 / (2 Im z Im w))`, evaluated as
/// `2 asinh(|z-w| / (2 sqrt(Im z Im w)))` for accuracy at short range.
pub(crate) fn distance<T: Scalar>(x1: T, y1: T, x2: T, y2: T) -> T {
    let chord = (x1 - x2).hypot(y1 - y2);
    T::two() * (chord / (T::two() * (y1 * y2).sqrt())).asinh()
}

/// `cosh d(z, w) = 1 + |z-w|^2 / (2 Im z Im w)`.
pub(crate) fn cosh_distance<T: Scalar>(x1: T, y1: T, x2: T, y2: T) -> T {
    let dx = x1 - x2;
    let dy = y1 - y2;
    T::one() + (dx * dx + dy * dy) / (T::two() * y1 * y2)
}

pub(crate) fn route<T: Scalar>(x1: T, y1: T, x2: T, y2: T) -> (T, Route<T>) {
    let len = distance(x1, y1, x2, y2);
    (
        len,
        Route::Hyperbolic {
            wa: y1.recip(),
            ka: x1 / y1,
            wb: y2.recip(),
            kb: x2 / y2,
            sinh_len: len.sinh(),
        },
    )
}

pub(crate) fn eval<T: Scalar>(route: &Route<T>, t: T) -> Point<T> {
    let Route::Hyperbolic { wa, ka, wb, kb, sinh_len } = *route else {
        unreachable!("hyperbolic route")
    };
    if sinh_len == T::zero() {
        return Point::HalfPlane { x: ka / wa, y: wa.recip() };
    }
    let len = sinh_len.asinh();
    let ca = ((T::one() - t) * len).sinh() / sinh_len;
    let cb = (t * len).sinh() / sinh_len;
    let w = ca * wa + cb * wb;
    let k = ca * ka + cb * kb;
    Point::HalfPlane { x: k / w, y: w.recip() }
}
