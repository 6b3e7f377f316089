//! The spike: intervals `I_n = [0, n]` glued at their common endpoint 0.

use super::Route;
use crate::error::{invalid, Result};
use crate::geometry::{Point, Space};
use crate::scalar::Scalar;

pub(crate) fn normalize<T: Scalar>(branch: u32, s: T) -> Result<Point<T>> {
    if branch == 0 {
        return Err(invalid("spike branches are numbered from 1"));
    }
    if !s.is_finite() || s < T::zero() || s > T::from_u32(branch).unwrap() {
        return Err(invalid(format!("spike coordinate {s} outside [0, {branch}]")));
    }
    Ok(canonical(branch, s))
}

fn canonical<T: Scalar>(branch: u32, s: T) -> Point<T> {
    if s == T::zero() {
        Point::Spike { branch: 1, s }
    } else {
        Point::Spike { branch, s }
    }
}

pub(crate) fn distance<T: Scalar>(m: u32, s: T, n: u32, t: T) -> T {
    if m == n || s == T::zero() || t == T::zero() {
        (s - t).abs()
    } else {
        s + t
    }
}

pub(crate) fn route<T: Scalar>(m: u32, s: T, n: u32, t: T) -> (T, Route<T>) {
    let len = distance(m, s, n, t);
    if m == n || t == T::zero() {
        (len, Route::SpikeBranch { branch: m })
    } else if s == T::zero() {
        (len, Route::SpikeBranch { branch: n })
    } else {
        (len, Route::SpikeThroughOrigin)
    }
}

pub(crate) fn eval<T: Scalar>(route: &Route<T>, m: u32, s: T, n: u32, u: T, t: T) -> Point<T> {
    match route {
        Route::SpikeBranch { branch } => {
            let x = s + t * (u - s);
            let cap = T::from_u32(*branch).unwrap();
            canonical(*branch, x.max(T::zero()).min(cap))
        }
        Route::SpikeThroughOrigin => {
            let travelled = t * (s + u);
            if travelled < s {
                canonical(m, s - travelled)
            } else {
                canonical(n, (travelled - s).min(u))
            }
        }
        _ => unreachable!("spike route"),
    }
}

/// The endpoints `x_n = (n, n)` of branches `1..=count`.
pub fn endpoint_sequence<T: Scalar>(space: &Space<T>, count: u32) -> Result<Vec<Point<T>>> {
    (1..=count)
        .map(|n| space.point_spike(n, T::from_u32(n).unwrap()))
        .collect()
}

/// Midpoints `(m, m/2)` of branches `1..=count`.
pub fn branch_midpoints<T: Scalar>(space: &Space<T>, count: u32) -> Result<Vec<Point<T>>> {
    (1..=count)
        .map(|m| space.point_spike(m, T::from_u32(m).unwrap() * T::half()))
        .collect()
}
