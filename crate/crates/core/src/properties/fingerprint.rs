use rayon::prelude::*;
use serde::Serialize;

use super::{Witness, WitnessKind};
use crate::error::{invalid, precondition, Result};
use crate::geometry::{Point, Space, ToleranceConfig};
use crate::scalar::Scalar;

/// Projections of one point onto every geodesic between two base points.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct Fingerprint<T> {
    /// Base points after merging duplicates.
    pub base_set: Vec<Point<T>>,
    /// Index pairs `(i, j)`, `i < j`, of the geodesics `[b_i, b_j]`.
    pub geodesics: Vec<(usize, usize)>,
    /// `P_[b_i, b_j] z` for each pair.
    pub values: Vec<Point<T>>,
    /// Geodesic parameters of `values`.
    pub params: Vec<T>,
}

fn dedup<T: Scalar>(space: &Space<T>, points: &[Point<T>], tol: T) -> Result<Vec<Point<T>>> {
    let mut out: Vec<Point<T>> = Vec::new();
    for p in points {
        let p = space.validate_point(p)?;
        let mut fresh = true;
        for q in &out {
            if space.distance(&p, q)? <= tol {
                fresh = false;
                break;
            }
        }
        if fresh {
            out.push(p);
        }
    }
    Ok(out)
}

/// Projects `z` onto all geodesics with both ends in `base_set`.
pub fn fingerprint<T: Scalar>(
    space: &Space<T>,
    base_set: &[Point<T>],
    z: &Point<T>,
    cfg: &ToleranceConfig<T>,
) -> Result<Fingerprint<T>> {
    let base_set = dedup(space, base_set, cfg.tol_point)?;
    if base_set.len() < 2 {
        return Err(invalid("fingerprint needs at least two distinct base points"));
    }
    let z = space.validate_point(z)?;
    let geodesics: Vec<(usize, usize)> = (0..base_set.len())
        .flat_map(|i| (i + 1..base_set.len()).map(move |j| (i, j)))
        .collect();
    let projections = geodesics
        .par_iter()
        .map(|(i, j)| space.geodesic(&base_set[*i], &base_set[*j])?.project(&z, cfg))
        .collect::<Result<Vec<_>>>()?;
    let (values, params) = projections.into_iter().map(|p| (p.point, p.t)).unzip();
    Ok(Fingerprint {
        base_set,
        geodesics,
        values,
        params,
    })
}

/// Nearby base points of `x` and `y` and the projections of `x`, `y` onto
/// the geodesic joining them.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct SeparationRecord<T> {
    pub x: Point<T>,
    pub y: Point<T>,
    pub x_d: Point<T>,
    pub y_d: Point<T>,
    pub proj_x: Point<T>,
    pub proj_y: Point<T>,
    /// `d(x, y)`.
    pub r: T,
    /// `d(P x, P y)` on `[x_d, y_d]`.
    pub separation: T,
    /// `separation > r / 3`.
    pub holds: bool,
}

impl<T: Scalar> SeparationRecord<T> {
    pub fn to_witness(&self, space: &Space<T>) -> Witness<T> {
        Witness::new(WitnessKind::SeparationRecord, *space)
            .point("x", self.x.clone())
            .point("y", self.y.clone())
            .point("x_d", self.x_d.clone())
            .point("y_d", self.y_d.clone())
            .point("proj_x", self.proj_x.clone())
            .point("proj_y", self.proj_y.clone())
            .value("r", self.r)
            .value("separation", self.separation)
    }
}

fn nearest_within<T: Scalar>(space: &Space<T>, base: &[Point<T>], p: &Point<T>, bound: T) -> Result<Option<Point<T>>> {
    let mut best: Option<(T, &Point<T>)> = None;
    for b in base {
        let d = space.distance(p, b)?;
        if d < bound && best.is_none_or(|(bd, _)| d < bd) {
            best = Some((d, b));
        }
    }
    Ok(best.map(|(_, b)| b.clone()))
}

fn separation_for<T: Scalar>(
    space: &Space<T>,
    x: &Point<T>,
    y: &Point<T>,
    x_d: &Point<T>,
    y_d: &Point<T>,
    cfg: &ToleranceConfig<T>,
) -> Result<SeparationRecord<T>> {
    let r = space.distance(x, y)?;
    let g = space.geodesic(x_d, y_d)?;
    let proj_x = g.project(x, cfg)?.point;
    let proj_y = g.project(y, cfg)?.point;
    let separation = space.distance(&proj_x, &proj_y)?;
    Ok(SeparationRecord {
        x: x.clone(),
        y: y.clone(),
        x_d: x_d.clone(),
        y_d: y_d.clone(),
        proj_x,
        proj_y,
        r,
        separation,
        holds: separation > r / T::of(3.0),
    })
}

/// Picks base points within `r / 3` of `x` and `y`, `r = d(x, y)`, and
/// measures how far apart `x` and `y` project on the geodesic between them.
pub fn check_fingerprint_separation<T: Scalar>(
    space: &Space<T>,
    base_set: &[Point<T>],
    x: &Point<T>,
    y: &Point<T>,
    cfg: &ToleranceConfig<T>,
) -> Result<SeparationRecord<T>> {
    let x = space.validate_point(x)?;
    let y = space.validate_point(y)?;
    let r = space.distance(&x, &y)?;
    if r <= cfg.tol_point {
        return Err(precondition("separation needs x != y"));
    }
    let base = base_set.iter().map(|b| space.validate_point(b)).collect::<Result<Vec<_>>>()?;
    let third = r / T::of(3.0);
    let x_d = nearest_within(space, &base, &x, third)?
        .ok_or_else(|| precondition("no base point within r/3 of x"))?;
    let y_d = nearest_within(space, &base, &y, third)?
        .ok_or_else(|| precondition("no base point within r/3 of y"))?;
    separation_for(space, &x, &y, &x_d, &y_d, cfg)
}

pub(crate) fn recheck_separation<T: Scalar>(w: &Witness<T>, cfg: &ToleranceConfig<T>) -> Result<Option<Witness<T>>> {
    let space = &w.space;
    let [x, y, x_d, y_d] = ["x", "y", "x_d", "y_d"].map(|k| w.get_point(k));
    let (x, y, x_d, y_d) = (x?, y?, x_d?, y_d?);
    let record = separation_for(space, x, y, x_d, y_d, cfg)?;
    let third = record.r / T::of(3.0);
    let dense = space.distance(x, x_d)? < third && space.distance(y, y_d)? < third;
    Ok((dense && record.holds).then(|| record.to_witness(space)))
}
