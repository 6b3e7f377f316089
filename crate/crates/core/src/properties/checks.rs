use serde::Serialize;

use super::{Witness, WitnessKind};
use crate::error::{invalid, Result};
use crate::geometry::{Geodesic, Point, Space, ToleranceConfig};
use crate::scalar::Scalar;

fn sample_param<T: Scalar>(k: usize, m_count: usize) -> T {
    T::of_usize(k) / T::of_usize(m_count + 1)
}

/// Checks `P_g m ∈ [P_g x, P_g y]` for `m_count` evenly spaced interior
/// points `m` of `[x, y]`; returns the first violation.
pub fn check_property_n<T: Scalar>(
    space: &Space<T>,
    g: &Geodesic<T>,
    x: &Point<T>,
    y: &Point<T>,
    m_count: usize,
    cfg: &ToleranceConfig<T>,
) -> Result<Option<Witness<T>>> {
    if g.length() <= cfg.tol_point {
        return Err(invalid("property (N) needs a nondegenerate geodesic"));
    }
    let x = space.validate_point(x)?;
    let y = space.validate_point(y)?;
    if space.distance(&x, &y)? <= cfg.tol_point {
        return Ok(None);
    }
    let seg = space.geodesic(&x, &y)?;
    for k in 1..=m_count {
        let s = sample_param::<T>(k, m_count);
        let m = seg.eval(s);
        if let Some(w) = property_n_record(space, g, &x, &y, &m, cfg)? {
            return Ok(Some(w.value("s", s)));
        }
    }
    Ok(None)
}

/// Witness for `m` when its projection leaves `[P_g x, P_g y]` by more than
/// `tol_point`.
fn property_n_record<T: Scalar>(
    space: &Space<T>,
    g: &Geodesic<T>,
    x: &Point<T>,
    y: &Point<T>,
    m: &Point<T>,
    cfg: &ToleranceConfig<T>,
) -> Result<Option<Witness<T>>> {
    let tx = g.project(x, cfg)?.t;
    let ty = g.project(y, cfg)?.t;
    let tm = g.project(m, cfg)?.t;
    let excess = (tx.min(ty) - tm).max(tm - tx.max(ty)) * g.length();
    if excess <= cfg.tol_point {
        return Ok(None);
    }
    Ok(Some(
        Witness::new(WitnessKind::PropertyNViolation, *space)
            .point("g_start", g.start().clone())
            .point("g_end", g.end().clone())
            .point("x", x.clone())
            .point("y", y.clone())
            .point("m", m.clone())
            .value("t_x", tx)
            .value("t_y", ty)
            .value("t_m", tm)
            .value("excess", excess),
    ))
}

pub(crate) fn recheck_property_n<T: Scalar>(w: &Witness<T>, cfg: &ToleranceConfig<T>) -> Result<Option<Witness<T>>> {
    let space = &w.space;
    let g = space.geodesic(w.get_point("g_start")?, w.get_point("g_end")?)?;
    let (x, y, m) = (w.get_point("x")?, w.get_point("y")?, w.get_point("m")?);
    // `m` has to lie on [x, y].
    let detour = space.distance(x, m)? + space.distance(m, y)? - space.distance(x, y)?;
    if detour > cfg.tol_point {
        return Ok(None);
    }
    let fresh = property_n_record(space, &g, x, y, m, cfg)?;
    Ok(match (fresh, w.values.get("s")) {
        (Some(f), Some(s)) => Some(f.value("s", *s)),
        (f, _) => f,
    })
}

/// Result of a (Q4) / (Q̄4) check.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case", bound = "T: Scalar")]
pub enum Q4Outcome<T> {
    HypothesisNotMet,
    Holds,
    Violation { witness: Witness<T> },
}

impl<T> Q4Outcome<T> {
    pub fn witness(self) -> Option<Witness<T>> {
        match self {
            Q4Outcome::Violation { witness } => Some(witness),
            _ => None,
        }
    }
}

struct Q4Distances<T> {
    xp: T,
    xq: T,
    yp: T,
    yq: T,
}

fn hypothesis_met<T: Scalar>(d: &Q4Distances<T>, strict: bool, tol: T) -> bool {
    if strict {
        d.xq - d.xp > tol && d.yq - d.yp > tol
    } else {
        d.xp <= d.xq && d.yp <= d.yq
    }
}

/// With `strict`: `d(x,p) < d(x,q)` and `d(y,p) < d(y,q)` imply
/// `d(m,p) <= d(m,q)` for `m ∈ [x, y]`. Without it the hypothesis uses `<=`.
/// Strict hypotheses must hold by more than `tol_point`; a violation needs
/// `d(m,p) - d(m,q) > tol_point`.
pub fn check_q4<T: Scalar>(
    space: &Space<T>,
    x: &Point<T>,
    y: &Point<T>,
    p: &Point<T>,
    q: &Point<T>,
    m_count: usize,
    strict: bool,
    cfg: &ToleranceConfig<T>,
) -> Result<Q4Outcome<T>> {
    let [x, y, p, q] = [x, y, p, q].map(|pt| space.validate_point(pt));
    let (x, y, p, q) = (x?, y?, p?, q?);
    let d = Q4Distances {
        xp: space.distance(&x, &p)?,
        xq: space.distance(&x, &q)?,
        yp: space.distance(&y, &p)?,
        yq: space.distance(&y, &q)?,
    };
    if !hypothesis_met(&d, strict, cfg.tol_point) {
        return Ok(Q4Outcome::HypothesisNotMet);
    }
    let seg = space.geodesic(&x, &y)?;
    for k in 1..=m_count {
        let s = sample_param::<T>(k, m_count);
        let m = seg.eval(s);
        let (mp, mq) = (space.distance(&m, &p)?, space.distance(&m, &q)?);
        if mp - mq > cfg.tol_point {
            let witness = Witness::new(WitnessKind::Q4Violation, *space)
                .point("x", x)
                .point("y", y)
                .point("p", p)
                .point("q", q)
                .point("m", m)
                .value("d_xp", d.xp)
                .value("d_xq", d.xq)
                .value("d_yp", d.yp)
                .value("d_yq", d.yq)
                .value("d_mp", mp)
                .value("d_mq", mq)
                .value("strict", if strict { T::one() } else { T::zero() });
            return Ok(Q4Outcome::Violation { witness });
        }
    }
    Ok(Q4Outcome::Holds)
}

pub(crate) fn recheck_q4<T: Scalar>(w: &Witness<T>, cfg: &ToleranceConfig<T>) -> Result<Option<Witness<T>>> {
    let space = &w.space;
    let [x, y, p, q, m] = ["x", "y", "p", "q", "m"].map(|k| w.get_point(k));
    let (x, y, p, q, m) = (x?, y?, p?, q?, m?);
    let strict = w.get_value("strict")? > T::half();
    let detour = space.distance(x, m)? + space.distance(m, y)? - space.distance(x, y)?;
    if detour > cfg.tol_point {
        return Ok(None);
    }
    let d = Q4Distances {
        xp: space.distance(x, p)?,
        xq: space.distance(x, q)?,
        yp: space.distance(y, p)?,
        yq: space.distance(y, q)?,
    };
    let (mp, mq) = (space.distance(m, p)?, space.distance(m, q)?);
    if !hypothesis_met(&d, strict, cfg.tol_point) || mp - mq <= cfg.tol_point {
        return Ok(None);
    }
    Ok(Some(
        Witness::new(WitnessKind::Q4Violation, *space)
            .value("d_xp", d.xp)
            .value("d_xq", d.xq)
            .value("d_yp", d.yp)
            .value("d_yq", d.yq)
            .value("d_mp", mp)
            .value("d_mq", mq)
            .value("strict", w.get_value("strict")?),
    ))
}
