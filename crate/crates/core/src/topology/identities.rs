use rayon::prelude::*;
use serde::Serialize;

use super::{in_elementary_set, Membership};
use crate::error::{invalid, precondition, Result};
use crate::geometry::{Geodesic, Point, Space, ToleranceConfig};
use crate::projection::project_to_ball;
use crate::scalar::Scalar;
use crate::spaces::ConvexBody;

/// Sample at which `P_g z ∈ [x, y]` and `z ∉ U_a(x) ∪ U_b(y)` disagree.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct PreimageMismatch<T> {
    pub index: usize,
    pub z: Point<T>,
    /// Geodesic parameter of `P_g z`.
    pub t: T,
    pub left: bool,
    pub right: bool,
    pub in_u_a_x: Membership,
    pub in_u_b_y: Membership,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct PreimageCheck<T> {
    pub checked: usize,
    /// Samples with a margin inside the tolerance band on either side.
    pub indeterminate: usize,
    pub mismatches: Vec<PreimageMismatch<T>>,
}

enum Side {
    Decided(bool),
    Band,
}

fn membership_of<T: Scalar>(
    space: &Space<T>,
    from: &Point<T>,
    to: &Point<T>,
    vacuous: bool,
    z: &Point<T>,
    cfg: &ToleranceConfig<T>,
) -> Result<Membership> {
    // With coincident ends the elementary set is taken to be empty.
    if vacuous {
        return Ok(Membership::Out);
    }
    Ok(in_elementary_set(space, from, to, z, cfg)?.membership)
}

/// Pointwise check of `P_g^{-1}([x, y]) = (H \ U_a(x)) ∩ (H \ U_b(y))` for
/// `g = [a, b]` and `x, y` on `g` with `d(a, x) <= d(a, y)`.
pub fn check_preimage_identity<T: Scalar>(
    space: &Space<T>,
    g: &Geodesic<T>,
    x: &Point<T>,
    y: &Point<T>,
    samples: &[Point<T>],
    cfg: &ToleranceConfig<T>,
) -> Result<PreimageCheck<T>> {
    let x = space.validate_point(x)?;
    let y = space.validate_point(y)?;
    let (a, b) = (g.start(), g.end());
    let len = g.length();
    let slack = cfg.tol_point * T::of(4.0);
    for (name, p) in [("x", &x), ("y", &y)] {
        let detour = space.distance(a, p)? + space.distance(p, b)? - len;
        if detour > slack {
            return Err(invalid(format!("{name} does not lie on the geodesic (detour {detour})")));
        }
    }
    let (dax, day) = (space.distance(a, &x)?, space.distance(a, &y)?);
    if dax > day + cfg.tol_point {
        return Err(invalid("points must satisfy d(a, x) <= d(a, y)"));
    }
    let x_at_a = dax <= cfg.tol_point;
    let y_at_b = space.distance(&y, b)? <= cfg.tol_point;

    let outcomes = samples
        .par_iter()
        .enumerate()
        .map(|(index, z)| -> Result<Option<Option<PreimageMismatch<T>>>> {
            let z = space.validate_point(z)?;
            let proj = g.project(&z, cfg)?;
            let left = if len == T::zero() {
                Side::Decided(true)
            } else {
                let pos = proj.t * len;
                let below = dax - pos;
                let above = pos - day;
                let lower_band = !x_at_a && below.abs() <= cfg.tol_point;
                let upper_band = !y_at_b && above.abs() <= cfg.tol_point;
                if lower_band || upper_band {
                    Side::Band
                } else {
                    Side::Decided((x_at_a || below < T::zero()) && (y_at_b || above < T::zero()))
                }
            };
            let ua = membership_of(space, a, &x, x_at_a, &z, cfg)?;
            let ub = membership_of(space, b, &y, y_at_b, &z, cfg)?;
            let right = match (ua, ub) {
                (Membership::Indeterminate, _) | (_, Membership::Indeterminate) => Side::Band,
                (ua, ub) => Side::Decided(ua == Membership::Out && ub == Membership::Out),
            };
            Ok(match (left, right) {
                (Side::Decided(l), Side::Decided(r)) => Some(
                    (l != r).then(|| PreimageMismatch {
                        index,
                        z,
                        t: proj.t,
                        left: l,
                        right: r,
                        in_u_a_x: ua,
                        in_u_b_y: ub,
                    }),
                ),
                _ => None,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let checked = outcomes.iter().flatten().count();
    Ok(PreimageCheck {
        checked,
        indeterminate: samples.len() - checked,
        mismatches: outcomes.into_iter().flatten().flatten().collect(),
    })
}

/// Body sample found inside `U_x(P_C x)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct ComplementViolation<T> {
    pub index: usize,
    pub c: Point<T>,
    pub margin: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct ComplementCheck<T> {
    /// `P_C x`.
    pub projection: Point<T>,
    pub checked: usize,
    pub outside_body: usize,
    pub indeterminate: usize,
    pub violations: Vec<ComplementViolation<T>>,
}

/// Pointwise check of `U_x(P_C x) ⊆ H \ C` for a closed ball `C` and `x`
/// outside it. Samples that fall outside the body are counted and skipped.
pub fn check_convex_complement<T: Scalar>(
    space: &Space<T>,
    body: &ConvexBody<T>,
    x: &Point<T>,
    samples: &[Point<T>],
    cfg: &ToleranceConfig<T>,
) -> Result<ComplementCheck<T>> {
    let x = space.validate_point(x)?;
    if space.distance(&body.center, &x)? <= body.radius + cfg.tol_point {
        return Err(precondition("x must lie outside the convex body"));
    }
    let px = project_to_ball(space, body, &x)?;
    let outcomes = samples
        .par_iter()
        .map(|c| -> Result<Option<(Membership, T)>> {
            let c = space.validate_point(c)?;
            if !body.contains(space, &c)? {
                return Ok(None);
            }
            let q = in_elementary_set(space, &x, &px, &c, cfg)?;
            Ok(Some((q.membership, q.margin)))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut check = ComplementCheck {
        projection: px,
        checked: 0,
        outside_body: 0,
        indeterminate: 0,
        violations: Vec::new(),
    };
    for (index, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            None => check.outside_body += 1,
            Some((Membership::Out, _)) => check.checked += 1,
            Some((Membership::Indeterminate, _)) => check.indeterminate += 1,
            Some((Membership::In, margin)) => {
                check.checked += 1;
                check.violations.push(ComplementViolation {
                    index,
                    c: samples[index].clone(),
                    margin,
                });
            }
        }
    }
    Ok(check)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> ToleranceConfig<f64> {
        ToleranceConfig::default()
    }

    fn e2(x: f64, y: f64) -> Point<f64> {
        Point::Euclidean(vec![x, y])
    }

    #[test]
    fn planar_preimage_examples() {
        let r2 = Space::euclidean(2).unwrap();
        let g = r2.geodesic(&e2(0.0, 0.0), &e2(4.0, 0.0)).unwrap();
        let (x, y) = (e2(1.0, 0.0), e2(3.0, 0.0));
        let samples = vec![e2(2.0, 9.0), e2(0.0, 5.0), e2(5.0, 1.0), e2(-3.0, -3.0)];
        let check = check_preimage_identity(&r2, &g, &x, &y, &samples, &cfg()).unwrap();
        assert_eq!(check.checked, 4);
        assert!(check.mismatches.is_empty(), "{:?}", check.mismatches);
    }

    #[test]
    fn degenerate_subsegment_is_the_whole_geodesic() {
        let r2 = Space::euclidean(2).unwrap();
        let (a, b) = (e2(0.0, 0.0), e2(4.0, 0.0));
        let g = r2.geodesic(&a, &b).unwrap();
        let samples = vec![e2(-2.0, 1.0), e2(2.0, 9.0), e2(7.0, -1.0)];
        let check = check_preimage_identity(&r2, &g, &a, &b, &samples, &cfg()).unwrap();
        assert_eq!(check.checked, 3);
        assert!(check.mismatches.is_empty());
    }

    #[test]
    fn off_geodesic_points_are_rejected() {
        let r2 = Space::euclidean(2).unwrap();
        let g = r2.geodesic(&e2(0.0, 0.0), &e2(4.0, 0.0)).unwrap();
        assert!(check_preimage_identity(&r2, &g, &e2(1.0, 1.0), &e2(3.0, 0.0), &[], &cfg()).is_err());
        assert!(check_preimage_identity(&r2, &g, &e2(3.0, 0.0), &e2(1.0, 0.0), &[], &cfg()).is_err());
    }

    #[test]
    fn convex_complement_examples() {
        let r2 = Space::euclidean(2).unwrap();
        let ball = ConvexBody::closed_ball(&r2, e2(0.0, 0.0), 1.0).unwrap();
        let check = check_convex_complement(&r2, &ball, &e2(3.0, 0.0), &[e2(0.0, 0.0), e2(0.0, 1.0)], &cfg()).unwrap();
        assert_eq!(check.projection, e2(1.0, 0.0));
        assert_eq!(check.checked, 2);
        assert!(check.violations.is_empty());

        let spike = Space::spike(4).unwrap();
        let origin = spike.point_spike(1, 0.0).unwrap();
        let ball = ConvexBody::closed_ball(&spike, origin, 1.0).unwrap();
        let x = spike.point_spike(2, 2.0).unwrap();
        let c = spike.point_spike(3, 0.5).unwrap();
        let check = check_convex_complement(&spike, &ball, &x, &[c], &cfg()).unwrap();
        assert_eq!(check.projection, spike.point_spike(2, 1.0).unwrap());
        assert_eq!((check.checked, check.violations.len()), (1, 0));

        let h = Space::halfplane();
        let ball = ConvexBody::closed_ball(&h, Point::HalfPlane { x: 0.0, y: 1.0 }, 0.5).unwrap();
        let samples: Vec<_> = (0..=10)
            .map(|i| Point::HalfPlane { x: 0.0, y: (-0.5 + 0.1 * i as f64).exp() })
            .collect();
        let check = check_convex_complement(&h, &ball, &Point::HalfPlane { x: 0.0, y: 4.0 }, &samples, &cfg()).unwrap();
        let Point::HalfPlane { x, y } = check.projection else { unreachable!() };
        assert!(x.abs() < 1e-12 && (y - 0.5f64.exp()).abs() < 1e-12);
        assert_eq!(check.violations.len(), 0);
        assert_eq!(check.checked + check.indeterminate + check.outside_body, 11);
        assert!(check.checked >= 9);
    }

    #[test]
    fn inside_point_is_a_precondition_error() {
        let r2 = Space::euclidean(2).unwrap();
        let ball = ConvexBody::closed_ball(&r2, e2(0.0, 0.0), 1.0).unwrap();
        let err = check_convex_complement(&r2, &ball, &e2(0.5, 0.0), &[], &cfg()).unwrap_err();
        assert!(matches!(err, crate::Error::Precondition(_)));
    }
}
