use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::in_elementary_set;
use crate::error::{invalid, precondition, Result};
use crate::geometry::{Point, Space, ToleranceConfig};
use crate::sampling::{stream_rng, Sampler};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverOptions {
    /// Random points of the ball used to estimate the covering radius.
    pub covering_samples: usize,
    pub seed: u64,
}

impl Default for CoverOptions {
    fn default() -> Self {
        Self {
            covering_samples: 4096,
            seed: 0,
        }
    }
}

/// Tester `z` pushed out of `U_x(m)` for the midpoint `m` of `[x, y]`,
/// `y` a net point.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct Expulsion<T> {
    pub tester: usize,
    pub net_index: usize,
    pub midpoint: Point<T>,
    /// `d(y, P_K z)`, at most `eps / 2`.
    pub net_gap: T,
    /// `d(P_[x,m] z, m)`.
    pub margin: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct ConeCoverCertificate<T> {
    pub center: Point<T>,
    pub eps: T,
    pub net_size: usize,
    /// Largest sampled distance from a ball point to the net.
    pub covering_radius: T,
    pub expulsions: Vec<Expulsion<T>>,
    /// Testers not expelled by any admissible midpoint.
    pub counterexamples: Vec<usize>,
}

impl<T: Scalar> ConeCoverCertificate<T> {
    pub fn certified(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Largest distance to the nearest net point over `samples` random points of
/// `ball(x, radius)`.
pub fn sampled_covering_radius<T: Scalar>(
    space: &Space<T>,
    x: &Point<T>,
    radius: T,
    net: &[Point<T>],
    samples: usize,
    seed: u64,
) -> Result<T> {
    if net.is_empty() {
        return Err(invalid("net is empty"));
    }
    let sampler = Sampler::new(*space);
    let worst = (0..samples)
        .into_par_iter()
        .map(|i| -> Result<T> {
            let mut rng = stream_rng(seed, i as u64);
            let p = sampler.point_in_ball(x, radius, &mut rng)?;
            net.iter().try_fold(T::infinity(), |acc, y| Ok(acc.min(space.distance(&p, y)?)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(worst.into_iter().fold(T::zero(), T::max))
}

/// Finite subset of `ball(x, radius)` with covering radius at most `covering`.
///
/// Coordinate grids in `R^n`, polar rings in the half-plane, evenly spaced
/// points along each branch of the spike and planar grids on each page of the
/// book; grid points falling outside the ball are moved to their nearest
/// point in it.
pub fn ball_net<T: Scalar>(space: &Space<T>, x: &Point<T>, radius: T, covering: T) -> Result<Vec<Point<T>>> {
    if !(radius > T::zero()) || !(covering > T::zero()) {
        return Err(invalid("ball radius and covering radius must be positive"));
    }
    let x = space.validate_point(x)?;
    let net = match (space, &x) {
        (Space::Euclidean { dim }, Point::Euclidean(c)) => euclidean_net(*dim, c, radius, covering),
        (Space::HalfPlane, Point::HalfPlane { x, y }) => halfplane_net(*x, *y, radius, covering),
        (Space::Spike { branches }, Point::Spike { branch, s }) => {
            spike_net(space, *branches, *branch, *s, radius, covering)?
        }
        (Space::Book { pages, leg }, Point::Book { page, u, v }) => {
            book_net(space, *pages, *leg, *page, [*u, *v], radius, covering)?
        }
        _ => unreachable!("validated"),
    };
    Ok(net)
}

fn grid_axis<T: Scalar>(lo: T, hi: T, h: T) -> Vec<T> {
    let steps = ((hi - lo) / h).ceil().to_usize().unwrap_or(0);
    let step = if steps == 0 { T::zero() } else { (hi - lo) / T::of_usize(steps) };
    (0..=steps).map(|i| lo + step * T::of_usize(i)).collect()
}

fn euclidean_net<T: Scalar>(dim: usize, c: &[T], radius: T, covering: T) -> Vec<Point<T>> {
    // Cells of side h have half-diagonal h sqrt(dim) / 2.
    let h = T::two() * covering / T::of_usize(dim).sqrt();
    let axis = grid_axis(-radius, radius, h);
    let mut net = Vec::new();
    let mut index = vec![0usize; dim];
    'outer: loop {
        let offset: Vec<T> = index.iter().map(|i| axis[*i]).collect();
        let norm = offset.iter().fold(T::zero(), |acc, v| acc + *v * *v).sqrt();
        if norm <= radius + covering {
            let scale = if norm > radius { radius / norm } else { T::one() };
            net.push(Point::Euclidean(c.iter().zip(&offset).map(|(ci, oi)| *ci + *oi * scale).collect()));
        }
        for slot in index.iter_mut() {
            *slot += 1;
            if *slot < axis.len() {
                continue 'outer;
            }
            *slot = 0;
        }
        break;
    }
    net
}

fn halfplane_net<T: Scalar>(x0: T, y0: T, radius: T, covering: T) -> Vec<Point<T>> {
    // Rings at radial spacing `covering`; along a ring of hyperbolic radius
    // rho the angular step keeps the arc between neighbours below `covering`.
    let mut net = vec![Point::HalfPlane { x: x0, y: y0 }];
    let rings = (radius / covering).ceil().to_usize().unwrap_or(1).max(1);
    let tau = T::of(std::f64::consts::TAU);
    for i in 0..rings {
        let rho = (covering * (T::of_usize(i) + T::half())).min(radius);
        let count = (tau * rho.sinh() / covering).ceil().to_usize().unwrap_or(1).max(3);
        let w = (rho * T::half()).tanh();
        for j in 0..count {
            let phi = tau * T::of_usize(j) / T::of_usize(count);
            let (a, b) = (w * phi.cos(), w * phi.sin());
            // Disk to half-plane: w -> i (1 + w) / (1 - w), normalized at i.
            let den = (T::one() - a) * (T::one() - a) + b * b;
            let zx = -T::two() * b / den;
            let zy = (T::one() - a * a - b * b) / den;
            net.push(Point::HalfPlane { x: x0 + y0 * zx, y: y0 * zy });
        }
    }
    net
}

fn spike_net<T: Scalar>(space: &Space<T>, branches: u32, branch: u32, s: T, radius: T, covering: T) -> Result<Vec<Point<T>>> {
    let own = T::from_u32(branch).unwrap();
    let mut segments = vec![(branch, (s - radius).max(T::zero()), (s + radius).min(own))];
    if s < radius {
        for m in (1..=branches).filter(|m| *m != branch) {
            segments.push((m, T::zero(), (radius - s).min(T::from_u32(m).unwrap())));
        }
    }
    let mut net = Vec::new();
    for (m, lo, hi) in segments {
        let k = ((hi - lo) / (T::two() * covering)).ceil().to_usize().unwrap_or(1).max(1);
        let step = (hi - lo) / T::of_usize(k);
        for j in 0..k {
            net.push(space.point_spike(m, lo + step * (T::of_usize(j) + T::half()))?);
        }
    }
    Ok(net)
}

fn book_net<T: Scalar>(
    space: &Space<T>,
    pages: u32,
    leg: T,
    page: u32,
    c: [T; 2],
    radius: T,
    covering: T,
) -> Result<Vec<Point<T>>> {
    let h = T::two().sqrt() * covering;
    let mut seen = BTreeSet::new();
    let mut net = Vec::new();
    let reach_other = radius > c[1];
    for k in 1..=pages {
        if k != page && !reach_other {
            continue;
        }
        let center = if k == page { c } else { [c[0], -c[1]] };
        let us = grid_axis((c[0] - radius).max(T::zero()), (c[0] + radius).min(leg), h);
        let vs = grid_axis(T::zero(), (center[1] + radius).min(leg), h);
        for u in &us {
            for v in &vs {
                let [pu, pv] = disk_triangle_projection([*u, *v], center, radius, leg);
                let p = space.point_book(k, pu.max(T::zero()), pv.max(T::zero()));
                let Ok(p) = p else { continue };
                let key = match &p {
                    Point::Book { page, u, v } => (*page, (u.as_f64() * 1e9).round() as i64, (v.as_f64() * 1e9).round() as i64),
                    _ => unreachable!(),
                };
                if seen.insert(key) {
                    net.push(p);
                }
            }
        }
    }
    Ok(net)
}

/// Nearest point of `{|w - c| <= r} ∩ {u, v >= 0, u + v <= leg}` by
/// Dykstra's alternating projections.
fn disk_triangle_projection<T: Scalar>(g: [T; 2], c: [T; 2], r: T, leg: T) -> [T; 2] {
    let disk = |w: [T; 2]| {
        let (du, dv) = (w[0] - c[0], w[1] - c[1]);
        let n = (du * du + dv * dv).sqrt();
        if n <= r {
            w
        } else {
            [c[0] + du * r / n, c[1] + dv * r / n]
        }
    };
    let tri = |w: [T; 2]| triangle_projection(w, leg);
    let (mut x, mut p, mut q) = (g, [T::zero(); 2], [T::zero(); 2]);
    for _ in 0..500 {
        let y = disk([x[0] + p[0], x[1] + p[1]]);
        p = [x[0] + p[0] - y[0], x[1] + p[1] - y[1]];
        let next = tri([y[0] + q[0], y[1] + q[1]]);
        q = [y[0] + q[0] - next[0], y[1] + q[1] - next[1]];
        let moved = (next[0] - x[0]).abs() + (next[1] - x[1]).abs();
        x = next;
        if moved <= T::epsilon() * leg {
            break;
        }
    }
    x
}

fn triangle_projection<T: Scalar>(w: [T; 2], leg: T) -> [T; 2] {
    if w[0] >= T::zero() && w[1] >= T::zero() && w[0] + w[1] <= leg {
        return w;
    }
    let corners = [[T::zero(), T::zero()], [leg, T::zero()], [T::zero(), leg]];
    let mut best = corners[0];
    let mut best_d = T::infinity();
    for i in 0..3 {
        let (a, b) = (corners[i], corners[(i + 1) % 3]);
        let e = [b[0] - a[0], b[1] - a[1]];
        let t = (((w[0] - a[0]) * e[0] + (w[1] - a[1]) * e[1]) / (e[0] * e[0] + e[1] * e[1]))
            .max(T::zero())
            .min(T::one());
        let p = [a[0] + t * e[0], a[1] + t * e[1]];
        let d = (p[0] - w[0]).powi(2) + (p[1] - w[1]).powi(2);
        if d < best_d {
            best = p;
            best_d = d;
        }
    }
    best
}

/// Checks that every tester outside `K = ball(x, eps)` lies outside some
/// `U_x(m_i)`, `m_i` the midpoint of `[x, y_i]` for a net point `y_i` within
/// `eps / 2` of `P_K z`.
pub fn cone_cover_certificate<T: Scalar>(
    space: &Space<T>,
    x: &Point<T>,
    eps: T,
    net: &[Point<T>],
    testers: &[Point<T>],
    opts: &CoverOptions,
    cfg: &ToleranceConfig<T>,
) -> Result<ConeCoverCertificate<T>> {
    if !(eps > T::zero()) {
        return Err(invalid("eps must be positive"));
    }
    let x = space.validate_point(x)?;
    let net = net.iter().map(|y| space.validate_point(y)).collect::<Result<Vec<_>>>()?;
    if net.is_empty() {
        return Err(precondition("net is empty"));
    }
    for (i, y) in net.iter().enumerate() {
        if space.distance(&x, y)? > eps + cfg.tol_point {
            return Err(precondition(format!("net point {i} lies outside the ball")));
        }
    }
    let testers = testers.iter().map(|z| space.validate_point(z)).collect::<Result<Vec<_>>>()?;
    let tester_dist = testers
        .iter()
        .enumerate()
        .map(|(j, z)| {
            let d = space.distance(&x, z)?;
            if d <= eps {
                return Err(precondition(format!("tester {j} is not outside the ball (distance {d})")));
            }
            Ok(d)
        })
        .collect::<Result<Vec<_>>>()?;
    let covering_radius = sampled_covering_radius(space, &x, eps, &net, opts.covering_samples, opts.seed)?;
    if covering_radius > eps * T::half() {
        return Err(precondition(format!(
            "net covering radius {covering_radius} exceeds eps/2; certificate would be vacuous"
        )));
    }
    let midpoints = net
        .iter()
        .map(|y| {
            if space.distance(&x, y)? <= cfg.tol_point {
                Ok(None)
            } else {
                space.midpoint(&x, y).map(Some)
            }
        })
        .collect::<Result<Vec<_>>>()?;

    let outcomes = testers
        .par_iter()
        .zip(tester_dist.par_iter())
        .enumerate()
        .map(|(j, (z, d))| -> Result<Option<Expulsion<T>>> {
            let pk = space.geodesic(&x, z)?.eval(eps / *d);
            let mut candidates = net
                .iter()
                .enumerate()
                .filter(|(i, _)| midpoints[*i].is_some())
                .map(|(i, y)| Ok((i, space.distance(y, &pk)?)))
                .collect::<Result<Vec<_>>>()?;
            candidates.retain(|(_, gap)| *gap <= eps * T::half());
            candidates.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap().then(a.0.cmp(&b.0)));
            for (i, gap) in candidates {
                let m = midpoints[i].as_ref().expect("filtered");
                let q = in_elementary_set(space, &x, m, z, cfg)?;
                if q.is_out() {
                    return Ok(Some(Expulsion {
                        tester: j,
                        net_index: i,
                        midpoint: m.clone(),
                        net_gap: gap,
                        margin: q.margin,
                    }));
                }
            }
            Ok(None)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut expulsions = Vec::new();
    let mut counterexamples = Vec::new();
    for (j, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            Some(e) => expulsions.push(e),
            None => counterexamples.push(j),
        }
    }
    Ok(ConeCoverCertificate {
        center: x,
        eps,
        net_size: net.len(),
        covering_radius,
        expulsions,
        counterexamples,
    })
}
