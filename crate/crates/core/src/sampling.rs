//! Seeded random points for property checks and counterexample search.
//!
//! Coordinates are drawn uniformly per space: a cube in `R^n`, the box
//! `[-2, 2] x [0.2, 3]` in the half-plane (scaled by `extent`), uniform
//! positions on a branch or page. Branch and page indices are log-uniform up
//! to the truncation so that low indices, where most gluing interactions
//! happen, are not drowned out by high ones.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Result};
use crate::geometry::{Point, Space};
use crate::scalar::Scalar;

/// Independent deterministic stream `stream` derived from `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn unit<T: Scalar, R: Rng + ?Sized>(rng: &mut R) -> T {
    T::of(rng.gen::<f64>())
}

fn uniform<T: Scalar, R: Rng + ?Sized>(rng: &mut R, lo: T, hi: T) -> T {
    lo + (hi - lo) * unit::<T, R>(rng)
}

/// Index in `1..=max`, log-uniformly distributed.
fn log_uniform_index<R: Rng + ?Sized>(rng: &mut R, max: u32) -> u32 {
    let x = (rng.gen::<f64>() * ((max as f64) + 1.0).ln()).exp().floor() as u32;
    x.clamp(1, max)
}

/// Draws points of one space from its default sampling region.
#[derive(Debug, Clone, Copy)]
pub struct Sampler<T> {
    space: Space<T>,
    extent: T,
}

impl<T: Scalar> Sampler<T> {
    pub fn new(space: Space<T>) -> Self {
        Self { space, extent: T::two() }
    }

    /// Half-width of the Euclidean cube (and horizontal range of the
    /// half-plane box).
    pub fn with_extent(mut self, extent: T) -> Self {
        self.extent = extent;
        self
    }

    pub fn space(&self) -> &Space<T> {
        &self.space
    }

    pub fn point<R: Rng + ?Sized>(&self, rng: &mut R) -> Point<T> {
        match self.space {
            Space::Euclidean { dim } => {
                Point::Euclidean((0..dim).map(|_| uniform(rng, -self.extent, self.extent)).collect())
            }
            Space::Spike { branches } => {
                let branch = log_uniform_index(rng, branches);
                let s = uniform(rng, T::zero(), T::from_u32(branch).unwrap());
                self.space.point_spike(branch, s).expect("in range")
            }
            Space::Book { pages, leg } => {
                let page = log_uniform_index(rng, pages);
                let (u, v) = triangle_point(rng, leg);
                self.space.point_book(page, u, v).expect("in triangle")
            }
            Space::HalfPlane => {
                let scale = self.extent / T::two();
                let x = uniform(rng, -self.extent, self.extent);
                let y = uniform(rng, T::of(0.2) * scale, T::of(3.0) * scale);
                Point::HalfPlane { x, y }
            }
        }
    }

    /// Point of the closed ball of `radius` around `center`, by rejection
    /// from a region that contains the ball.
    pub fn point_in_ball<R: Rng + ?Sized>(
        &self,
        center: &Point<T>,
        radius: T,
        rng: &mut R,
    ) -> Result<Point<T>> {
        if !(radius > T::zero()) {
            return Err(invalid("ball radius must be positive"));
        }
        let center = self.space.validate_point(center)?;
        const ATTEMPTS: usize = 100_000;
        for _ in 0..ATTEMPTS {
            let candidate = match (&self.space, &center) {
                (Space::Euclidean { .. }, Point::Euclidean(c)) => Some(Point::Euclidean(
                    c.iter().map(|x| *x + uniform(rng, -radius, radius)).collect(),
                )),
                (Space::HalfPlane, Point::HalfPlane { x, y }) => {
                    // The hyperbolic ball is the Euclidean disk with center
                    // (x, y cosh r) and radius y sinh r.
                    let cy = *y * radius.cosh();
                    let rr = *y * radius.sinh();
                    let px = *x + uniform(rng, -rr, rr);
                    let py = cy + uniform(rng, -rr, rr);
                    (py > T::zero()).then_some(Point::HalfPlane { x: px, y: py })
                }
                (Space::Spike { branches }, Point::Spike { branch, s }) => {
                    Some(spike_ball_point(&self.space, *branches, *branch, *s, radius, rng))
                }
                (Space::Book { pages, leg }, Point::Book { page, u, v }) => {
                    book_ball_candidate(&self.space, *pages, *leg, *page, *u, *v, radius, rng)
                }
                _ => unreachable!("validated"),
            };
            if let Some(p) = candidate {
                if crate::spaces::distance(&self.space, &center, &p) <= radius {
                    return Ok(p);
                }
            }
        }
        Err(invalid("rejection sampling in ball did not succeed"))
    }
}

fn triangle_point<T: Scalar, R: Rng + ?Sized>(rng: &mut R, leg: T) -> (T, T) {
    let (mut a, mut b): (T, T) = (unit(rng), unit(rng));
    if a + b > T::one() {
        a = T::one() - a;
        b = T::one() - b;
    }
    (a * leg, b * leg)
}

fn spike_ball_point<T: Scalar, R: Rng + ?Sized>(
    space: &Space<T>,
    branches: u32,
    branch: u32,
    s: T,
    radius: T,
    rng: &mut R,
) -> Point<T> {
    // Segments (branch, lo, hi) making up the ball.
    let own_cap = T::from_u32(branch).unwrap();
    let mut segments = vec![(branch, (s - radius).max(T::zero()), (s + radius).min(own_cap))];
    if s < radius {
        let reach = radius - s;
        for m in (1..=branches).filter(|m| *m != branch) {
            segments.push((m, T::zero(), reach.min(T::from_u32(m).unwrap())));
        }
    }
    let total = segments.iter().fold(T::zero(), |acc, (_, lo, hi)| acc + (*hi - *lo));
    let mut pick = uniform(rng, T::zero(), total);
    for (m, lo, hi) in &segments {
        let len = *hi - *lo;
        if pick <= len {
            return space.point_spike(*m, (*lo + pick).min(*hi)).expect("in range");
        }
        pick = pick - len;
    }
    let (m, _, hi) = segments[segments.len() - 1];
    space.point_spike(m, hi).expect("in range")
}

#[allow(clippy::too_many_arguments)]
fn book_ball_candidate<T: Scalar, R: Rng + ?Sized>(
    space: &Space<T>,
    pages: u32,
    leg: T,
    page: u32,
    cu: T,
    cv: T,
    radius: T,
    rng: &mut R,
) -> Option<Point<T>> {
    let target_page = if radius <= cv || pages == 1 {
        page
    } else {
        rng.gen_range(1..=pages)
    };
    let u = uniform(rng, (cu - radius).max(T::zero()), (cu + radius).min(leg));
    let v = uniform(rng, T::zero(), (cv + radius).min(leg));
    if u + v > leg {
        return None;
    }
    space.point_book(target_page, u, v).ok()
}
