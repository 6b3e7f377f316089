use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::geometry::{Point, Space, ToleranceConfig};
use crate::scalar::Scalar;

/// Finite set of directions `y != x` along which projections are monitored.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct ProbeSet<T> {
    probes: Vec<Point<T>>,
}

impl<T: Scalar> ProbeSet<T> {
    /// Validates the probes against the candidate limit `x`.
    pub fn new(space: &Space<T>, x: &Point<T>, probes: Vec<Point<T>>, cfg: &ToleranceConfig<T>) -> Result<Self> {
        if probes.is_empty() {
            return Err(invalid("probe set is empty"));
        }
        let x = space.validate_point(x)?;
        let probes = probes
            .iter()
            .enumerate()
            .map(|(j, y)| {
                let y = space.validate_point(y)?;
                if space.distance(&x, &y)? <= cfg.tol_point {
                    return Err(invalid(format!("probe {j} coincides with the candidate limit")));
                }
                Ok(y)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { probes })
    }

    pub fn probes(&self) -> &[Point<T>] {
        &self.probes
    }

    pub fn len(&self) -> usize {
        self.probes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probes.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case", bound = "T: Scalar")]
pub enum Verdict<T> {
    /// Every probe trace is below `epsilon` from the 1-based `index` on, and
    /// `index` lies in the first half of the prefix.
    ConvergedWithin { epsilon: T, index: usize },
    NotConvergedWithin { epsilon: T },
    /// Late excursions reach `epsilon` but stay within `tol_point` of it.
    Indeterminate { epsilon: T },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct ConvergenceReport<T> {
    pub candidate: Point<T>,
    pub probes: Vec<Point<T>>,
    /// `traces[j][k] = d(x, P_[x, y_j] x_{k+1})`.
    pub traces: Vec<Vec<T>>,
    /// `d(x, x_{k+1})`.
    pub strong_trace: Vec<T>,
    pub verdict: Verdict<T>,
    pub epsilon: T,
}

impl<T: Scalar> ConvergenceReport<T> {
    /// Maximum over probes at each index.
    pub fn envelope(&self) -> Vec<T> {
        envelope(&self.traces, self.strong_trace.len())
    }
}

fn envelope<T: Scalar>(traces: &[Vec<T>], len: usize) -> Vec<T> {
    (0..len)
        .map(|k| traces.iter().fold(T::zero(), |acc, tr| acc.max(tr[k])))
        .collect()
}

/// A finite prefix counts as converged only when its tail below `epsilon`
/// covers at least the second half of the prefix; an excursion above
/// `epsilon` late in the prefix stands in for "infinitely often".
pub(crate) fn verdict_for<T: Scalar>(envelope: &[T], epsilon: T, tol: T) -> Verdict<T> {
    let tail = envelope.iter().rev().take_while(|m| **m < epsilon).count();
    let late = &envelope[envelope.len() / 2..];
    if tail >= late.len() {
        return Verdict::ConvergedWithin {
            epsilon,
            index: envelope.len() - tail + 1,
        };
    }
    if late.iter().all(|m| *m <= epsilon + tol) {
        Verdict::Indeterminate { epsilon }
    } else {
        Verdict::NotConvergedWithin { epsilon }
    }
}

/// Traces of `d(x, P_[x,y] x_k)` for each probe `y` over the finite prefix
/// `seq`, with a verdict at level `epsilon` relative to the probe set.
pub fn weak_convergence_report<T: Scalar>(
    space: &Space<T>,
    seq: &[Point<T>],
    x: &Point<T>,
    probes: &ProbeSet<T>,
    epsilon: T,
    cfg: &ToleranceConfig<T>,
) -> Result<ConvergenceReport<T>> {
    if seq.is_empty() {
        return Err(invalid("sequence prefix is empty"));
    }
    if !(epsilon > T::zero()) {
        return Err(invalid("epsilon must be positive"));
    }
    let x = space.validate_point(x)?;
    let seq = seq.iter().map(|p| space.validate_point(p)).collect::<Result<Vec<_>>>()?;
    for (j, y) in probes.probes().iter().enumerate() {
        if space.distance(&x, y)? <= cfg.tol_point {
            return Err(invalid(format!("probe {j} coincides with the candidate limit")));
        }
    }
    let traces = probes
        .probes()
        .par_iter()
        .map(|y| {
            let g = space.geodesic(&x, y)?;
            seq.iter()
                .map(|xk| {
                    let proj = g.project(xk, cfg)?;
                    space.distance(&x, &proj.point)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let strong_trace = seq.iter().map(|xk| space.distance(&x, xk)).collect::<Result<Vec<_>>>()?;
    let verdict = verdict_for(&envelope(&traces, seq.len()), epsilon, cfg.tol_point);
    Ok(ConvergenceReport {
        candidate: x,
        probes: probes.probes().to_vec(),
        traces,
        strong_trace,
        verdict,
        epsilon,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::spike::{branch_midpoints, endpoint_sequence};

    fn cfg() -> ToleranceConfig<f64> {
        ToleranceConfig::default()
    }

    fn e2(x: f64, y: f64) -> Point<f64> {
        Point::Euclidean(vec![x, y])
    }

    #[test]
    fn spike_endpoints_converge_weakly_to_the_origin() {
        let spike = Space::spike(50).unwrap();
        let origin = spike.point_spike(1, 0.0).unwrap();
        let seq = endpoint_sequence(&spike, 50).unwrap();
        let probes = ProbeSet::new(&spike, &origin, branch_midpoints(&spike, 10).unwrap(), &cfg()).unwrap();
        let report = weak_convergence_report(&spike, &seq, &origin, &probes, 1e-6, &cfg()).unwrap();
        assert_eq!(report.verdict, Verdict::ConvergedWithin { epsilon: 1e-6, index: 11 });
        // The sequence runs off to infinity in the metric.
        assert_eq!(report.strong_trace[49], 50.0);
        // Probe on branch m sees x_m projected to its own midpoint.
        for (m, trace) in report.traces.iter().enumerate() {
            let m = m + 1;
            assert_eq!(trace[m - 1], m as f64 / 2.0);
            assert!(trace[m..].iter().all(|v| *v == 0.0));
        }
    }

    #[test]
    fn harmonic_sequence_converges_in_the_plane() {
        let r2 = Space::euclidean(2).unwrap();
        let x = e2(0.0, 0.0);
        let seq: Vec<_> = (1..=2000).map(|k| e2(1.0 / k as f64, 0.0)).collect();
        let probes = ProbeSet::new(&r2, &x, vec![e2(1.0, 0.0), e2(0.0, 1.0), e2(-1.0, 1.0)], &cfg()).unwrap();
        let report = weak_convergence_report(&r2, &seq, &x, &probes, 1e-3, &cfg()).unwrap();
        let Verdict::ConvergedWithin { index, .. } = report.verdict else {
            panic!("{:?}", report.verdict);
        };
        assert_eq!(index, 1001);
        assert!(report.strong_trace[index - 1..].iter().all(|d| *d < 1e-3));
    }

    #[test]
    fn alternating_sequence_does_not_converge() {
        let r2 = Space::euclidean(2).unwrap();
        let x = e2(0.0, 0.0);
        let seq: Vec<_> = (1..=20).map(|k| e2(if k % 2 == 1 { 1.0 } else { -1.0 }, 0.0)).collect();
        let probes = ProbeSet::new(&r2, &x, vec![e2(1.0, 0.0)], &cfg()).unwrap();
        let report = weak_convergence_report(&r2, &seq, &x, &probes, 0.5, &cfg()).unwrap();
        assert_eq!(report.verdict, Verdict::NotConvergedWithin { epsilon: 0.5 });
        assert_eq!(report.traces[0][0], 1.0);
        assert_eq!(report.traces[0][1], 0.0);
    }

    #[test]
    fn probe_at_the_candidate_is_rejected() {
        let r2 = Space::euclidean(2).unwrap();
        let x = e2(0.0, 0.0);
        assert!(ProbeSet::new(&r2, &x, vec![x.clone()], &cfg()).is_err());
        assert!(ProbeSet::new(&r2, &x, vec![], &cfg()).is_err());
    }

    #[test]
    fn verdict_band() {
        assert_eq!(verdict_for(&[1.0, 0.5], 0.5, 1e-9), Verdict::Indeterminate { epsilon: 0.5 });
        assert_eq!(verdict_for(&[0.1, 0.2], 0.5, 1e-9), Verdict::ConvergedWithin { epsilon: 0.5, index: 1 });
        assert_eq!(verdict_for(&[0.1, 0.6], 0.5, 1e-9), Verdict::NotConvergedWithin { epsilon: 0.5 });
        // A short tail at the end of the prefix is not enough.
        assert_eq!(verdict_for(&[0.1, 0.9, 0.9, 0.1], 0.5, 1e-9), Verdict::NotConvergedWithin { epsilon: 0.5 });
        assert_eq!(
            verdict_for(&[0.9, 0.9, 0.1, 0.1], 0.5, 1e-9),
            Verdict::ConvergedWithin { epsilon: 0.5, index: 3 }
        );
    }

    #[test]
    fn verdict_serializes_as_tagged_record() {
        let v = Verdict::ConvergedWithin { epsilon: 0.5, index: 3 };
        let json = serde_json::to_string(&v).unwrap();
        assert_eq!(json, r#"{"status":"converged_within","epsilon":0.5,"index":3}"#);
    }
}
