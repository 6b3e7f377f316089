//! Projection properties (N), (Q4), (Q̄4), their counterexample search, the
//! book-of-triangles witnesses and projection fingerprints.
//!
//! Every violation is packaged as a [`Witness`] that stores the points it was
//! built from and can be re-checked from those points alone.

mod book;
mod checks;
mod fingerprint;
mod search;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use book::{book_property_n_witness, book_witness_tw_ne_tg};
pub use checks::{check_property_n, check_q4, Q4Outcome};
pub use fingerprint::{check_fingerprint_separation, fingerprint, Fingerprint, SeparationRecord};
pub use search::{search_counterexamples, SearchProperty};

use crate::error::{invalid, Result};
use crate::geometry::{Point, Space, ToleranceConfig};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    PropertyNViolation,
    Q4Violation,
    TwNeTgWitness,
    SeparationRecord,
}

/// Verified violation or certificate with its named points and values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Witness<T> {
    pub kind: WitnessKind,
    pub space: Space<T>,
    pub points: BTreeMap<String, Point<T>>,
    pub values: BTreeMap<String, T>,
    pub seed: u64,
}

impl<T: Scalar> Witness<T> {
    pub(crate) fn new(kind: WitnessKind, space: Space<T>) -> Self {
        Self {
            kind,
            space,
            points: BTreeMap::new(),
            values: BTreeMap::new(),
            seed: 0,
        }
    }

    pub(crate) fn point(mut self, name: impl Into<String>, p: Point<T>) -> Self {
        self.points.insert(name.into(), p);
        self
    }

    pub(crate) fn value(mut self, name: impl Into<String>, v: T) -> Self {
        self.values.insert(name.into(), v);
        self
    }

    pub fn get_point(&self, name: &str) -> Result<&Point<T>> {
        self.points
            .get(name)
            .ok_or_else(|| invalid(format!("witness has no point `{name}`")))
    }

    pub fn get_value(&self, name: &str) -> Result<T> {
        self.values
            .get(name)
            .copied()
            .ok_or_else(|| invalid(format!("witness has no value `{name}`")))
    }

    /// Recomputes the witness from its stored points. True when the claimed
    /// violation or certificate still holds and every recomputed value matches
    /// the stored one within `tol_point`. Extra stored values (such as the
    /// search draw index) are not checked.
    pub fn reverify(&self, cfg: &ToleranceConfig<T>) -> Result<bool> {
        let fresh = match self.kind {
            WitnessKind::PropertyNViolation => checks::recheck_property_n(self, cfg)?,
            WitnessKind::Q4Violation => checks::recheck_q4(self, cfg)?,
            WitnessKind::TwNeTgWitness => book::recheck_tw_ne_tg(self, cfg)?,
            WitnessKind::SeparationRecord => fingerprint::recheck_separation(self, cfg)?,
        };
        let Some(fresh) = fresh else {
            return Ok(false);
        };
        Ok(fresh.values.iter().all(|(k, v)| {
            self.values
                .get(k)
                .is_some_and(|w| (*v - *w).abs() <= cfg.tol_point)
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn witness_round_trips_through_json() {
        let space = Space::<f64>::book(4, 1.0).unwrap();
        let w = book_property_n_witness(&space, &ToleranceConfig::default()).unwrap();
        let json = serde_json::to_string(&w).unwrap();
        let back: Witness<f64> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, w);
        assert!(back.reverify(&ToleranceConfig::default()).unwrap());
    }

    #[test]
    fn tampered_witness_fails_reverification() {
        let space = Space::<f64>::book(4, 1.0).unwrap();
        let cfg = ToleranceConfig::default();
        let mut w = book_property_n_witness(&space, &cfg).unwrap();
        *w.values.get_mut("t_m").unwrap() += 0.01;
        assert!(!w.reverify(&cfg).unwrap());
        let mut w = book_property_n_witness(&space, &cfg).unwrap();
        w.points.insert("m".into(), space.point_book(1, 0.9, 0.05).unwrap());
        assert!(!w.reverify(&cfg).unwrap());
    }
}
