use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::checks::{check_property_n, check_q4};
use super::Witness;
use crate::error::{invalid, Result};
use crate::geometry::{Space, ToleranceConfig};
use crate::sampling::{stream_rng, Sampler};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchProperty {
    N,
    Q4,
    Q4bar,
}

/// Points probed along `[x, y]` per draw.
const M_COUNT: usize = 9;

/// Tests `budget` random configurations for a violation of `property`.
///
/// Draw `i` uses its own RNG stream of `seed`, so the result does not depend
/// on scheduling; witnesses come back in draw order, each carrying `seed` and
/// its draw index, and only those that re-verify are kept.
pub fn search_counterexamples<T: Scalar>(
    space: &Space<T>,
    property: SearchProperty,
    budget: usize,
    seed: u64,
    cfg: &ToleranceConfig<T>,
) -> Result<Vec<Witness<T>>> {
    if budget == 0 {
        return Err(invalid("search budget must be at least 1"));
    }
    let sampler = Sampler::new(*space);
    let found = (0..budget)
        .into_par_iter()
        .map(|i| -> Result<Option<Witness<T>>> {
            let mut rng = stream_rng(seed, i as u64);
            let witness = match property {
                SearchProperty::N => {
                    let (a, b) = (sampler.point(&mut rng), sampler.point(&mut rng));
                    let (x, y) = (sampler.point(&mut rng), sampler.point(&mut rng));
                    let g = space.geodesic(&a, &b)?;
                    if g.length() <= cfg.tol_point {
                        return Ok(None);
                    }
                    check_property_n(space, &g, &x, &y, M_COUNT, cfg)?
                }
                SearchProperty::Q4 | SearchProperty::Q4bar => {
                    let [x, y, p, q] = [(); 4].map(|_| sampler.point(&mut rng));
                    let strict = property == SearchProperty::Q4;
                    check_q4(space, &x, &y, &p, &q, M_COUNT, strict, cfg)?.witness()
                }
            };
            let Some(mut w) = witness else {
                return Ok(None);
            };
            w.seed = seed;
            w.values.insert("draw".into(), T::of_usize(i));
            Ok(Some(w))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    for w in found.into_iter().flatten() {
        if w.reverify(cfg)? {
            out.push(w);
        }
    }
    Ok(out)
}
