use std::fmt;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use hadamard_weak::sampling::{stream_rng, Sampler};
use hadamard_weak::spaces::spike::{branch_midpoints, endpoint_sequence};
use hadamard_weak::{ball_net, Point64, Space64, Tolerances64};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{input, CliError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Project,
    Elementary,
    Weakconv,
    PreimageIdentity,
    ConvexComplement,
    ConeCover,
    PropertySearch,
    BookWitness,
    Fingerprint,
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.to_possible_value().expect("no skipped variants");
        f.write_str(v.get_name())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// The config document as written on disk.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    experiment: Option<Experiment>,
    space: Space64,
    #[serde(default)]
    params: Value,
    seed: Option<u64>,
    output: Option<PathBuf>,
    format: Option<Format>,
    tolerances: Option<Tolerances64>,
}

/// Command-line values that take precedence over the document.
#[derive(Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
}

/// Config after applying flag overrides and defaults. Serialized into every
/// report; `output` is left out so that the report bytes do not depend on
/// where they are written.
#[derive(Debug, Clone, Serialize)]
pub struct ResolvedConfig {
    pub experiment: Experiment,
    pub space: Space64,
    pub params: Value,
    pub seed: Option<u64>,
    pub format: Format,
    pub tolerances: Tolerances64,
    #[serde(skip)]
    pub output: Option<PathBuf>,
}

impl ResolvedConfig {
    pub fn load(path: &Path, experiment: Experiment, overrides: Overrides) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| input(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text, experiment, overrides)
    }

    pub fn parse(text: &str, experiment: Experiment, overrides: Overrides) -> Result<Self, CliError> {
        let file: ConfigFile = serde_json::from_str(text).map_err(|e| input(format!("invalid config: {e}")))?;
        if let Some(declared) = file.experiment {
            if declared != experiment {
                return Err(input(format!(
                    "config is for experiment `{declared}` but `{experiment}` was requested"
                )));
            }
        }
        let tolerances = match file.tolerances {
            Some(t) => Tolerances64::new(t.tol_point, t.tol_opt, t.max_iter)?,
            None => Tolerances64::default(),
        };
        Ok(Self {
            experiment,
            space: file.space,
            params: file.params,
            seed: overrides.seed.or(file.seed),
            format: overrides.format.or(file.format).unwrap_or_default(),
            tolerances,
            output: overrides.output.or(file.output),
        })
    }

    /// Parses `params` into the experiment's record and stores the record,
    /// defaults included, back into the config.
    pub fn params<P: Serialize + DeserializeOwned>(&mut self) -> Result<P, CliError> {
        let raw = match &self.params {
            Value::Null => Value::Object(Default::default()),
            v => v.clone(),
        };
        let parsed: P = serde_json::from_value(raw).map_err(|e| input(format!("invalid params: {e}")))?;
        self.params = serde_json::to_value(&parsed).map_err(|e| input(format!("params: {e}")))?;
        Ok(parsed)
    }

    pub fn require_seed(&self, what: &str) -> Result<u64, CliError> {
        self.seed
            .ok_or_else(|| input(format!("{what} is randomized; pass --seed or set `seed` in the config")))
    }
}

/// Explicit points or a named generator.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Points {
    List(Vec<Point64>),
    Generated(Generator),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "generator", rename_all = "snake_case", deny_unknown_fields)]
pub enum Generator {
    /// Points of the default sampling region of the space.
    Random { count: usize },
    /// Points of a closed ball; the center defaults to the experiment's
    /// natural base point.
    RandomInBall {
        count: usize,
        radius: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        center: Option<Point64>,
    },
    /// `x_n = (n, n)` for `n = 1..=count`.
    SpikeEndpoints { count: u32 },
    /// `(m, m/2)` for `m = 1..=count`.
    SpikeBranchMidpoints { count: u32 },
    /// Net of the closed ball with the given covering radius.
    BallNet {
        radius: f64,
        covering: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        center: Option<Point64>,
    },
}

impl Points {
    /// Materializes and validates the points. Random draws use RNG streams
    /// starting at `stream << 32`, one stream per point.
    pub fn resolve(
        &self,
        what: &str,
        space: &Space64,
        center: Option<&Point64>,
        seed: Option<u64>,
        stream: u64,
    ) -> Result<Vec<Point64>, CliError> {
        let gen = match self {
            Points::List(points) => {
                return points
                    .iter()
                    .enumerate()
                    .map(|(i, p)| space.validate_point(p).map_err(|e| input(format!("{what}[{i}]: {e}"))))
                    .collect();
            }
            Points::Generated(gen) => gen,
        };
        let center_of = |own: &Option<Point64>| {
            own.as_ref()
                .or(center)
                .cloned()
                .ok_or_else(|| input(format!("{what}: generator needs a `center`")))
        };
        let seed_for = || seed.ok_or_else(|| input(format!("{what} is randomized; a seed is required")));
        let base = stream << 32;
        let sampler = Sampler::new(*space);
        Ok(match gen {
            Generator::Random { count } => {
                let seed = seed_for()?;
                (0..*count as u64)
                    .map(|i| sampler.point(&mut stream_rng(seed, base + i)))
                    .collect()
            }
            Generator::RandomInBall { count, radius, center } => {
                let seed = seed_for()?;
                let c = center_of(center)?;
                (0..*count as u64)
                    .map(|i| sampler.point_in_ball(&c, *radius, &mut stream_rng(seed, base + i)))
                    .collect::<Result<_, _>>()?
            }
            Generator::SpikeEndpoints { count } => endpoint_sequence(space, *count)?,
            Generator::SpikeBranchMidpoints { count } => branch_midpoints(space, *count)?,
            Generator::BallNet { radius, covering, center } => ball_net(space, &center_of(center)?, *radius, *covering)?,
        })
    }
}
