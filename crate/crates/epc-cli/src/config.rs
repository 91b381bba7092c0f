//! Scenario configuration files: JSON descriptions of a full run.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use epc_core::bilinear::BilinearConstruction;
use epc_core::error::{Error, Result};
use epc_core::field::{Gf, MERSENNE61};
use epc_core::matrix::Matrix;
use epc_core::scheme::{Inputs, Mode, Scheme, SchemeParams};
use epc_core::sim::{LatencyLaw, WorkerModel};

use crate::matio;

fn default_modulus() -> u64 {
    MERSENNE61
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConstructionSpec {
    Naive,
    StrassenPow { k: u32 },
    Compose { parts: Vec<ConstructionSpec> },
    File { path: PathBuf },
}

impl ConstructionSpec {
    pub fn build(&self, gf: Gf, p: usize, m: usize, n: usize) -> Result<BilinearConstruction> {
        match self {
            ConstructionSpec::Naive => Ok(BilinearConstruction::naive(p, m, n)),
            ConstructionSpec::StrassenPow { k } => {
                if *k == 0 {
                    return Err(Error::InvalidConstruction(
                        "strassen_pow requires k >= 1".into(),
                    ));
                }
                Ok(BilinearConstruction::strassen_power(gf, *k))
            }
            ConstructionSpec::Compose { parts } => {
                let built: Vec<BilinearConstruction> = parts
                    .iter()
                    .map(|part| part.build(gf, p, m, n))
                    .collect::<Result<_>>()?;
                built
                    .into_iter()
                    .reduce(|u, v| BilinearConstruction::compose(gf, &u, &v))
                    .ok_or_else(|| {
                        Error::InvalidConstruction("compose requires at least one part".into())
                    })
            }
            ConstructionSpec::File { path } => BilinearConstruction::load(gf, path),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            ConstructionSpec::Naive => "naive".into(),
            ConstructionSpec::StrassenPow { k } => format!("strassen_pow {k}"),
            ConstructionSpec::Compose { parts } => format!(
                "compose[{}]",
                parts.iter().map(|p| p.describe()).collect::<Vec<_>>().join(", ")
            ),
            ConstructionSpec::File { path } => format!("file {}", path.display()),
        }
    }
}

/// Input source: random matrices of the given dimensions, or matrix files
/// arranged as library x batch grids (plain modes use a single-row grid).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InputSpec {
    Random { rows: usize, a_cols: usize, b_cols: usize },
    Files { a: Vec<Vec<PathBuf>>, b: Vec<Vec<PathBuf>> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelSpec {
    pub latency: LatencyLaw,
    #[serde(default)]
    pub stragglers: Vec<usize>,
    #[serde(default)]
    pub slowdowns: Vec<(usize, f64)>,
}

impl Default for ModelSpec {
    fn default() -> Self {
        Self {
            latency: LatencyLaw::Deterministic { t: 1.0 },
            stragglers: Vec::new(),
            slowdowns: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub mode: Mode,
    pub p: usize,
    pub m: usize,
    pub n: usize,
    pub workers: usize,
    #[serde(default)]
    pub collusion: usize,
    #[serde(default = "one")]
    pub batch: usize,
    #[serde(default = "one")]
    pub library: usize,
    #[serde(default)]
    pub request: Option<usize>,
    #[serde(default)]
    pub systematic: bool,
    #[serde(default = "default_modulus")]
    pub modulus: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub construction: Option<ConstructionSpec>,
    pub inputs: InputSpec,
    #[serde(default)]
    pub worker_model: ModelSpec,
}

impl ScenarioConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidScheme(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| {
            Error::InvalidScheme(format!("{} line {}: {}", path.display(), e.line(), e))
        })
    }

    pub fn params(&self) -> SchemeParams {
        SchemeParams {
            mode: self.mode,
            p: self.p,
            m: self.m,
            n: self.n,
            workers: self.workers,
            collusion: self.collusion,
            batch: self.batch,
            library: self.library,
            systematic: self.systematic,
        }
    }

    /// Full validation: builds the scheme (checking the construction, field
    /// size, and worker count against the threshold) and cross-checks the
    /// request index.
    pub fn build_scheme(&self) -> Result<Scheme> {
        let gf = Gf::new(self.modulus)?;
        let params = self.params();
        if params.mode.is_private() {
            match self.request {
                None => {
                    return Err(Error::InvalidScheme(
                        "private modes require a `request` index".into(),
                    ))
                }
                Some(d) if d >= self.library => {
                    return Err(Error::InvalidScheme(format!(
                        "request {d} out of range for library of {}",
                        self.library
                    )))
                }
                _ => {}
            }
        } else if self.request.is_some() {
            return Err(Error::InvalidScheme(format!(
                "mode {} takes no request index",
                self.mode
            )));
        }
        let construction = match (params.mode.needs_construction(), &self.construction) {
            (true, Some(spec)) => Some(spec.build(gf, self.p, self.m, self.n)?),
            (true, None) => {
                return Err(Error::InvalidScheme(format!(
                    "mode {} requires a construction",
                    self.mode
                )))
            }
            (false, _) => None,
        };
        if let Some(c) = &construction {
            if c.shape() != (self.p, self.m, self.n) {
                return Err(Error::DimensionMismatch(format!(
                    "construction shape {:?} does not match ({}, {}, {})",
                    c.shape(),
                    self.p,
                    self.m,
                    self.n
                )));
            }
        }
        Scheme::new(gf, params, construction)
    }

    /// Materializes the inputs: seeded random matrices, or files checked
    /// against the configured modulus and grid.
    pub fn build_inputs(&self, scheme: &Scheme, seed: u64) -> Result<Inputs> {
        match &self.inputs {
            InputSpec::Random { rows, a_cols, b_cols } => {
                use rand::SeedableRng;
                let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
                Ok(scheme.random_inputs(*rows, *a_cols, *b_cols, &mut rng))
            }
            InputSpec::Files { a, b } => {
                let load_grid = |grid: &[Vec<PathBuf>], what: &str| -> Result<Vec<Vec<Matrix>>> {
                    grid.iter()
                        .map(|row| {
                            row.iter()
                                .map(|path| {
                                    let (q, m) = matio::read(path)?;
                                    if q != self.modulus {
                                        return Err(Error::InvalidScheme(format!(
                                            "{what} file {} has modulus {q}, expected {}",
                                            path.display(),
                                            self.modulus
                                        )));
                                    }
                                    Ok(m)
                                })
                                .collect()
                        })
                        .collect()
                };
                let a_grid = load_grid(a, "A")?;
                let b_grid = load_grid(b, "B")?;
                let flat = |mut grid: Vec<Vec<Matrix>>| grid.remove(0);
                match self.mode {
                    Mode::Private | Mode::PrivateSecure => Ok(Inputs::PrivateB {
                        a: flat(a_grid),
                        b_library: b_grid,
                        request: self.request.unwrap(),
                    }),
                    Mode::FullyPrivate => Ok(Inputs::FullyPrivate {
                        a_library: a_grid,
                        b_library: b_grid,
                        request: self.request.unwrap(),
                    }),
                    _ => Ok(Inputs::Plain { a: flat(a_grid), b: flat(b_grid) }),
                }
            }
        }
    }

    pub fn worker_model(&self, seed: u64) -> WorkerModel {
        WorkerModel {
            latency: self.worker_model.latency.clone(),
            stragglers: self.worker_model.stragglers.clone(),
            slowdowns: self.worker_model.slowdowns.clone(),
            seed,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base_config() -> ScenarioConfig {
        serde_json::from_value(serde_json::json!({
            "mode": "improved",
            "p": 2, "m": 2, "n": 2,
            "workers": 14,
            "seed": 7,
            "construction": {"kind": "strassen_pow", "k": 1},
            "inputs": {"kind": "random", "rows": 4, "a_cols": 4, "b_cols": 4}
        }))
        .unwrap()
    }

    #[test]
    fn valid_config_builds() {
        let scheme = base_config().build_scheme().unwrap();
        assert_eq!(scheme.threshold(), 13);
        assert_eq!(scheme.rank(), 7);
    }

    #[test]
    fn too_few_workers_names_the_threshold() {
        let mut cfg = base_config();
        cfg.workers = 12;
        let err = cfg.build_scheme().unwrap_err();
        assert!(err.to_string().contains("13"), "{err}");
    }

    #[test]
    fn private_mode_requires_request() {
        let mut cfg = base_config();
        cfg.mode = Mode::Private;
        cfg.library = 3;
        cfg.workers = 14;
        let err = cfg.build_scheme().unwrap_err();
        assert!(err.to_string().contains("request"), "{err}");
        cfg.request = Some(1);
        assert!(cfg.build_scheme().is_ok());
        cfg.request = Some(3);
        assert!(cfg.build_scheme().is_err());
    }

    #[test]
    fn plain_mode_rejects_request() {
        let mut cfg = base_config();
        cfg.request = Some(0);
        assert!(cfg.build_scheme().is_err());
    }
}
