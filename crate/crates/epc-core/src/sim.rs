//! In-process master/worker simulation: draw latencies, collect the fastest
//! results until the threshold is met, decode, and report.
//!
//! Time is simulated, never wall-clock; worker compute cost is folded into the
//! latency law. Completion order is a total order determined by the drawn
//! latencies with ties broken by worker index, so a seed fixes the entire run.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Exp};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scheme::{Inputs, Scheme, WorkerResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LatencyLaw {
    Deterministic { t: f64 },
    ShiftedExponential { shift: f64, rate: f64 },
    PerWorker { table: Vec<f64> },
}

impl LatencyLaw {
    fn sample(&self, worker: usize, rng: &mut ChaCha12Rng) -> f64 {
        match self {
            LatencyLaw::Deterministic { t } => *t,
            LatencyLaw::ShiftedExponential { shift, rate } => {
                shift + Exp::new(*rate).expect("positive rate").sample(rng)
            }
            LatencyLaw::PerWorker { table } => table[worker % table.len()],
        }
    }
}

/// Latency model plus straggler injection: listed workers either never finish
/// or run slower by a factor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorkerModel {
    pub latency: LatencyLaw,
    #[serde(default)]
    pub stragglers: Vec<usize>,
    #[serde(default)]
    pub slowdowns: Vec<(usize, f64)>,
    pub seed: u64,
}

impl WorkerModel {
    pub fn deterministic(t: f64, seed: u64) -> Self {
        Self {
            latency: LatencyLaw::Deterministic { t },
            stragglers: Vec::new(),
            slowdowns: Vec::new(),
            seed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecodeOutcome {
    Verified,
    Unverified,
    Mismatch,
}

/// Everything one simulated run produced. Serializes to JSON byte-identically
/// for a fixed seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub mode: String,
    pub p: usize,
    pub m: usize,
    pub n: usize,
    pub rank: usize,
    pub collusion: usize,
    pub batch: usize,
    pub library: usize,
    pub workers: usize,
    pub threshold: usize,
    pub baseline_threshold: usize,
    pub seed: u64,
    pub completion_order: Vec<(usize, f64)>,
    pub decode_time: f64,
    pub used_workers: Vec<usize>,
    pub results_consumed: usize,
    pub decoded_ok: bool,
    pub verification: DecodeOutcome,
}

/// Matrices with at most this many output entries are checked against the
/// brute-force product; larger runs report `Unverified`.
pub const DEFAULT_ORACLE_CAP: usize = 1 << 20;

/// Runs one encode/compute/decode round under the latency model. Only the
/// first `threshold` completions are ever computed or read.
pub fn simulate(
    scheme: &Scheme,
    inputs: &Inputs,
    model: &WorkerModel,
    oracle_cap: usize,
) -> Result<RunReport> {
    let params = *scheme.params();
    let n = params.workers;
    let threshold = scheme.threshold();
    let mut rng = ChaCha12Rng::seed_from_u64(model.seed);

    // Latency per worker, drawn in worker order to keep the stream stable.
    let mut finish: Vec<Option<f64>> = (0..n)
        .map(|w| Some(model.latency.sample(w, &mut rng)))
        .collect();
    for &(w, factor) in &model.slowdowns {
        if let Some(t) = finish.get_mut(w).and_then(|t| t.as_mut()) {
            *t *= factor;
        }
    }
    for &w in &model.stragglers {
        if let Some(slot) = finish.get_mut(w) {
            *slot = None;
        }
    }

    let mut order: Vec<(usize, f64)> = finish
        .iter()
        .enumerate()
        .filter_map(|(w, t)| t.map(|t| (w, t)))
        .collect();
    order.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap().then(a.0.cmp(&b.0)));
    if order.len() < threshold {
        return Err(Error::Incomplete { finite: order.len(), threshold });
    }
    order.truncate(threshold);
    let decode_time = order[threshold - 1].1;
    let used_workers: Vec<usize> = order.iter().map(|&(w, _)| w).collect();

    let encoded = scheme.encode(inputs, &mut rng)?;
    let results: Vec<WorkerResult> = used_workers
        .par_iter()
        .map(|&w| scheme.worker_compute(&encoded.context, &encoded.assignments[w]))
        .collect::<Result<_>>()?;
    let decoded = scheme.decode(&encoded.master, &results)?;

    let output_entries: usize = decoded.iter().map(|m| m.rows() * m.cols()).sum();
    let verification = if output_entries <= oracle_cap {
        if decoded == scheme.oracle(inputs)? {
            DecodeOutcome::Verified
        } else {
            DecodeOutcome::Mismatch
        }
    } else {
        DecodeOutcome::Unverified
    };

    Ok(RunReport {
        mode: params.mode.label().to_string(),
        p: params.p,
        m: params.m,
        n: params.n,
        rank: scheme.rank(),
        collusion: params.collusion,
        batch: params.batch,
        library: params.library,
        workers: n,
        threshold,
        baseline_threshold: scheme.baseline(),
        seed: model.seed,
        completion_order: order,
        decode_time,
        used_workers,
        results_consumed: results.len(),
        decoded_ok: verification != DecodeOutcome::Mismatch,
        verification,
    })
}

/// One sweep observation. `decode_time` is infinite when the run could not
/// complete.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub mode: String,
    pub p: usize,
    pub m: usize,
    pub n: usize,
    pub rank: usize,
    pub collusion: usize,
    pub batch: usize,
    pub library: usize,
    pub workers: usize,
    pub threshold: usize,
    pub baseline: usize,
    pub trial: u64,
    pub decode_time: f64,
    pub ok: bool,
}

fn mix(seed: u64, a: u64, b: u64, c: u64) -> u64 {
    // splitmix64 over the packed coordinates
    let mut z = seed
        .wrapping_add(a.wrapping_mul(0x9E3779B97F4A7C15))
        .wrapping_add(b.wrapping_mul(0xBF58476D1CE4E5B9))
        .wrapping_add(c.wrapping_mul(0x94D049BB133111EB));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Repeats `simulate` over worker counts and straggler counts. Stragglers are
/// the lowest-indexed workers, forced infinite. Identical seeds give
/// identical tables.
#[allow(clippy::too_many_arguments)]
pub fn sweep(
    scheme_for: impl Fn(usize) -> Result<Scheme>,
    inputs: &Inputs,
    latency: &LatencyLaw,
    worker_counts: &[usize],
    straggler_counts: &[usize],
    trials: u64,
    seed: u64,
    oracle_cap: usize,
) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::new();
    for &n in worker_counts {
        let scheme = scheme_for(n)?;
        for &s in straggler_counts {
            for trial in 0..trials {
                let model = WorkerModel {
                    latency: latency.clone(),
                    stragglers: (0..s).collect(),
                    slowdowns: Vec::new(),
                    seed: mix(seed, n as u64, s as u64, trial),
                };
                let row = match simulate(&scheme, inputs, &model, oracle_cap) {
                    Ok(report) => SweepRow {
                        mode: report.mode,
                        p: report.p,
                        m: report.m,
                        n: report.n,
                        rank: report.rank,
                        collusion: report.collusion,
                        batch: report.batch,
                        library: report.library,
                        workers: n,
                        threshold: report.threshold,
                        baseline: report.baseline_threshold,
                        trial,
                        decode_time: report.decode_time,
                        ok: report.decoded_ok,
                    },
                    Err(Error::Incomplete { threshold, .. }) => {
                        let params = scheme.params();
                        SweepRow {
                            mode: params.mode.label().to_string(),
                            p: params.p,
                            m: params.m,
                            n: params.n,
                            rank: scheme.rank(),
                            collusion: params.collusion,
                            batch: params.batch,
                            library: params.library,
                            workers: n,
                            threshold,
                            baseline: scheme.baseline(),
                            trial,
                            decode_time: f64::INFINITY,
                            ok: false,
                        }
                    }
                    Err(other) => return Err(other),
                };
                rows.push(row);
            }
        }
    }
    Ok(rows)
}
