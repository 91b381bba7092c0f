//! Recovery-threshold audits: decode from every (or many) threshold-size
//! subsets of worker results and compare against the brute-force product.

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scheme::{Inputs, Scheme, WorkerResult};
use crate::verify::{binomial, AuditReport, Certificate};

/// Minimum sampled subsets when exhaustive enumeration exceeds the cap.
const SAMPLED_SUBSETS: u64 = 200;

/// Decodes from threshold-size subsets — every one of them when their count
/// is at most `exhaustive_cap`, otherwise `SAMPLED_SUBSETS` seeded draws —
/// and records any disagreement with the oracle. Also asserts that one result
/// short of the threshold raises `NotEnoughResults`.
pub fn threshold_audit(
    scheme: &Scheme,
    inputs: &Inputs,
    exhaustive_cap: u64,
    seed: u64,
) -> Result<AuditReport> {
    let mut report = AuditReport::new(scheme.params().mode.label(), Certificate::Decode, seed);
    let n = scheme.params().workers;
    let threshold = scheme.threshold();
    report.param("workers", n);
    report.param("threshold", threshold);
    report.param("rank", scheme.rank());
    report.param("collusion", scheme.params().collusion);
    report.param("batch", scheme.params().batch);
    report.param("library", scheme.params().library);

    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let encoded = scheme.encode(inputs, &mut rng)?;
    let results = scheme.compute_all(&encoded)?;
    let expected = scheme.oracle(inputs)?;

    let subsets: Vec<Vec<usize>> = if binomial(n, threshold) <= exhaustive_cap as u128 {
        (0..n).combinations(threshold).collect()
    } else {
        let mut pool: Vec<usize> = (0..n).collect();
        (0..SAMPLED_SUBSETS)
            .map(|_| {
                pool.shuffle(&mut rng);
                let mut subset = pool[..threshold].to_vec();
                subset.sort_unstable();
                subset
            })
            .collect()
    };
    report.subsets_tested = subsets.len() as u64;

    let failures: Vec<String> = subsets
        .par_iter()
        .filter_map(|subset| {
            let picked: Vec<WorkerResult> =
                subset.iter().map(|&w| results[w].clone()).collect();
            match scheme.decode(&encoded.master, &picked) {
                Ok(decoded) if decoded == expected => None,
                Ok(_) => Some(format!("subset {subset:?} decoded to a wrong product")),
                Err(e) => Some(format!("subset {subset:?} failed to decode: {e}")),
            }
        })
        .collect();
    report.failures.extend(failures);

    // One short of the threshold must be rejected. Systematic layouts can
    // legitimately decode below threshold, so the check only applies without
    // them.
    if !scheme.params().systematic && threshold > 1 {
        let short: Vec<WorkerResult> = results[..threshold - 1].to_vec();
        match scheme.decode(&encoded.master, &short) {
            Err(Error::NotEnoughResults { .. }) => {}
            other => report.failures.push(format!(
                "threshold - 1 results should raise NotEnoughResults, got {other:?}"
            )),
        }
    }
    Ok(report)
}
