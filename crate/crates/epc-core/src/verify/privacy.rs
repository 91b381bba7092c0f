//! Request-privacy check by exhaustive enumeration of the master's
//! randomness.
//!
//! For every request D, the exact distribution of each worker's query Q_i is
//! tabulated over all ordered draws of distinct worker points and all decoy
//! assignments. The construction is private iff those M distributions are
//! identical — and the argument in use is stronger: each Q_i must be exactly
//! uniform over domain^M. Both are checked by integer counting.

use std::collections::HashMap;

use itertools::Itertools;

use crate::codes::private::build_queries;
use crate::error::{Error, Result};
use crate::verify::{AuditReport, Certificate};

/// Number of ordered k-arrangements of an n-set, saturating.
fn arrangements(n: usize, k: usize) -> u128 {
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128);
    }
    acc
}

/// Enumerates the master's random choices and certifies that every worker's
/// query distribution is request-independent and uniform. With `broken` set,
/// decoys are maliciously reused from the first worker's point instead of
/// being drawn fresh — a control that must fail.
pub fn privacy_distribution_check(
    mode_label: &str,
    domain: &[u64],
    workers: usize,
    library: usize,
    broken: bool,
    cap: u128,
    seed: u64,
) -> Result<AuditReport> {
    let mut report = AuditReport::new(mode_label, Certificate::Enumeration, seed);
    report.param("domain", domain.len());
    report.param("workers", workers);
    report.param("library", library);
    report.param("broken", broken);
    if domain.len() < workers {
        return Err(Error::YTooSmall { needed: workers, got: domain.len() });
    }
    let z_space = (domain.len() as u128).pow(library.saturating_sub(1) as u32);
    let states = arrangements(domain.len(), workers)
        .saturating_mul(if broken { 1 } else { z_space })
        .saturating_mul(library as u128);
    if states > cap {
        return Err(Error::StateSpaceTooLarge { states, cap });
    }

    // counts[d][worker] : query tuple -> occurrences
    let mut counts: Vec<Vec<HashMap<Vec<u64>, u64>>> =
        vec![vec![HashMap::new(); workers]; library];
    let mut total: u64 = 0;
    for ys in domain.iter().copied().permutations(workers) {
        let decoy_choices: Vec<Vec<u64>> = if broken {
            vec![vec![ys[0]; library.saturating_sub(1)]]
        } else {
            (0..library.saturating_sub(1))
                .map(|_| domain.to_vec())
                .multi_cartesian_product()
                .collect()
        };
        // M = 1 has no decoys: one empty choice
        let decoy_choices = if library == 1 { vec![Vec::new()] } else { decoy_choices };
        for zs in decoy_choices {
            total += 1;
            for (d, request_counts) in counts.iter_mut().enumerate() {
                let mut decoys: Vec<Option<u64>> = Vec::with_capacity(library);
                let mut z_iter = zs.iter();
                for j in 0..library {
                    if j == d {
                        decoys.push(None);
                    } else {
                        decoys.push(Some(*z_iter.next().expect("decoy per non-request")));
                    }
                }
                for (i, q) in build_queries(&ys, &decoys).into_iter().enumerate() {
                    *request_counts[i].entry(q.entries).or_default() += 1;
                }
            }
        }
    }
    report.subsets_tested = total * library as u64;

    // request-independence: all D give the same per-worker distribution
    let (reference, rest) = counts.split_first().expect("library is positive");
    for (d, other) in rest.iter().enumerate() {
        for i in 0..workers {
            if other[i] != reference[i] {
                report.failures.push(format!(
                    "worker {i}: query distribution differs between request 0 and request {}",
                    d + 1
                ));
            }
        }
    }
    // uniformity over domain^M
    let tuples = (domain.len() as u64).pow(library as u32);
    if !total.is_multiple_of(tuples) {
        report
            .failures
            .push("state count is not divisible by the tuple count".into());
    }
    let expect = total / tuples;
    for (d, per_worker) in counts.iter().enumerate() {
        for (i, dist) in per_worker.iter().enumerate() {
            let uniform = dist.len() as u64 == tuples && dist.values().all(|&c| c == expect);
            if !uniform {
                report.failures.push(format!(
                    "request {d}, worker {i}: query distribution is not uniform \
                     ({} of {} tuples seen)",
                    dist.len(),
                    tuples
                ));
            }
        }
    }
    Ok(report)
}
