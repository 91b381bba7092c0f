//! Computational certificates for the toolkit's claims: decode audits over
//! worker subsets, secrecy certificates (rank-based and exact enumeration),
//! and query-distribution checks.
//!
//! Every verifier here has a companion test that constructs a broken variant
//! and watches the certificate fail, so a green report means something.

use std::collections::BTreeMap;

use serde::Serialize;

mod audit;
mod privacy;
mod secrecy;

pub use audit::threshold_audit;
pub use privacy::privacy_distribution_check;
pub use secrecy::{
    exact_mutual_information, secrecy_rank_certificate, MiConfig, MiReport, SecrecySide,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Certificate {
    Decode,
    Rank,
    Enumeration,
}

/// Outcome of one verification run. Passing means the failure list is empty.
#[derive(Debug, Clone, Serialize)]
pub struct AuditReport {
    pub mode: String,
    pub params: BTreeMap<String, String>,
    pub certificate: Certificate,
    pub subsets_tested: u64,
    pub failures: Vec<String>,
    pub seed: u64,
}

impl AuditReport {
    pub fn new(mode: &str, certificate: Certificate, seed: u64) -> Self {
        Self {
            mode: mode.to_string(),
            params: BTreeMap::new(),
            certificate,
            subsets_tested: 0,
            failures: Vec::new(),
            seed,
        }
    }

    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn param(&mut self, key: &str, value: impl ToString) {
        self.params.insert(key.to_string(), value.to_string());
    }
}

/// Binomial coefficient, saturating at u128::MAX.
pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(10, 9), 10);
        assert_eq!(binomial(14, 13), 14);
        assert_eq!(binomial(17, 2), 136);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(4, 7), 0);
    }
}
