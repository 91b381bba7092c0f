//! Implementations behind the CLI subcommands, importable from tests.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;

use epc_core::bilinear::BilinearConstruction;
use epc_core::error::{Error, Result};
use epc_core::field::{Gf, MERSENNE61};
use epc_core::matrix::Matrix;
use epc_core::scheme::{Mode, Scheme, SchemeParams};
use epc_core::sim::{self, RunReport, SweepRow, DEFAULT_ORACLE_CAP};
use epc_core::verify::{
    exact_mutual_information, privacy_distribution_check, secrecy_rank_certificate, MiConfig,
    SecrecySide,
};

use crate::config::ScenarioConfig;
use crate::matio;

pub const EXHAUSTIVE_SUBSET_CAP: u64 = 10_000;
pub const ENUMERATION_CAP: u128 = 10_000_000;

// ---------------------------------------------------------------------------
// thresholds

#[derive(Debug, Clone, Serialize)]
pub struct ThresholdRow {
    pub p: usize,
    pub m: usize,
    pub n: usize,
    pub construction: String,
    pub rank: usize,
    pub mode: String,
    pub collusion: usize,
    pub batch: usize,
    pub threshold: usize,
    pub baseline: usize,
    pub ratio: f64,
}

/// Smallest k at which the pre-encoded code beats the basic one on the
/// (2^k, 2^k, 2^k) grid: 2 * 7^k - 1 < 8^k + 2^k - 1, exact integers.
#[derive(Debug, Clone, Copy, Serialize, PartialEq, Eq)]
pub struct Crossover {
    pub k: u32,
    pub coded: u128,
    pub uncoded: u128,
}

pub fn crossover() -> Crossover {
    for k in 1..64 {
        let coded = 2 * 7u128.pow(k) - 1;
        let uncoded = 8u128.pow(k) + 2u128.pow(k) - 1;
        if coded < uncoded {
            return Crossover { k, coded, uncoded };
        }
    }
    unreachable!("7^k grows an order slower than 8^k");
}

#[derive(Debug, Clone, Serialize)]
pub struct ThresholdTable {
    pub rows: Vec<ThresholdRow>,
    pub crossover: Crossover,
}

pub fn threshold_table(
    strassen_pow_max: u32,
    t_values: &[usize],
    l_values: &[usize],
) -> ThresholdTable {
    // (description, shape, rank); ranks are arithmetic, the constructions
    // themselves are validated by the constructions suite
    let mut constructions: Vec<(String, (usize, usize, usize), usize)> =
        vec![("naive".into(), (2, 2, 2), 8)];
    for k in 1..=strassen_pow_max {
        let side = 1usize << k;
        constructions.push((format!("strassen_pow {k}"), (side, side, side), 7usize.pow(k)));
    }
    let mut rows = Vec::new();
    for (name, (p, m, n), rank) in &constructions {
        let mut push = |mode: Mode, collusion: usize, batch: usize| {
            let params = SchemeParams {
                mode,
                p: *p,
                m: *m,
                n: *n,
                workers: usize::MAX,
                collusion,
                batch,
                library: if mode.is_private() { 2 } else { 1 },
                systematic: false,
            };
            let threshold = params.recovery_threshold(*rank);
            let baseline = params.baseline_threshold();
            rows.push(ThresholdRow {
                p: *p,
                m: *m,
                n: *n,
                construction: name.clone(),
                rank: *rank,
                mode: mode.label().into(),
                collusion,
                batch,
                threshold,
                baseline,
                ratio: threshold as f64 / baseline as f64,
            });
        };
        for &l in l_values {
            if l == 1 {
                push(Mode::Basic, 0, 1);
            }
            push(Mode::Improved, 0, l);
            for &t in t_values {
                push(Mode::OneSidedSecure, t, l);
                push(Mode::FullySecure, t, l);
            }
            push(Mode::Private, 0, l);
            push(Mode::PrivateSecure, 0, l);
            push(Mode::FullyPrivate, 0, l);
        }
    }
    ThresholdTable { rows, crossover: crossover() }
}

pub fn threshold_csv(table: &ThresholdTable) -> String {
    let mut out = String::from("p,m,n,construction,R,mode,T,L,threshold,baseline,ratio\n");
    for r in &table.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{:.4}\n",
            r.p,
            r.m,
            r.n,
            r.construction,
            r.rank,
            r.mode,
            r.collusion,
            r.batch,
            r.threshold,
            r.baseline,
            r.ratio
        ));
    }
    out.push_str(&format!(
        "# crossover: k={} ({} < {})\n",
        table.crossover.k, table.crossover.coded, table.crossover.uncoded
    ));
    out
}

// ---------------------------------------------------------------------------
// run / sweep

pub fn run_scenario(config: &ScenarioConfig, seed: u64) -> Result<RunReport> {
    let scheme = config.build_scheme()?;
    let inputs = config.build_inputs(&scheme, seed)?;
    let model = config.worker_model(seed);
    sim::simulate(&scheme, &inputs, &model, DEFAULT_ORACLE_CAP)
}

pub fn sweep_scenario(
    config: &ScenarioConfig,
    seed: u64,
    worker_counts: &[usize],
    straggler_counts: &[usize],
    trials: u64,
) -> Result<Vec<SweepRow>> {
    let base = config.build_scheme()?;
    let inputs = config.build_inputs(&base, seed)?;
    sim::sweep(
        |n| {
            let mut cfg = config.clone();
            cfg.workers = n;
            cfg.build_scheme()
        },
        &inputs,
        &config.worker_model.latency,
        worker_counts,
        straggler_counts,
        trials,
        seed,
        DEFAULT_ORACLE_CAP,
    )
}

/// The CSV layout for sweep tables.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("mode,p,m,n,R,T,L,M,N,threshold,baseline,trial,decode_time,ok\n");
    for r in rows {
        let time = if r.decode_time.is_finite() {
            format!("{}", r.decode_time)
        } else {
            "inf".into()
        };
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.mode,
            r.p,
            r.m,
            r.n,
            r.rank,
            r.collusion,
            r.batch,
            r.library,
            r.workers,
            r.threshold,
            r.baseline,
            r.trial,
            time,
            r.ok
        ));
    }
    out
}

// ---------------------------------------------------------------------------
// verify

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Thresholds,
    Secrecy,
    Privacy,
    Constructions,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Scale {
    Tiny,
    Standard,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteItem {
    pub name: String,
    pub pass: bool,
    pub detail: serde_json::Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub scale: String,
    pub seed: u64,
    pub items: Vec<SuiteItem>,
    pub pass: bool,
}

impl SuiteReport {
    fn assemble(suite: &str, scale: Scale, seed: u64, items: Vec<SuiteItem>) -> Self {
        let pass = items.iter().all(|i| i.pass);
        Self {
            suite: suite.into(),
            scale: format!("{scale:?}").to_lowercase(),
            seed,
            items,
            pass,
        }
    }
}

struct AuditCase {
    name: &'static str,
    mode: Mode,
    grid: (usize, usize, usize),
    workers: usize,
    collusion: usize,
    batch: usize,
    library: usize,
    modulus: u64,
    strassen: bool,
}

impl AuditCase {
    fn scheme(&self) -> Result<Scheme> {
        let gf = Gf::new(self.modulus)?;
        let params = SchemeParams {
            mode: self.mode,
            p: self.grid.0,
            m: self.grid.1,
            n: self.grid.2,
            workers: self.workers,
            collusion: self.collusion,
            batch: self.batch,
            library: self.library,
            systematic: false,
        };
        let cons = if !self.mode.needs_construction() {
            None
        } else if self.strassen {
            Some(BilinearConstruction::strassen_222(gf))
        } else {
            Some(BilinearConstruction::naive(self.grid.0, self.grid.1, self.grid.2))
        };
        Scheme::new(gf, params, cons)
    }
}

fn audit_cases(scale: Scale) -> Vec<AuditCase> {
    let strassen = |name, mode, workers, collusion, batch, library| AuditCase {
        name,
        mode,
        grid: (2, 2, 2),
        workers,
        collusion,
        batch,
        library,
        modulus: MERSENNE61,
        strassen: true,
    };
    let tiny = vec![
        strassen("basic 2x2x2", Mode::Basic, 10, 0, 1, 1),
        strassen("improved strassen", Mode::Improved, 14, 0, 1, 1),
        AuditCase {
            name: "private rank-1 q=11",
            mode: Mode::Private,
            grid: (1, 1, 1),
            workers: 3,
            collusion: 0,
            batch: 1,
            library: 2,
            modulus: 11,
            strassen: false,
        },
        AuditCase {
            name: "fully private rank-1 q=13",
            mode: Mode::FullyPrivate,
            grid: (1, 1, 1),
            workers: 5,
            collusion: 0,
            batch: 1,
            library: 2,
            modulus: 13,
            strassen: false,
        },
    ];
    match scale {
        Scale::Tiny => tiny,
        Scale::Standard => {
            let mut cases = tiny;
            cases.extend([
                strassen("one-sided T=2", Mode::OneSidedSecure, 18, 2, 1, 1),
                strassen("fully secure T=2", Mode::FullySecure, 20, 2, 1, 1),
                strassen("private M=3", Mode::Private, 16, 0, 1, 3),
                strassen("private+secure M=3", Mode::PrivateSecure, 17, 0, 1, 3),
                strassen("batch L=2 plain", Mode::Improved, 29, 0, 2, 1),
                strassen("batch L=2 fully secure T=1", Mode::FullySecure, 31, 1, 2, 1),
                strassen("batch L=2 private", Mode::Private, 30, 0, 2, 2),
                strassen("batch L=2 private+secure", Mode::PrivateSecure, 31, 0, 2, 2),
                strassen("batch L=2 fully private", Mode::FullyPrivate, 31, 0, 2, 2),
            ]);
            cases
        }
    }
}

fn threshold_suite(scale: Scale, seed: u64) -> Result<Vec<SuiteItem>> {
    use rand::SeedableRng;
    let mut items = Vec::new();
    for case in audit_cases(scale) {
        let scheme = case.scheme()?;
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
        let inputs = scheme.random_inputs(4, 4, 4, &mut rng);
        let report =
            epc_core::verify::threshold_audit(&scheme, &inputs, EXHAUSTIVE_SUBSET_CAP, seed)?;
        items.push(SuiteItem {
            name: format!("decode audit: {}", case.name),
            pass: report.pass(),
            detail: serde_json::to_value(&report).unwrap(),
        });
    }
    Ok(items)
}

fn secrecy_suite(scale: Scale, seed: u64) -> Result<Vec<SuiteItem>> {
    let gf5 = Gf::new(5).unwrap();
    let mut items = Vec::new();

    let mi = |keys_a: usize, keys_b: usize, fully: bool, point: u64| -> Result<_> {
        exact_mutual_information(&MiConfig {
            gf: gf5,
            data_len: 1,
            keys_a,
            keys_b,
            fully,
            colluder_points: vec![point],
            nodes: vec![0, 1, 2],
            cap: ENUMERATION_CAP,
        })
    };
    for point in [2u64, 3, 4] {
        let one_sided = mi(1, 0, false, point)?;
        items.push(SuiteItem {
            name: format!("exact MI zero, one-sided T=1 q=5, worker at {point}"),
            pass: one_sided.zero,
            detail: serde_json::json!({"states": one_sided.states.to_string()}),
        });
        let fully = mi(1, 1, true, point)?;
        items.push(SuiteItem {
            name: format!("exact MI zero, fully T=1 q=5, worker at {point}"),
            pass: fully.zero,
            detail: serde_json::json!({"states": fully.states.to_string()}),
        });
    }
    let control = mi(0, 0, false, 2)?;
    items.push(SuiteItem {
        name: "control: unkeyed share must leak (MI > 0)".into(),
        pass: !control.zero,
        detail: serde_json::json!({"states": control.states.to_string()}),
    });

    let mut rank_cases: Vec<(&str, Mode, usize, usize)> =
        vec![("rank certificate one-sided T=1", Mode::OneSidedSecure, 16, 1)];
    if scale == Scale::Standard {
        rank_cases.extend([
            ("rank certificate one-sided T=2", Mode::OneSidedSecure, 18, 2),
            ("rank certificate fully T=2 both sides", Mode::FullySecure, 20, 2),
        ]);
    }
    for (name, mode, workers, collusion) in rank_cases {
        let gf = Gf::new(MERSENNE61).unwrap();
        let params = SchemeParams {
            mode,
            p: 2,
            m: 2,
            n: 2,
            workers,
            collusion,
            batch: 1,
            library: 1,
            systematic: false,
        };
        let scheme = Scheme::new(gf, params, Some(BilinearConstruction::strassen_222(gf)))?;
        let side = if mode == Mode::FullySecure { SecrecySide::Both } else { SecrecySide::A };
        let report = secrecy_rank_certificate(&scheme, side, 200_000, seed)?;
        items.push(SuiteItem {
            name: name.into(),
            pass: report.pass(),
            detail: serde_json::to_value(&report).unwrap(),
        });
    }
    Ok(items)
}

struct PrivacyCase {
    name: &'static str,
    domain_size: u64,
    workers: usize,
    library: usize,
    broken: bool,
    expect_pass: bool,
}

fn privacy_suite(scale: Scale, seed: u64) -> Result<Vec<SuiteItem>> {
    let case = |name, domain_size, library, broken, expect_pass| PrivacyCase {
        name,
        domain_size,
        workers: 2,
        library,
        broken,
        expect_pass,
    };
    let mut cases = vec![
        case("query distribution M=2 |Y|=5", 5, 2, false, true),
        case("control: reused decoys must fail (M=2)", 5, 2, true, false),
    ];
    if scale == Scale::Standard {
        cases.push(case("query distribution M=1 (vacuous)", 5, 1, false, true));
        cases.push(case("query distribution M=3 |Y|=4", 4, 3, false, true));
        cases.push(case("control: reused decoys must fail (M=3)", 4, 3, true, false));
    }
    let mut items = Vec::new();
    for c in cases {
        let domain: Vec<u64> = (1..=c.domain_size).collect();
        let report = privacy_distribution_check(
            "private",
            &domain,
            c.workers,
            c.library,
            c.broken,
            ENUMERATION_CAP,
            seed,
        )?;
        items.push(SuiteItem {
            name: c.name.into(),
            pass: report.pass() == c.expect_pass,
            detail: serde_json::to_value(&report).unwrap(),
        });
    }
    Ok(items)
}

fn constructions_suite(scale: Scale, seed: u64) -> Result<Vec<SuiteItem>> {
    use rand::SeedableRng;
    let gf = Gf::new(MERSENNE61).unwrap();
    let mut named: Vec<(String, BilinearConstruction)> = Vec::new();
    let max = if scale == Scale::Tiny { 2 } else { 3 };
    for p in 1..=max {
        for m in 1..=max {
            for n in 1..=max {
                named.push((format!("naive({p},{m},{n})"), BilinearConstruction::naive(p, m, n)));
            }
        }
    }
    let s = BilinearConstruction::strassen_222(gf);
    named.push(("strassen_222".into(), s.clone()));
    named.push((
        "strassen x strassen".into(),
        BilinearConstruction::compose(gf, &s, &s),
    ));
    named.push((
        "strassen x naive(2,2,2)".into(),
        BilinearConstruction::compose(gf, &s, &BilinearConstruction::naive(2, 2, 2)),
    ));

    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
    let items = named
        .into_iter()
        .map(|(name, cons)| {
            let exact = cons.validate_exact(gf);
            let randomized = cons.validate_randomized(gf, &mut rng, 3);
            let mut detail = BTreeMap::new();
            detail.insert("rank", cons.rank().to_string());
            detail.insert("shape", format!("{:?}", cons.shape()));
            if let Err(v) = &exact {
                detail.insert("violation", v.to_string());
            }
            SuiteItem {
                name: format!("brent validation: {name}"),
                pass: exact.is_ok() && randomized,
                detail: serde_json::to_value(&detail).unwrap(),
            }
        })
        .collect();
    Ok(items)
}

pub fn run_suite(suite: Suite, scale: Scale, seed: u64) -> Result<SuiteReport> {
    let items = match suite {
        Suite::Thresholds => threshold_suite(scale, seed)?,
        Suite::Secrecy => secrecy_suite(scale, seed)?,
        Suite::Privacy => privacy_suite(scale, seed)?,
        Suite::Constructions => constructions_suite(scale, seed)?,
    };
    let name = match suite {
        Suite::Thresholds => "thresholds",
        Suite::Secrecy => "secrecy",
        Suite::Privacy => "privacy",
        Suite::Constructions => "constructions",
    };
    Ok(SuiteReport::assemble(name, scale, seed, items))
}

pub fn suite_csv(report: &SuiteReport) -> String {
    let mut out = String::from("suite,scale,item,pass\n");
    for item in &report.items {
        out.push_str(&format!(
            "{},{},{},{}\n",
            report.suite,
            report.scale,
            item.name.replace(',', ";"),
            item.pass
        ));
    }
    out
}

// ---------------------------------------------------------------------------
// matrix io

pub fn matrix_gen(
    rows: usize,
    cols: usize,
    modulus: u64,
    seed: u64,
    out: &Path,
    binary: bool,
) -> Result<()> {
    use rand::SeedableRng;
    let gf = Gf::new(modulus)?;
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
    let m = Matrix::random(gf, rows, cols, &mut rng);
    let io_err = |e: std::io::Error| Error::MalformedHeader(format!("{}: {e}", out.display()));
    if binary {
        matio::write_binary(out, modulus, &m).map_err(io_err)
    } else {
        matio::write_text(out, modulus, &m).map_err(io_err)
    }
}

pub fn matrix_convert(input: &Path, output: &Path, binary: bool) -> Result<()> {
    let (q, m) = matio::read(input)?;
    let io_err = |e: std::io::Error| Error::MalformedHeader(format!("{}: {e}", output.display()));
    if binary {
        matio::write_binary(output, q, &m).map_err(io_err)
    } else {
        matio::write_text(output, q, &m).map_err(io_err)
    }
}

pub fn write_or_print(text: &str, out: Option<&PathBuf>) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crossover_is_k6() {
        let c = crossover();
        assert_eq!(c.k, 6);
        assert_eq!(c.coded, 235_297);
        assert_eq!(c.uncoded, 262_207);
        // k = 5 must not yet cross
        assert!(2 * 7u128.pow(5) > 8u128.pow(5) + 2u128.pow(5) - 1);
    }

    #[test]
    fn threshold_table_has_the_headline_rows() {
        let table = threshold_table(2, &[2], &[1, 2]);
        let find = |mode: &str, construction: &str, l: usize| {
            table
                .rows
                .iter()
                .find(|r| r.mode == mode && r.construction == construction && r.batch == l)
                .unwrap()
        };
        let improved = find("improved", "strassen_pow 1", 1);
        assert_eq!(improved.threshold, 13);
        assert_eq!(improved.baseline, 9);
        let fully = find("fully_secure", "strassen_pow 1", 1);
        assert_eq!(fully.threshold, 17);
        assert_eq!(fully.baseline, 12);
        let batch_private = find("private_secure", "strassen_pow 1", 2);
        assert_eq!(batch_private.threshold, 29);
    }
}
