//! Scheme descriptors: mode, parameters, recovery thresholds, evaluation-point
//! layouts, and the end-to-end master/worker pipeline.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bilinear::{BilinearConstruction, Side};
use crate::codes::{basic, lagrange, private, CodedShare};
use crate::error::{Error, Result};
use crate::field::Gf;
use crate::matrix::{BlockMatrix, Matrix};

/// Coding mode. Batch size is orthogonal: any non-basic mode runs on
/// length-L batches by replacing the rank R with L*R throughout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Basic,
    Improved,
    OneSidedSecure,
    FullySecure,
    Private,
    PrivateSecure,
    FullyPrivate,
}

impl Mode {
    pub fn needs_construction(self) -> bool {
        self != Mode::Basic
    }

    /// Queries drive the B-side (or both sides) encoding.
    pub fn is_private(self) -> bool {
        matches!(self, Mode::Private | Mode::PrivateSecure | Mode::FullyPrivate)
    }

    /// A-side carries random keys.
    pub fn secures_a(self) -> bool {
        matches!(
            self,
            Mode::OneSidedSecure | Mode::FullySecure | Mode::PrivateSecure
        )
    }

    /// B-side carries random keys.
    pub fn secures_b(self) -> bool {
        self == Mode::FullySecure
    }

    pub fn label(self) -> &'static str {
        match self {
            Mode::Basic => "basic",
            Mode::Improved => "improved",
            Mode::OneSidedSecure => "one_sided_secure",
            Mode::FullySecure => "fully_secure",
            Mode::Private => "private",
            Mode::PrivateSecure => "private_secure",
            Mode::FullyPrivate => "fully_private",
        }
    }

    pub const ALL: [Mode; 7] = [
        Mode::Basic,
        Mode::Improved,
        Mode::OneSidedSecure,
        Mode::FullySecure,
        Mode::Private,
        Mode::PrivateSecure,
        Mode::FullyPrivate,
    ];
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Scheme parameters. `collusion` is the tolerated colluder count T (0 when
/// unused), `batch` the pair count L (1 when unused), `library` the list size
/// M for private modes (1 when unused).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeParams {
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
    pub systematic: bool,
}

fn one() -> usize {
    1
}

impl SchemeParams {
    /// Data-node count K = L * R.
    pub fn data_len(&self, rank: usize) -> usize {
        self.batch * rank
    }

    /// The recovery threshold for a rank-R construction (rank is ignored for
    /// basic mode).
    pub fn recovery_threshold(&self, rank: usize) -> usize {
        let k = self.data_len(rank);
        let t = self.collusion;
        match self.mode {
            Mode::Basic => self.p * self.m * self.n + self.p - 1,
            Mode::Improved => 2 * k - 1,
            Mode::OneSidedSecure => 2 * k + t - 1,
            Mode::FullySecure => 2 * k + 2 * t - 1,
            Mode::Private => 2 * k,
            Mode::PrivateSecure | Mode::FullyPrivate => 2 * k + 1,
        }
    }

    /// Worker count an uncoded cubic design needs for the same task: pmn
    /// products per pair, plus the extra workers each requirement costs.
    pub fn baseline_threshold(&self) -> usize {
        let cubic = self.batch * self.p * self.m * self.n;
        match self.mode {
            Mode::Basic | Mode::Improved => {
                if self.batch == 1 {
                    cubic + self.p - 1
                } else {
                    cubic
                }
            }
            Mode::OneSidedSecure => cubic + self.collusion,
            Mode::FullySecure => cubic + 2 * self.collusion,
            Mode::Private => cubic,
            Mode::PrivateSecure | Mode::FullyPrivate => cubic + 1,
        }
    }

    /// Number of interpolation nodes the mode consumes.
    pub fn node_count(&self, rank: usize) -> usize {
        let k = self.data_len(rank);
        match self.mode {
            Mode::Basic => 0,
            Mode::Improved => k,
            Mode::OneSidedSecure | Mode::FullySecure => k + self.collusion,
            Mode::Private | Mode::PrivateSecure | Mode::FullyPrivate => k + 1,
        }
    }

    /// Pre-encoded vector lengths (L_A, L_B) after key padding. For private
    /// modes L_B counts the implicit hidden-constant position.
    pub fn side_lengths(&self, rank: usize) -> (usize, usize) {
        let k = self.data_len(rank);
        let t = self.collusion;
        match self.mode {
            Mode::Basic => (0, 0),
            Mode::Improved => (k, k),
            Mode::OneSidedSecure => (k + t, k),
            Mode::FullySecure => (k + t, k + t),
            Mode::Private => (k, k + 1),
            Mode::PrivateSecure => (k + 1, k + 1),
            Mode::FullyPrivate => (k + 1, k + 1),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.p == 0 || self.m == 0 || self.n == 0 {
            return Err(Error::InvalidScheme("block grid must be positive".into()));
        }
        if self.batch == 0 || self.library == 0 || self.workers == 0 {
            return Err(Error::InvalidScheme(
                "workers, batch and library must be positive".into(),
            ));
        }
        if self.mode == Mode::Basic && self.batch != 1 {
            return Err(Error::InvalidScheme("basic mode cannot batch".into()));
        }
        let secure = matches!(self.mode, Mode::OneSidedSecure | Mode::FullySecure);
        if self.collusion > 0 && !secure {
            return Err(Error::InvalidScheme(format!(
                "mode {} takes no collusion bound",
                self.mode
            )));
        }
        if self.library > 1 && !self.mode.is_private() {
            return Err(Error::InvalidScheme(format!(
                "mode {} takes no library",
                self.mode
            )));
        }
        if self.mode == Mode::FullyPrivate && self.library < 2 {
            return Err(Error::MTooSmall);
        }
        if self.systematic && self.mode != Mode::Improved {
            return Err(Error::ModeForbidsSystematic);
        }
        Ok(())
    }
}

/// Interpolation nodes, the count of data nodes among them, the worker
/// points for non-private modes, and the query domain for private ones.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvaluationPoints {
    pub nodes: Vec<u64>,
    pub data_len: usize,
    pub worker_points: Vec<u64>,
    pub query_domain: Vec<u64>,
}

impl EvaluationPoints {
    /// Deterministic default layout: nodes are 0, 1, 2, ...; non-private
    /// worker points continue right after the nodes (or coincide with them in
    /// systematic mode); the private query domain is the contiguous range of
    /// 2N elements starting after the data nodes.
    pub fn default_layout(gf: Gf, params: &SchemeParams, rank: usize) -> Result<Self> {
        let node_count = params.node_count(rank) as u64;
        let data_len = params.data_len(rank);
        let n = params.workers as u64;
        let needed = if params.mode.is_private() {
            (data_len as u64 + 2 * n).max(node_count)
        } else if params.systematic {
            node_count.max(n)
        } else {
            node_count + n
        };
        if needed > gf.modulus() {
            return Err(Error::InsufficientFieldSize { modulus: gf.modulus(), needed });
        }
        let nodes: Vec<u64> = (0..node_count).collect();
        let (worker_points, query_domain) = if params.mode.is_private() {
            let start = data_len as u64;
            (Vec::new(), (start..start + 2 * n).collect())
        } else if params.systematic {
            ((0..n).collect(), Vec::new())
        } else {
            ((node_count..node_count + n).collect(), Vec::new())
        };
        Ok(Self { nodes, data_len, worker_points, query_domain })
    }

    pub fn data_nodes(&self) -> &[u64] {
        &self.nodes[..self.data_len]
    }

    pub fn validate(&self, params: &SchemeParams) -> Result<()> {
        for (i, &x) in self.nodes.iter().enumerate() {
            if self.nodes[..i].contains(&x) {
                return Err(Error::DuplicateNode);
            }
        }
        for (i, &y) in self.worker_points.iter().enumerate() {
            if self.worker_points[..i].contains(&y) {
                return Err(Error::DuplicatePoint(y));
            }
        }
        if params.mode.is_private() {
            for &y in &self.query_domain {
                if self.data_nodes().contains(&y) {
                    return Err(Error::PointCollision(y));
                }
            }
        } else if params.mode != Mode::Basic {
            for (i, &y) in self.worker_points.iter().enumerate() {
                let allowed = params.systematic && i < self.data_len && y == self.nodes[i];
                if !allowed && self.data_nodes().contains(&y) {
                    return Err(Error::PointCollision(y));
                }
            }
        }
        Ok(())
    }
}

/// Inputs to one multiplication task. Lists have the batch length L; private
/// variants carry the library and the requested index (zero-based).
#[derive(Debug, Clone)]
pub enum Inputs {
    Plain {
        a: Vec<Matrix>,
        b: Vec<Matrix>,
    },
    PrivateB {
        a: Vec<Matrix>,
        b_library: Vec<Vec<Matrix>>,
        request: usize,
    },
    FullyPrivate {
        a_library: Vec<Vec<Matrix>>,
        b_library: Vec<Vec<Matrix>>,
        request: usize,
    },
}

impl Inputs {
    pub fn request(&self) -> Option<usize> {
        match self {
            Inputs::Plain { .. } => None,
            Inputs::PrivateB { request, .. } | Inputs::FullyPrivate { request, .. } => {
                Some(*request)
            }
        }
    }
}

/// What one worker is asked to do. Tasks for private modes carry the query
/// only: there is deliberately no field for the request or the worker point.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WorkerTask {
    Multiply { a: Matrix, b: Matrix },
    EncodeB { a: Matrix, query: Vec<u64> },
    EncodeBoth { query: Vec<u64> },
}

#[derive(Debug, Clone, Serialize)]
pub struct Assignment {
    pub worker: usize,
    pub task: WorkerTask,
}

/// Public data every worker may read: the nodes and the pre-encoded input
/// libraries for query-driven modes.
#[derive(Debug, Clone, Serialize)]
pub struct WorkerContext {
    pub nodes: Vec<u64>,
    pub a_vectors: Option<Vec<Vec<Matrix>>>,
    pub b_vectors: Option<Vec<Vec<Matrix>>>,
}

/// One returned product.
#[derive(Debug, Clone)]
pub struct WorkerResult {
    pub worker: usize,
    pub value: Matrix,
}

/// Master-side state needed for decoding. Keys are kept for test
/// introspection only; they are never part of any share or task.
#[derive(Debug, Clone)]
pub struct MasterState {
    pub worker_points: Vec<u64>,
    pub request: Option<usize>,
    pub decoys: Vec<Option<u64>>,
    pub a_keys: Vec<Matrix>,
    pub b_keys: Vec<Matrix>,
}

/// A full encoding round: per-worker assignments, the shared worker context,
/// and the master's decoding state.
#[derive(Debug, Clone)]
pub struct Encoded {
    pub assignments: Vec<Assignment>,
    pub context: WorkerContext,
    pub master: MasterState,
}

/// A validated scheme instance: immutable after construction and safe to
/// share across threads.
#[derive(Debug, Clone)]
pub struct Scheme {
    gf: Gf,
    params: SchemeParams,
    construction: Option<BilinearConstruction>,
    points: EvaluationPoints,
    threshold: usize,
}

impl Scheme {
    /// Builds a scheme with the deterministic default point layout. The
    /// construction is Brent-validated here; basic mode takes none.
    pub fn new(
        gf: Gf,
        params: SchemeParams,
        construction: Option<BilinearConstruction>,
    ) -> Result<Self> {
        let rank = Self::check_construction(gf, &params, &construction)?;
        params.validate()?;
        let points = EvaluationPoints::default_layout(gf, &params, rank)?;
        Self::with_points(gf, params, construction, points)
    }

    /// Builds a scheme with explicit points, still fully validated.
    pub fn with_points(
        gf: Gf,
        params: SchemeParams,
        construction: Option<BilinearConstruction>,
        points: EvaluationPoints,
    ) -> Result<Self> {
        let rank = Self::check_construction(gf, &params, &construction)?;
        params.validate()?;
        points.validate(&params)?;
        if points.nodes.len() < params.node_count(rank) {
            return Err(Error::InvalidScheme(format!(
                "{} nodes supplied but {} required",
                points.nodes.len(),
                params.node_count(rank)
            )));
        }
        let threshold = params.recovery_threshold(rank);
        if params.workers < threshold {
            return Err(Error::InvalidScheme(format!(
                "{} workers cannot reach the recovery threshold {threshold}",
                params.workers
            )));
        }
        // All named points must be distinct field elements. For
        // construction-backed modes the documented blanket requirement is
        // q > N + K + T + 1, which covers every node the layouts consume.
        let mut needed = points.nodes.len() as u64
            + if params.mode.is_private() {
                points.query_domain.len() as u64
            } else {
                params.workers as u64
            };
        if params.mode.needs_construction() {
            let blanket =
                (params.workers + params.data_len(rank) + params.collusion + 2) as u64;
            needed = needed.max(blanket);
        }
        if needed > gf.modulus() {
            return Err(Error::InsufficientFieldSize { modulus: gf.modulus(), needed });
        }
        Ok(Self { gf, params, construction, points, threshold })
    }

    /// Bypasses point validation. Exists so adversarial tests can force
    /// worker points onto data nodes and watch certificates fail.
    pub fn with_points_unchecked(
        gf: Gf,
        params: SchemeParams,
        construction: Option<BilinearConstruction>,
        points: EvaluationPoints,
    ) -> Self {
        let threshold =
            params.recovery_threshold(construction.as_ref().map(|c| c.rank()).unwrap_or(1));
        Self { gf, params, construction, points, threshold }
    }

    fn check_construction(
        gf: Gf,
        params: &SchemeParams,
        construction: &Option<BilinearConstruction>,
    ) -> Result<usize> {
        match (params.mode.needs_construction(), construction) {
            (false, None) => Ok(1),
            (false, Some(_)) => Err(Error::InvalidScheme(
                "basic mode takes no construction".into(),
            )),
            (true, None) => Err(Error::InvalidScheme(format!(
                "mode {} requires a bilinear construction",
                params.mode
            ))),
            (true, Some(c)) => {
                if c.shape() != (params.p, params.m, params.n) {
                    return Err(Error::DimensionMismatch(format!(
                        "construction {:?} does not match grid ({}, {}, {})",
                        c.shape(),
                        params.p,
                        params.m,
                        params.n
                    )));
                }
                c.validate_exact(gf)
                    .map_err(|v| Error::InvalidConstruction(v.to_string()))?;
                Ok(c.rank())
            }
        }
    }

    pub fn gf(&self) -> Gf {
        self.gf
    }

    pub fn params(&self) -> &SchemeParams {
        &self.params
    }

    pub fn construction(&self) -> Option<&BilinearConstruction> {
        self.construction.as_ref()
    }

    pub fn points(&self) -> &EvaluationPoints {
        &self.points
    }

    pub fn rank(&self) -> usize {
        self.construction.as_ref().map(|c| c.rank()).unwrap_or(1)
    }

    pub fn threshold(&self) -> usize {
        self.threshold
    }

    pub fn baseline(&self) -> usize {
        self.params.baseline_threshold()
    }

    fn partition_a(&self, m: &Matrix) -> Result<BlockMatrix> {
        BlockMatrix::partition(m, self.params.p, self.params.m)
    }

    fn partition_b(&self, m: &Matrix) -> Result<BlockMatrix> {
        BlockMatrix::partition(m, self.params.p, self.params.n)
    }

    fn check_inputs(&self, inputs: &Inputs) -> Result<()> {
        let l = self.params.batch;
        let m_lib = self.params.library;
        let ok = match (self.params.mode, inputs) {
            (Mode::FullyPrivate, Inputs::FullyPrivate { a_library, b_library, request }) => {
                a_library.len() == m_lib
                    && b_library.len() == m_lib
                    && a_library.iter().all(|entry| entry.len() == l)
                    && b_library.iter().all(|entry| entry.len() == l)
                    && *request < m_lib
            }
            (Mode::Private | Mode::PrivateSecure, Inputs::PrivateB { a, b_library, request }) => {
                a.len() == l
                    && b_library.len() == m_lib
                    && b_library.iter().all(|entry| entry.len() == l)
                    && *request < m_lib
            }
            (mode, Inputs::Plain { a, b }) if !mode.is_private() => {
                a.len() == l && b.len() == l
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidScheme(format!(
                "inputs do not fit mode {} (batch {l}, library {m_lib})",
                self.params.mode
            )))
        }
    }

    fn a_batch_vec(&self, a: &[Matrix]) -> Result<Vec<Matrix>> {
        let grids: Vec<BlockMatrix> =
            a.iter().map(|m| self.partition_a(m)).collect::<Result<_>>()?;
        lagrange::batch_pre_encode(self.gf, self.construction().unwrap(), Side::A, &grids)
    }

    fn b_batch_vec(&self, b: &[Matrix]) -> Result<Vec<Matrix>> {
        let grids: Vec<BlockMatrix> =
            b.iter().map(|m| self.partition_b(m)).collect::<Result<_>>()?;
        lagrange::batch_pre_encode(self.gf, self.construction().unwrap(), Side::B, &grids)
    }

    /// Runs the master-side encoding: pre-encode, pad with keys, evaluate
    /// shares or draw queries.
    pub fn encode<R: Rng + ?Sized>(&self, inputs: &Inputs, rng: &mut R) -> Result<Encoded> {
        self.check_inputs(inputs)?;
        let gf = self.gf;
        let nodes = &self.points.nodes;
        match inputs {
            Inputs::Plain { a, b } if self.params.mode == Mode::Basic => {
                let shares = basic::encode(
                    gf,
                    &self.partition_a(&a[0])?,
                    &self.partition_b(&b[0])?,
                    &self.points.worker_points,
                )?;
                Ok(self.pack_multiply(shares, Vec::new(), Vec::new()))
            }
            Inputs::Plain { a, b } => {
                let t_a = if self.params.mode.secures_a() { self.params.collusion } else { 0 };
                let t_b = if self.params.mode.secures_b() { self.params.collusion } else { 0 };
                let (a_vec, a_keys) = lagrange::pad_with_keys(gf, self.a_batch_vec(a)?, t_a, rng);
                let (b_vec, b_keys) = lagrange::pad_with_keys(gf, self.b_batch_vec(b)?, t_b, rng);
                let shares = lagrange::encode_shares(
                    gf,
                    &a_vec,
                    &b_vec,
                    nodes,
                    self.points.data_len,
                    &self.points.worker_points,
                    self.params.systematic,
                )?;
                Ok(self.pack_multiply(shares, a_keys, b_keys))
            }
            Inputs::PrivateB { a, b_library, request } => {
                let (queries, draw) = private::query_gen(
                    *request,
                    self.params.library,
                    self.params.workers,
                    &self.points.query_domain,
                    rng,
                )?;
                let with_key = self.params.mode == Mode::PrivateSecure;
                let (a_vec, a_keys) =
                    lagrange::pad_with_keys(gf, self.a_batch_vec(a)?, usize::from(with_key), rng);
                let b_vectors: Vec<Vec<Matrix>> = b_library
                    .iter()
                    .map(|entry| self.b_batch_vec(entry))
                    .collect::<Result<_>>()?;
                let assignments = queries
                    .iter()
                    .enumerate()
                    .map(|(w, q)| Assignment {
                        worker: w,
                        task: WorkerTask::EncodeB {
                            a: lagrange::encode_side(gf, &a_vec, nodes, draw.worker_points[w]),
                            query: q.entries.clone(),
                        },
                    })
                    .collect();
                Ok(Encoded {
                    assignments,
                    context: WorkerContext {
                        nodes: nodes.clone(),
                        a_vectors: None,
                        b_vectors: Some(b_vectors),
                    },
                    master: MasterState {
                        worker_points: draw.worker_points,
                        request: Some(*request),
                        decoys: draw.decoys,
                        a_keys,
                        b_keys: Vec::new(),
                    },
                })
            }
            Inputs::FullyPrivate { a_library, b_library, request } => {
                let (queries, draw) = private::query_gen(
                    *request,
                    self.params.library,
                    self.params.workers,
                    &self.points.query_domain,
                    rng,
                )?;
                let a_vectors: Vec<Vec<Matrix>> = a_library
                    .iter()
                    .map(|entry| self.a_batch_vec(entry))
                    .collect::<Result<_>>()?;
                let b_vectors: Vec<Vec<Matrix>> = b_library
                    .iter()
                    .map(|entry| self.b_batch_vec(entry))
                    .collect::<Result<_>>()?;
                let assignments = queries
                    .iter()
                    .enumerate()
                    .map(|(w, q)| Assignment {
                        worker: w,
                        task: WorkerTask::EncodeBoth { query: q.entries.clone() },
                    })
                    .collect();
                Ok(Encoded {
                    assignments,
                    context: WorkerContext {
                        nodes: nodes.clone(),
                        a_vectors: Some(a_vectors),
                        b_vectors: Some(b_vectors),
                    },
                    master: MasterState {
                        worker_points: draw.worker_points,
                        request: Some(*request),
                        decoys: draw.decoys,
                        a_keys: Vec::new(),
                        b_keys: Vec::new(),
                    },
                })
            }
        }
    }

    fn pack_multiply(
        &self,
        shares: Vec<CodedShare>,
        a_keys: Vec<Matrix>,
        b_keys: Vec<Matrix>,
    ) -> Encoded {
        let assignments = shares
            .into_iter()
            .map(|s| Assignment {
                worker: s.worker,
                task: WorkerTask::Multiply { a: s.a, b: s.b },
            })
            .collect();
        Encoded {
            assignments,
            context: WorkerContext {
                nodes: self.points.nodes.clone(),
                a_vectors: None,
                b_vectors: None,
            },
            master: MasterState {
                worker_points: self.points.worker_points.clone(),
                request: None,
                decoys: Vec::new(),
                a_keys,
                b_keys,
            },
        }
    }

    /// The worker-side computation: a pure function of the assignment and the
    /// public context.
    pub fn worker_compute(
        &self,
        context: &WorkerContext,
        assignment: &Assignment,
    ) -> Result<WorkerResult> {
        let gf = self.gf;
        let value = match &assignment.task {
            WorkerTask::Multiply { a, b } => a.t_mul(gf, b)?,
            WorkerTask::EncodeB { a, query } => {
                let lib = context.b_vectors.as_ref().expect("library context");
                let b = private::worker_encode(gf, query, lib, &context.nodes)?;
                a.t_mul(gf, &b)?
            }
            WorkerTask::EncodeBoth { query } => {
                let a_lib = context.a_vectors.as_ref().expect("library context");
                let b_lib = context.b_vectors.as_ref().expect("library context");
                let a = private::worker_encode(gf, query, a_lib, &context.nodes)?;
                let b = private::worker_encode(gf, query, b_lib, &context.nodes)?;
                a.t_mul(gf, &b)?
            }
        };
        Ok(WorkerResult { worker: assignment.worker, value })
    }

    /// Computes every worker's result, in worker order.
    pub fn compute_all(&self, encoded: &Encoded) -> Result<Vec<WorkerResult>> {
        encoded
            .assignments
            .iter()
            .map(|a| self.worker_compute(&encoded.context, a))
            .collect()
    }

    /// Decodes from results in arrival order. Needs the first `threshold`
    /// of them (fewer if the systematic fast path applies).
    pub fn decode(&self, master: &MasterState, results: &[WorkerResult]) -> Result<Vec<Matrix>> {
        let gf = self.gf;
        let pairs: Vec<(u64, Matrix)> = results
            .iter()
            .map(|r| (master.worker_points[r.worker], r.value.clone()))
            .collect();
        match self.params.mode {
            Mode::Basic => {
                let c = basic::decode(gf, self.params.p, self.params.m, self.params.n, &pairs)?;
                Ok(vec![c])
            }
            Mode::Improved | Mode::OneSidedSecure | Mode::FullySecure => {
                let (l_a, l_b) = self.params.side_lengths(self.rank());
                lagrange::decode(
                    gf,
                    self.construction().unwrap(),
                    self.params.batch,
                    l_a,
                    l_b,
                    &self.points.nodes,
                    &pairs,
                    self.params.systematic,
                )
            }
            Mode::Private | Mode::PrivateSecure | Mode::FullyPrivate => {
                let (l_a, _) = self.params.side_lengths(self.rank());
                private::decode(
                    gf,
                    self.construction().unwrap(),
                    self.params.batch,
                    l_a,
                    &self.points.nodes,
                    &pairs,
                    self.params.mode == Mode::FullyPrivate,
                )
            }
        }
    }

    /// Brute-force reference: the direct transpose-product of the selected
    /// pair(s), computed without any coding machinery.
    pub fn oracle(&self, inputs: &Inputs) -> Result<Vec<Matrix>> {
        self.check_inputs(inputs)?;
        let gf = self.gf;
        let pairs: Vec<(&Matrix, &Matrix)> = match inputs {
            Inputs::Plain { a, b } => a.iter().zip(b.iter()).collect(),
            Inputs::PrivateB { a, b_library, request } => {
                a.iter().zip(b_library[*request].iter()).collect()
            }
            Inputs::FullyPrivate { a_library, b_library, request } => a_library[*request]
                .iter()
                .zip(b_library[*request].iter())
                .collect(),
        };
        pairs.into_iter().map(|(a, b)| a.t_mul(gf, b)).collect()
    }

    /// Random inputs of the given dimensions that fit this scheme's mode.
    pub fn random_inputs<R: Rng + ?Sized>(
        &self,
        rows: usize,
        a_cols: usize,
        b_cols: usize,
        rng: &mut R,
    ) -> Inputs {
        let gf = self.gf;
        let l = self.params.batch;
        let m_lib = self.params.library;
        fn mats<R: Rng + ?Sized>(
            gf: Gf,
            count: usize,
            rows: usize,
            cols: usize,
            rng: &mut R,
        ) -> Vec<Matrix> {
            (0..count).map(|_| Matrix::random(gf, rows, cols, rng)).collect()
        }
        match self.params.mode {
            Mode::Private | Mode::PrivateSecure => Inputs::PrivateB {
                a: mats(gf, l, rows, a_cols, rng),
                b_library: (0..m_lib).map(|_| mats(gf, l, rows, b_cols, rng)).collect(),
                request: rng.gen_range(0..m_lib),
            },
            Mode::FullyPrivate => Inputs::FullyPrivate {
                a_library: (0..m_lib).map(|_| mats(gf, l, rows, a_cols, rng)).collect(),
                b_library: (0..m_lib).map(|_| mats(gf, l, rows, b_cols, rng)).collect(),
                request: rng.gen_range(0..m_lib),
            },
            _ => Inputs::Plain {
                a: mats(gf, l, rows, a_cols, rng),
                b: mats(gf, l, rows, b_cols, rng),
            },
        }
    }
}
