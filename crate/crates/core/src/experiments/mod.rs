//! Riemann–Roch verification sweeps.
//!
//! Every case is identified by its index in a deterministic enumeration and
//! gets a seed derived from the master seed and that index. Cases may be
//! evaluated on any number of worker threads; the report is assembled in case
//! order, so its bytes depend only on the configuration.

pub mod generate;
pub mod io;
pub mod report;

use std::io::Write;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{Divisor, Multigraph};
use crate::linear_system::linear_system;
use crate::rank::{non_effective_divisors_of_degree, rank_from_system};
use crate::seed::derive_seed;
use crate::toric::{ToricConfig, ToricError, ToricMode, ToricRanker};

pub use generate::{enumerate_treeless_graphs, random_connected_graph, random_effective_divisor, trees};
pub use report::{CaseRecord, ExperimentReport, ReportWriter, Summary, CSV_COLUMNS, REPORT_SCHEMA};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Toric(#[from] ToricError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepMode {
    Exhaustive,
    RandomSweep,
    Single,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

/// Everything that determines a report. Echoed verbatim into it.
/// Everything that determines a report. Echoed verbatim into it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExperimentConfig {
    pub mode: SweepMode,
    pub min_vertices: usize,
    pub max_vertices: usize,
    pub genus_min: i64,
    /// Required by the exhaustive sweep.
    pub genus_max: Option<i64>,
    /// Inclusive degree range; `None` means `[0, g - 1]` for each graph.
    pub degree_range: Option<(i64, i64)>,
    /// Entries of swept divisors lie in `[-window, degree + window]`;
    /// `None` means the genus of each graph.
    pub window: Option<i64>,
    /// Edge multiplicity cap; `None` means `genus_max + 1`, the largest
    /// multiplicity a connected graph of that genus can have.
    pub max_multiplicity: Option<u32>,
    /// Number of graphs drawn by the random sweep.
    pub cases: usize,
    pub toric: bool,
    pub prime: u64,
    pub trials: usize,
    pub toric_mode: ToricMode,
    pub seed: u64,
}

impl ExperimentConfig {
    /// Exhaustive sweep over 2-core graphs: degrees `0..=g-1`, window `g`.
    pub fn exhaustive(max_vertices: usize, genus_max: i64) -> Self {
        ExperimentConfig {
            mode: SweepMode::Exhaustive,
            min_vertices: 1,
            max_vertices,
            genus_min: 0,
            genus_max: Some(genus_max),
            degree_range: None,
            window: None,
            max_multiplicity: None,
            cases: 0,
            toric: true,
            prime: ToricConfig::default().prime(),
            trials: 3,
            toric_mode: ToricMode::BlockProjection,
            seed: 0,
        }
    }

    /// Random simple graphs on 5 to 10 vertices of genus at least 4, one
    /// random effective divisor of degree `g - 1` each.
    pub fn random_sweep(cases: usize) -> Self {
        ExperimentConfig {
            mode: SweepMode::RandomSweep,
            min_vertices: 5,
            max_vertices: 10,
            genus_min: 4,
            genus_max: None,
            max_multiplicity: Some(1),
            cases,
            ..Self::exhaustive(10, 0)
        }
    }

    /// A one-case run; only the toric settings matter.
    pub fn single() -> Self {
        ExperimentConfig { mode: SweepMode::Single, genus_max: None, ..Self::exhaustive(1, 0) }
    }

    pub fn toric_config(&self) -> Result<ToricConfig, ExperimentError> {
        Ok(ToricConfig::default()
            .with_prime(self.prime)?
            .with_trials(self.trials)?
            .with_mode(self.toric_mode)
            .with_seed(self.seed))
    }

    pub fn multiplicity_cap(&self) -> u32 {
        self.max_multiplicity
            .unwrap_or_else(|| self.genus_max.map_or(1, |g| (g.max(0) + 1) as u32))
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        let bad = |m: &str| Err(ExperimentError::Config(m.to_string()));
        if self.min_vertices == 0 || self.min_vertices > self.max_vertices {
            return bad("vertex range is empty");
        }
        if self.genus_max.is_some_and(|hi| self.genus_min > hi) {
            return bad("genus range is empty");
        }
        if let Some((lo, hi)) = self.degree_range {
            if lo > hi {
                return bad("degree range is empty");
            }
        }
        if self.window.is_some_and(|w| w < 0) {
            return bad("window must be nonnegative");
        }
        if self.max_multiplicity == Some(0) {
            return bad("multiplicity cap must be at least 1");
        }
        match self.mode {
            SweepMode::Exhaustive if self.genus_max.is_none() => return bad("the exhaustive sweep needs a maximum genus"),
            SweepMode::RandomSweep => {
                let n = self.max_vertices as i64;
                let max_genus = n * (n - 1) / 2 - n + 1;
                if self.cases > 0 && self.genus_min > max_genus {
                    return bad("no simple graph in the vertex range reaches the minimum genus");
                }
            }
            _ => {}
        }
        self.toric_config()?;
        Ok(())
    }

    fn toric_base(&self) -> Result<Option<ToricConfig>, ExperimentError> {
        self.toric.then(|| self.toric_config()).transpose()
    }
}

/// Evaluates graph and (optionally) toric Riemann–Roch for one divisor.
pub fn evaluate_case(case_index: usize, g: &Multigraph, d: &Divisor, toric: Option<&ToricConfig>) -> CaseRecord {
    let k = g.canonical_divisor();
    let dual = &k - d;
    let genus = g.genus();
    let ls = linear_system(g, d);
    let ls_dual = linear_system(g, &dual);
    let rank = rank_from_system(g, &ls).rank;
    let rank_dual = rank_from_system(g, &ls_dual).rank;
    let residual = rank - rank_dual - d.degree() - 1 + genus;
    let mut record = CaseRecord {
        case_index,
        vertices: g.vertex_count(),
        genus,
        graph: g.to_string(),
        divisor: d.clone(),
        degree: d.degree(),
        rank,
        rank_dual,
        residual,
        toric_rank: None,
        toric_rank_dual: None,
        toric_residual: None,
        pass: residual == 0,
        anomalies: Vec::new(),
    };
    if let Some(base) = toric {
        let cfg = base.clone().with_seed(derive_seed(&[base.seed, case_index as u64]));
        let mut ranker = ToricRanker::new(g, cfg);
        let tr = ranker.toric_rank_of_system(&ls).rank;
        let tr_dual = ranker.toric_rank_of_system(&ls_dual).rank;
        let tres = tr - tr_dual - d.degree() - 1 + genus;
        record.toric_rank = Some(tr);
        record.toric_rank_dual = Some(tr_dual);
        record.toric_residual = Some(tres);
        record.pass &= tres == 0;
        if tr > rank || tr_dual > rank_dual {
            record.anomalies.push("toric rank exceeds graph rank".to_string());
        }
        for a in ranker.anomalies() {
            record.anomalies.push(format!("trial disagreement on {a}"));
        }
    }
    record
}

/// Cases evaluated per parallel batch.
const CHUNK: usize = 2048;

/// Buffers cases, evaluates them a batch at a time on the rayon pool and
/// emits records strictly in case order.
struct Evaluator<'a, E> {
    toric: Option<&'a ToricConfig>,
    pending: Vec<(Arc<Multigraph>, Divisor)>,
    next_index: usize,
    emit: E,
}

impl<'a, E: FnMut(CaseRecord) -> Result<(), ExperimentError>> Evaluator<'a, E> {
    fn new(toric: Option<&'a ToricConfig>, emit: E) -> Self {
        Evaluator { toric, pending: Vec::with_capacity(CHUNK), next_index: 0, emit }
    }

    fn push(&mut self, g: Arc<Multigraph>, d: Divisor) -> Result<(), ExperimentError> {
        self.pending.push((g, d));
        if self.pending.len() == CHUNK {
            self.flush()?;
        }
        Ok(())
    }

    fn flush(&mut self) -> Result<(), ExperimentError> {
        let base = self.next_index;
        let toric = self.toric;
        let records: Vec<CaseRecord> = self
            .pending
            .par_iter()
            .enumerate()
            .map(|(k, (g, d))| evaluate_case(base + k, g, d, toric))
            .collect();
        self.next_index += self.pending.len();
        self.pending.clear();
        records.into_iter().try_for_each(&mut self.emit)
    }
}

/// The 2-core graphs of an exhaustive sweep, in sweep order.
pub fn exhaustive_graphs(config: &ExperimentConfig) -> Vec<Multigraph> {
    let hi = config.genus_max.unwrap_or(config.genus_min);
    enumerate_treeless_graphs(config.max_vertices, config.genus_min..=hi, config.multiplicity_cap())
        .into_iter()
        .filter(|g| g.vertex_count() >= config.min_vertices)
        .collect()
}

fn visit_exhaustive(
    config: &ExperimentConfig,
    mut visit: impl FnMut(Arc<Multigraph>, Divisor) -> Result<(), ExperimentError>,
) -> Result<(), ExperimentError> {
    for g in exhaustive_graphs(config) {
        let g = Arc::new(g);
        let genus = g.genus();
        let (lo, hi) = config.degree_range.unwrap_or((0, genus - 1));
        let window = config.window.unwrap_or(genus);
        for deg in lo..=hi {
            for d in non_effective_divisors_of_degree(g.vertex_count(), deg, window) {
                visit(Arc::clone(&g), d)?;
            }
        }
    }
    Ok(())
}

/// The (graph, divisor) pairs of a random sweep, in case order.
pub fn random_sweep_cases(config: &ExperimentConfig) -> Vec<(Multigraph, Divisor)> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut cases = Vec::with_capacity(config.cases);
    while cases.len() < config.cases {
        let n = rng.gen_range(config.min_vertices..=config.max_vertices);
        let g = random_connected_graph(n, rng.gen());
        let genus = g.genus();
        if genus < config.genus_min || config.genus_max.is_some_and(|hi| genus > hi) {
            continue;
        }
        let d = random_effective_divisor(n, genus - 1, &mut rng);
        cases.push((g, d));
    }
    cases
}

fn visit_cases(
    config: &ExperimentConfig,
    mut visit: impl FnMut(Arc<Multigraph>, Divisor) -> Result<(), ExperimentError>,
) -> Result<(), ExperimentError> {
    match config.mode {
        SweepMode::Exhaustive => visit_exhaustive(config, visit),
        SweepMode::RandomSweep => {
            random_sweep_cases(config).into_iter().try_for_each(|(g, d)| visit(Arc::new(g), d))
        }
        SweepMode::Single => Err(ExperimentError::Config("a single-case run needs a graph and a divisor".into())),
    }
}

/// Runs the sweep described by `config`, handing each record to `emit` in
/// case order.
pub fn run_with(
    config: &ExperimentConfig,
    emit: impl FnMut(CaseRecord) -> Result<(), ExperimentError>,
) -> Result<(), ExperimentError> {
    config.validate()?;
    let toric = config.toric_base()?;
    let mut eval = Evaluator::new(toric.as_ref(), emit);
    visit_cases(config, |g, d| eval.push(g, d))?;
    eval.flush()
}

/// Runs the sweep and collects the report in memory.
pub fn run(config: &ExperimentConfig) -> Result<ExperimentReport, ExperimentError> {
    let started = Instant::now();
    let mut records = Vec::new();
    run_with(config, |r| {
        records.push(r);
        Ok(())
    })?;
    Ok(ExperimentReport::new(config.clone(), records, started.elapsed()))
}

/// Runs the sweep and streams the report to `out`, never holding more than
/// one batch of records.
pub fn run_to_writer<W: Write>(
    config: &ExperimentConfig,
    format: OutputFormat,
    out: W,
) -> Result<Summary, ExperimentError> {
    config.validate()?;
    let mut writer = ReportWriter::new(out, config, format)?;
    run_with(config, |r| writer.record(&r))?;
    Ok(writer.finish()?.0)
}

/// Riemann–Roch for every divisor in range on every 2-core graph in range.
pub fn run_exhaustive(config: &ExperimentConfig) -> Result<ExperimentReport, ExperimentError> {
    run(&ExperimentConfig { mode: SweepMode::Exhaustive, ..config.clone() })
}

/// Random graphs of large genus, one random effective divisor of degree
/// `g - 1` each.
pub fn run_random_sweep(config: &ExperimentConfig) -> Result<ExperimentReport, ExperimentError> {
    run(&ExperimentConfig { mode: SweepMode::RandomSweep, ..config.clone() })
}

/// A one-case report.
pub fn run_single(config: &ExperimentConfig, g: &Multigraph, d: &Divisor) -> Result<ExperimentReport, ExperimentError> {
    let config = ExperimentConfig { mode: SweepMode::Single, ..config.clone() };
    config.validate()?;
    let started = Instant::now();
    let toric = config.toric_base()?;
    let record = evaluate_case(0, g, d, toric.as_ref());
    Ok(ExperimentReport::new(config, vec![record], started.elapsed()))
}
