//! Toric rank of divisors on generic graph curves.
//!
//! A graph curve is modelled generically: node points and the evaluations of
//! section bases at them are uniform random elements of a large prime field.
//! An effective divisor `d` on the dual graph is then toric-effective when the
//! node-constraint matrix has a kernel vector that is nonzero on every
//! component's block, i.e. there are nonzero sections on every component
//! that agree at all nodes. The verdicts are therefore about a generic curve
//! with the given dual graph, not a specific one.

pub mod field;
pub mod matrix;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Divisor, GraphError, Multigraph};
use crate::linear_system::{linear_system, LinearSystem};
use crate::rank::{rank_search, RankResult};
use crate::seed::{derive_seed, words_of};

pub use field::{is_prime, next_prime, PrimeField, DEFAULT_PRIME_FLOOR};
pub use matrix::{build_constraint_matrix, EntrySampling, NodeConstraintMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ToricError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("divisor {0} is not effective")]
    NotEffective(Divisor),
    #[error("trials must be at least 1")]
    NoTrials,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ToricMode {
    /// Pass iff the kernel is nontrivial and every block is hit by some basis vector.
    BlockProjection,
    /// Pass iff one uniformly random kernel vector has no zero entry.
    RandomVector,
}

impl fmt::Display for ToricMode {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str(match self {
            ToricMode::BlockProjection => "block-projection",
            ToricMode::RandomVector => "random-vector",
        })
    }
}

impl FromStr for ToricMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "block-projection" => Ok(ToricMode::BlockProjection),
            "random-vector" => Ok(ToricMode::RandomVector),
            other => Err(format!("unknown toric mode `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToricConfig {
    field: PrimeField,
    trials: usize,
    pub mode: ToricMode,
    pub seed: u64,
    /// Draw matrix entries from the nonzero elements only.
    pub nonzero_entries: bool,
}

impl Default for ToricConfig {
    fn default() -> Self {
        ToricConfig {
            field: PrimeField::default(),
            trials: 3,
            mode: ToricMode::BlockProjection,
            seed: 0,
            nonzero_entries: false,
        }
    }
}

impl ToricConfig {
    pub fn with_prime(mut self, p: u64) -> Result<Self, ToricError> {
        self.field = PrimeField::new(p)?;
        Ok(self)
    }

    pub fn with_trials(mut self, trials: usize) -> Result<Self, ToricError> {
        if trials == 0 {
            return Err(ToricError::NoTrials);
        }
        self.trials = trials;
        Ok(self)
    }

    pub fn with_mode(mut self, mode: ToricMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn prime(&self) -> u64 {
        self.field.modulus()
    }

    pub fn trials(&self) -> usize {
        self.trials
    }

    fn sampling(&self) -> EntrySampling {
        EntrySampling { field: self.field, nonzero: self.nonzero_entries }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ToricOutcome {
    /// Majority verdict over all trials.
    pub passed: bool,
    /// Kernel dimension of the reported sample.
    pub kernel_dim: usize,
    /// Whether some kernel basis vector is nonzero on each vertex block.
    pub per_block_support: Vec<bool>,
    pub mode: ToricMode,
    /// Seed of the reported sample, i.e. the first trial agreeing with the majority.
    pub sample_seed: u64,
    pub trials: usize,
    pub trial_passes: usize,
}

impl ToricOutcome {
    /// The trials did not all agree.
    pub fn disagreement(&self) -> bool {
        self.trial_passes != 0 && self.trial_passes != self.trials
    }
}

struct Sample {
    passed: bool,
    kernel_dim: usize,
    support: Vec<bool>,
    seed: u64,
}

fn run_sample(g: &Multigraph, d: &Divisor, config: &ToricConfig, seed: u64) -> Result<Sample, ToricError> {
    let m = build_constraint_matrix(g, d, seed, config.sampling())?;
    let basis = m.kernel_basis();
    let support: Vec<bool> = (0..m.block_count())
        .map(|b| basis.iter().any(|v| m.block_columns(b).any(|c| v[c] != 0)))
        .collect();
    let passed = match config.mode {
        ToricMode::BlockProjection => !basis.is_empty() && support.iter().all(|&s| s),
        ToricMode::RandomVector => {
            let f = m.field();
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(&[seed, u64::MAX]));
            let mut v = vec![0u64; m.cols()];
            for b in &basis {
                let coeff = f.random(&mut rng, false);
                for (x, &y) in v.iter_mut().zip(b) {
                    *x = f.add(*x, f.mul(coeff, y));
                }
            }
            v.iter().all(|&x| x != 0)
        }
    };
    Ok(Sample { passed, kernel_dim: basis.len(), support, seed })
}

/// Decides whether the effective divisor `d` admits nonzero compatible
/// sections on a generic graph curve with dual graph `g`.
///
/// The test is repeated on `config.trials()` independent matrix samples and
/// the majority verdict is returned; ties count as failure. Sample seeds are
/// derived from the master seed, `d` and the trial index.
pub fn toric_effective_test(g: &Multigraph, d: &Divisor, config: &ToricConfig) -> Result<ToricOutcome, ToricError> {
    g.check_divisor(d)?;
    if !d.is_effective() {
        return Err(ToricError::NotEffective(d.clone()));
    }
    let mut samples = Vec::with_capacity(config.trials);
    for t in 0..config.trials {
        let words: Vec<u64> = [config.seed, t as u64].into_iter().chain(words_of(d.coeffs())).collect();
        samples.push(run_sample(g, d, config, derive_seed(&words))?);
    }
    let trial_passes = samples.iter().filter(|s| s.passed).count();
    let passed = 2 * trial_passes > config.trials;
    let rep = samples.into_iter().find(|s| s.passed == passed).expect("majority sample exists");
    Ok(ToricOutcome {
        passed,
        kernel_dim: rep.kernel_dim,
        per_block_support: rep.support,
        mode: config.mode,
        sample_seed: rep.seed,
        trials: config.trials,
        trial_passes,
    })
}

/// Memoizing toric rank evaluator for one graph.
///
/// Verdicts are cached per tested effective divisor, so one divisor always
/// gets the same verdict within an evaluator. Effective divisors whose trials
/// disagreed are collected as anomalies.
pub struct ToricRanker<'g> {
    graph: &'g Multigraph,
    config: ToricConfig,
    verdicts: HashMap<Divisor, bool>,
    anomalies: Vec<Divisor>,
}

impl<'g> ToricRanker<'g> {
    pub fn new(graph: &'g Multigraph, config: ToricConfig) -> Self {
        ToricRanker { graph, config, verdicts: HashMap::new(), anomalies: Vec::new() }
    }

    pub fn config(&self) -> &ToricConfig {
        &self.config
    }

    /// Cached toric effectivity of an effective divisor.
    pub fn passes(&mut self, d: &Divisor) -> bool {
        if let Some(&v) = self.verdicts.get(d) {
            return v;
        }
        let outcome = toric_effective_test(self.graph, d, &self.config).expect("effective divisor of the right length");
        if outcome.disagreement() {
            self.anomalies.push(d.clone());
        }
        self.verdicts.insert(d.clone(), outcome.passed);
        outcome.passed
    }

    /// Toric rank: the graph rank loop where `D - E` only counts as effective
    /// when one of its effective representatives passes the toric test.
    pub fn toric_rank(&mut self, d: &Divisor) -> RankResult {
        assert_eq!(d.len(), self.graph.vertex_count(), "divisor length must match vertex count");
        self.toric_rank_of_system(&linear_system(self.graph, d))
    }

    /// Toric rank of the base divisor of an already computed `|D|`.
    pub fn toric_rank_of_system(&mut self, ls: &LinearSystem) -> RankResult {
        rank_search(self.graph.vertex_count(), ls.base().degree(), |e| {
            ls.iter().any(|m| m.dominates(e) && self.passes(&(m - e)))
        })
    }

    /// `r_tor(D) - r_tor(K - D) - deg(D) - 1 + g`.
    pub fn rr_residual(&mut self, d: &Divisor) -> i64 {
        let k = self.graph.canonical_divisor();
        let r = self.toric_rank(d).rank;
        let rk = self.toric_rank(&(&k - d)).rank;
        r - rk - d.degree() - 1 + self.graph.genus()
    }

    /// Effective divisors whose trials did not agree.
    pub fn anomalies(&self) -> &[Divisor] {
        &self.anomalies
    }
}

pub fn toric_rank(g: &Multigraph, d: &Divisor, config: &ToricConfig) -> RankResult {
    ToricRanker::new(g, config.clone()).toric_rank(d)
}

pub fn verify_rr_toric(g: &Multigraph, d: &Divisor, config: &ToricConfig) -> bool {
    ToricRanker::new(g, config.clone()).rr_residual(d) == 0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_path_degree_zero_passes() {
        // Two node conditions on three one-dimensional blocks.
        let g = Multigraph::path(3);
        let out = toric_effective_test(&g, &Divisor::zero(3), &ToricConfig::default()).unwrap();
        assert!(out.passed);
        assert_eq!(out.kernel_dim, 1);
        assert_eq!(out.per_block_support, vec![true; 3]);
        assert!(!out.disagreement());
    }

    #[test]
    fn cycle_degree_zero_fails() {
        // n conditions on n unknowns: the generic matrix is invertible.
        let g = Multigraph::cycle(5);
        let out = toric_effective_test(&g, &Divisor::zero(5), &ToricConfig::default()).unwrap();
        assert!(!out.passed);
        assert_eq!(out.kernel_dim, 0);
    }

    #[test]
    fn cycle_degree_one_passes() {
        let g = Multigraph::cycle(5);
        let out = toric_effective_test(&g, &Divisor::unit(5, 2), &ToricConfig::default()).unwrap();
        assert!(out.passed);
        assert_eq!(out.kernel_dim, 1);
    }

    #[test]
    fn modes_agree() {
        let g = Multigraph::complete(4);
        let block = ToricConfig::default().with_seed(9);
        let random = block.clone().with_mode(ToricMode::RandomVector);
        for d in [vec![1, 1, 1, 0], vec![3, 0, 0, 0], vec![1, 1, 0, 0], vec![2, 1, 1, 1]] {
            let d = Divisor::new(d);
            let a = toric_effective_test(&g, &d, &block).unwrap();
            let b = toric_effective_test(&g, &d, &random).unwrap();
            assert_eq!(a.passed, b.passed, "{d}");
        }
    }

    #[test]
    fn outcome_is_deterministic() {
        let g = Multigraph::complete(4);
        let d = Divisor::new(vec![1, 0, 2, 0]);
        let cfg = ToricConfig::default().with_seed(77);
        assert_eq!(toric_effective_test(&g, &d, &cfg).unwrap(), toric_effective_test(&g, &d, &cfg).unwrap());
    }

    #[test]
    fn config_validation() {
        assert_eq!(ToricConfig::default().with_prime(15), Err(ToricError::NotPrime(15)));
        assert_eq!(ToricConfig::default().with_trials(0), Err(ToricError::NoTrials));
        assert_eq!("random-vector".parse::<ToricMode>(), Ok(ToricMode::RandomVector));
        assert!("nope".parse::<ToricMode>().is_err());
    }

    #[test]
    fn rejects_non_effective() {
        let g = Multigraph::path(3);
        assert!(matches!(
            toric_effective_test(&g, &Divisor::new(vec![1, -1, 0]), &ToricConfig::default()),
            Err(ToricError::NotEffective(_))
        ));
    }

    #[test]
    fn tree_and_cycle_ranks() {
        let cfg = ToricConfig::default();
        let p3 = Multigraph::path(3);
        assert_eq!(toric_rank(&p3, &Divisor::new(vec![1, 0, -1]), &cfg).rank, 0);
        assert_eq!(toric_rank(&p3, &Divisor::new(vec![1, 1, 0]), &cfg).rank, 2);
        let c4 = Multigraph::cycle(4);
        assert_eq!(toric_rank(&c4, &Divisor::unit(4, 1), &cfg).rank, 0);
        assert_eq!(toric_rank(&c4, &Divisor::zero(4), &cfg).rank, -1);
        assert!(verify_rr_toric(&c4, &Divisor::zero(4), &cfg));
        assert!(verify_rr_toric(&c4, &Divisor::new(vec![2, 0, -1, 1]), &cfg));
        assert_eq!(toric_rank(&c4, &Divisor::new(vec![-1, 0, 0, 0]), &cfg).rank, -1);
    }
}
