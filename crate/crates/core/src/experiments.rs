//! Random lattice-based expansions of small chains.
//!
//! Each sample is the bounded chain with `meet`, `join`, `zero`, `one` plus
//! operations with uniformly random tables. Only lattice-based expansions are
//! sampled: outside them no majority term is guaranteed and the
//! preservation tests used here would be unsound.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{FiniteAlgebra, Operation};
use crate::catalog::bounded_chain;
use crate::error::{Error, Result};
use crate::lattice::detect_lattice;
use crate::primality::{is_semi_primal_with, Route, SquareData};

/// Two-sided 95% normal quantile.
pub const Z_95: f64 = 1.959963984540054;

const CHUNK: usize = 64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleConfig {
    pub chain_size: usize,
    pub extra_ops: Vec<usize>,
    pub samples: usize,
    pub seed: u64,
    /// Run every route and count disagreements instead of the T-route alone.
    pub cross_check: bool,
    #[serde(skip)]
    pub budget: Option<Duration>,
}

impl SampleConfig {
    pub fn new(chain_size: usize, extra_ops: Vec<usize>, samples: usize, seed: u64) -> Self {
        SampleConfig {
            chain_size,
            extra_ops,
            samples,
            seed,
            cross_check: false,
            budget: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleReport {
    pub base_chain_size: usize,
    pub extra_ops: Vec<usize>,
    pub sample_count: usize,
    pub semi_primal_count: usize,
    pub fraction: f64,
    pub wilson: (f64, f64),
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub route_disagreements: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzReport {
    pub chain_size: usize,
    pub extra_ops: Vec<usize>,
    pub samples: usize,
    pub seed: u64,
    pub semi_primal_count: usize,
    pub disagreements: usize,
    /// Indices of the disagreeing samples.
    pub disagreeing: Vec<usize>,
}

/// Wilson score interval for `k` successes in `n` trials.
pub fn wilson_interval(k: usize, n: usize, z: f64) -> Result<(f64, f64)> {
    if n == 0 {
        return Err(Error::EmptySample);
    }
    if k > n {
        return Err(Error::InvalidInput(format!("{k} successes in {n} trials")));
    }
    let (nf, p) = (n as f64, k as f64 / n as f64);
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let center = (p + z2 / (2.0 * nf)) / denom;
    let half = z / denom * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt();
    Ok(((center - half).max(0.0), (center + half).min(1.0)))
}

/// The `index`-th sample for `seed`; its stream depends on nothing else, so
/// serial and parallel runs agree.
pub fn sample_algebra(chain_size: usize, extra_ops: &[usize], seed: u64, index: usize) -> Result<FiniteAlgebra> {
    check_shape(chain_size, extra_ops)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let base = bounded_chain(chain_size - 1);
    let mut ops: Vec<Operation> = base.ops().to_vec();
    for (i, &arity) in extra_ops.iter().enumerate() {
        ops.push(FiniteAlgebra::op_from_fn(format!("f{i}"), chain_size, arity, |_| {
            rng.gen_range(0..chain_size)
        }));
    }
    Ok(FiniteAlgebra::new(format!("sample_{seed}_{index}"), chain_size, ops)?.with_lattice_hint("meet", "join"))
}

fn check_shape(chain_size: usize, extra_ops: &[usize]) -> Result<()> {
    if !(2..=5).contains(&chain_size) {
        return Err(Error::InvalidInput(format!("chain size {chain_size} outside 2..=5")));
    }
    if let Some(&a) = extra_ops.iter().find(|&&a| a > 3) {
        return Err(Error::InvalidInput(format!("extra operation arity {a} exceeds 3")));
    }
    Ok(())
}

#[derive(Clone, Copy)]
struct Outcome {
    semi: bool,
    disagree: bool,
}

fn evaluate(cfg: &SampleConfig, index: usize) -> Result<Outcome> {
    let alg = sample_algebra(cfg.chain_size, &cfg.extra_ops, cfg.seed, index)?;
    let r = detect_lattice(&alg, None)?;
    let sq = SquareData::new(&alg)?;
    if !cfg.cross_check {
        let v = is_semi_primal_with(&alg, &r, Route::TRoute, &sq)?;
        return Ok(Outcome {
            semi: v.level.is_semi_primal(),
            disagree: false,
        });
    }
    match is_semi_primal_with(&alg, &r, Route::All, &sq) {
        Ok(v) => Ok(Outcome {
            semi: v.level.is_semi_primal(),
            disagree: false,
        }),
        Err(Error::RouteDisagreement(_)) => Ok(Outcome {
            semi: is_semi_primal_with(&alg, &r, Route::TRoute, &sq)?.level.is_semi_primal(),
            disagree: true,
        }),
        Err(e) => Err(e),
    }
}

fn run(cfg: &SampleConfig) -> Result<Vec<Outcome>> {
    check_shape(cfg.chain_size, &cfg.extra_ops)?;
    let start = Instant::now();
    let mut out = Vec::with_capacity(cfg.samples);
    let mut next = 0;
    while next < cfg.samples {
        if let Some(b) = cfg.budget {
            if start.elapsed() > b {
                return Err(Error::BudgetExhausted { completed: next });
            }
        }
        let end = (next + CHUNK).min(cfg.samples);
        let chunk: Vec<Outcome> = (next..end)
            .into_par_iter()
            .map(|i| evaluate(cfg, i))
            .collect::<Result<_>>()?;
        out.extend(chunk);
        next = end;
    }
    Ok(out)
}

/// Fraction of sampled expansions that are semi-primal, by the T-route.
pub fn murskii_sample(chain_size: usize, extra_ops: &[usize], samples: usize, seed: u64) -> Result<SampleReport> {
    murskii_sample_with(&SampleConfig::new(chain_size, extra_ops.to_vec(), samples, seed))
}

pub fn murskii_sample_with(cfg: &SampleConfig) -> Result<SampleReport> {
    if cfg.samples == 0 {
        return Err(Error::EmptySample);
    }
    let outcomes = run(cfg)?;
    let k = outcomes.iter().filter(|o| o.semi).count();
    Ok(SampleReport {
        base_chain_size: cfg.chain_size,
        extra_ops: cfg.extra_ops.clone(),
        sample_count: cfg.samples,
        semi_primal_count: k,
        fraction: k as f64 / cfg.samples as f64,
        wilson: wilson_interval(k, cfg.samples, Z_95)?,
        seed: cfg.seed,
        route_disagreements: cfg.cross_check.then(|| outcomes.iter().filter(|o| o.disagree).count()),
    })
}

/// Runs all three routes on every sample and counts disagreements.
pub fn route_fuzz(chain_size: usize, extra_ops: &[usize], samples: usize, seed: u64) -> Result<FuzzReport> {
    let mut cfg = SampleConfig::new(chain_size, extra_ops.to_vec(), samples, seed);
    cfg.cross_check = true;
    let outcomes = run(&cfg)?;
    let disagreeing: Vec<usize> = outcomes
        .iter()
        .enumerate()
        .filter(|(_, o)| o.disagree)
        .map(|(i, _)| i)
        .collect();
    Ok(FuzzReport {
        chain_size,
        extra_ops: extra_ops.to_vec(),
        samples,
        seed,
        semi_primal_count: outcomes.iter().filter(|o| o.semi).count(),
        disagreements: disagreeing.len(),
        disagreeing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn empty_sample_is_an_error() {
        assert!(matches!(murskii_sample(2, &[2], 0, 1), Err(Error::EmptySample)));
        assert!(matches!(wilson_interval(0, 0, Z_95), Err(Error::EmptySample)));
    }

    #[test]
    fn shape_checks() {
        assert!(matches!(murskii_sample(1, &[2], 5, 1), Err(Error::InvalidInput(_))));
        assert!(matches!(murskii_sample(6, &[2], 5, 1), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn same_seed_same_report() {
        let a = murskii_sample(3, &[2], 200, 42).unwrap();
        let b = murskii_sample(3, &[2], 200, 42).unwrap();
        assert_eq!(a, b);
        assert!(a.wilson.0 <= a.fraction && a.fraction <= a.wilson.1);
    }

    #[test]
    fn samples_do_not_depend_on_count() {
        let a = sample_algebra(3, &[2, 1], 7, 5).unwrap();
        let b = sample_algebra(3, &[2, 1], 7, 5).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.op(4).table, sample_algebra(3, &[2, 1], 7, 6).unwrap().op(4).table);
    }

    #[test]
    fn zero_budget_aborts_cleanly() {
        let mut cfg = SampleConfig::new(3, vec![2], 500, 1);
        cfg.budget = Some(Duration::ZERO);
        std::thread::sleep(Duration::from_millis(1));
        assert!(matches!(murskii_sample_with(&cfg), Err(Error::BudgetExhausted { completed: 0 })));
    }

    #[test]
    fn wilson_known_values() {
        let (lo, hi) = wilson_interval(0, 10, Z_95).unwrap();
        assert_eq!(lo, 0.0);
        assert!((hi - 0.2775327998628892).abs() < 1e-12, "{hi}");
        let (lo, hi) = wilson_interval(5, 10, Z_95).unwrap();
        assert!((lo + hi - 1.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn wilson_is_a_valid_interval(n in 1usize..5000, k_frac in 0.0f64..=1.0) {
            let k = ((n as f64) * k_frac).floor() as usize;
            let (lo, hi) = wilson_interval(k, n, Z_95).unwrap();
            let p = k as f64 / n as f64;
            prop_assert!(0.0 <= lo && lo <= p + 1e-12 && p <= hi + 1e-12 && hi <= 1.0);
        }
    }
}
