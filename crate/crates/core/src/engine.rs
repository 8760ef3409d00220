//! The nested framework as a sampled state machine.
//!
//! Level `i` runs element `P_i`. A blinding-area (BA) event at level `i`
//! hands control to level `i + 1`; any other ending of level `i` is final.
//! BA at the last level ends the framework in failure.
//!
//! Every Monte Carlo trial draws from its own ChaCha stream selected by the
//! trial index, so an estimate depends only on `(spec, scenario, trials,
//! seed)` and never on how trials are spread over worker threads.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::elements::{noisy_alice_prob, noisy_bob_prob, ElementProfile, NoiseSetting};
use crate::error::{invalid, Error, Result};

/// Largest supported nesting depth.
pub const MAX_LEVELS: usize = 64;

/// Environment variable capping the estimator's worker threads.
pub const THREADS_ENV: &str = "NESTED_QCF_THREADS";

const CHUNK: u64 = 4096;

/// An ordered chain of elements and the channel noise they run over. The
/// depth is fixed once constructed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrameworkSpec {
    elements: Vec<ElementProfile>,
    noise: NoiseSetting,
}

impl FrameworkSpec {
    pub fn new(elements: Vec<ElementProfile>, noise: NoiseSetting) -> Result<Self> {
        if elements.is_empty() || elements.len() > MAX_LEVELS {
            return Err(invalid(format!(
                "framework depth must be in 1..={MAX_LEVELS}, got {}",
                elements.len()
            )));
        }
        Ok(Self { elements, noise })
    }

    /// `depth` copies of one element.
    pub fn uniform(element: ElementProfile, depth: usize, noise: NoiseSetting) -> Result<Self> {
        Self::new(vec![element; depth], noise)
    }

    pub fn elements(&self) -> &[ElementProfile] {
        &self.elements
    }

    pub fn noise(&self) -> &NoiseSetting {
        &self.noise
    }

    pub fn depth(&self) -> usize {
        self.elements.len()
    }

    pub fn p_stars(&self) -> Vec<f64> {
        self.elements.iter().map(ElementProfile::p_star).collect()
    }

    /// Per-level success probabilities of a cheating Alice.
    pub fn alice_level_probs(&self) -> Vec<f64> {
        self.elements
            .iter()
            .map(|e| noisy_alice_prob(e, &self.noise))
            .collect()
    }

    /// Per-level success probabilities of a cheating Bob.
    pub fn bob_level_probs(&self) -> Vec<f64> {
        self.elements
            .iter()
            .map(|e| noisy_bob_prob(e, &self.noise))
            .collect()
    }

    /// Per-level BA probability in an honest run: Bob verified (`1 − p*`) and
    /// the channel flipped the bit (`P_e`).
    pub fn honest_ba_probs(&self) -> Vec<f64> {
        self.elements
            .iter()
            .map(|e| (1.0 - e.p_star()) * self.noise.p_e())
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RunResult {
    Coin(u8),
    Failure,
}

/// Trace of one honest execution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunOutcome {
    pub result: RunResult,
    pub levels_used: usize,
    /// One entry per visited level; `true` where BA occurred.
    pub ba_trace: Vec<bool>,
}

impl RunOutcome {
    /// Checks the trace against the result for a framework of `depth` levels.
    pub fn is_consistent(&self, depth: usize) -> bool {
        let leading = self.ba_trace.iter().take_while(|b| **b).count();
        let all_ba = self.ba_trace.len() == depth && leading == depth;
        let failure = self.result == RunResult::Failure;
        failure == all_ba
            && self.levels_used == (leading + 1).min(depth)
            && self.levels_used == self.ba_trace.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheatOutcome {
    Win,
    Lose,
}

/// Both parties honest.
pub fn run_honest<R: Rng + ?Sized>(spec: &FrameworkSpec, rng: &mut R) -> RunOutcome {
    let mut trace = Vec::with_capacity(spec.depth());
    for ba_prob in spec.honest_ba_probs() {
        if rng.random::<f64>() < ba_prob {
            trace.push(true);
            continue;
        }
        trace.push(false);
        let coin = u8::from(rng.random_bool(0.5));
        return RunOutcome {
            result: RunResult::Coin(coin),
            levels_used: trace.len(),
            ba_trace: trace,
        };
    }
    RunOutcome {
        result: RunResult::Failure,
        levels_used: trace.len(),
        ba_trace: trace,
    }
}

fn run_cheat<R: Rng + ?Sized>(level_probs: &[f64], rng: &mut R) -> CheatOutcome {
    // a failed attempt at level i is indistinguishable from noise and escalates
    for &win in level_probs {
        if rng.random::<f64>() < win {
            return CheatOutcome::Win;
        }
    }
    CheatOutcome::Lose
}

/// Alice cheats with the per-element optimal strategy, Bob is honest.
pub fn run_cheat_alice<R: Rng + ?Sized>(spec: &FrameworkSpec, rng: &mut R) -> CheatOutcome {
    run_cheat(&spec.alice_level_probs(), rng)
}

/// Bob cheats with the per-element optimal strategy, Alice is honest.
pub fn run_cheat_bob<R: Rng + ?Sized>(spec: &FrameworkSpec, rng: &mut R) -> CheatOutcome {
    run_cheat(&spec.bob_level_probs(), rng)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    /// Honest parties; success = the framework fails (justice error).
    HonestFailure,
    CheatAlice,
    CheatBob,
    /// Honest parties; success = coin 0, conditioned on a coin being produced.
    HonestCoin0,
}

impl Scenario {
    pub const ALL: [Scenario; 4] = [
        Scenario::HonestFailure,
        Scenario::CheatAlice,
        Scenario::CheatBob,
        Scenario::HonestCoin0,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Scenario::HonestFailure => "honest_failure",
            Scenario::CheatAlice => "cheat_alice",
            Scenario::CheatBob => "cheat_bob",
            Scenario::HonestCoin0 => "honest_coin0",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.as_str() == s)
            .ok_or_else(|| invalid(format!("unknown scenario `{s}`")))
    }
}

/// Aggregated Monte Carlo result. For [`Scenario::HonestCoin0`] `trials`
/// counts only the runs that produced a coin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrialStats {
    pub trials: u64,
    pub successes: u64,
    pub estimate: f64,
    pub std_error: f64,
    pub seed: u64,
}

impl TrialStats {
    fn from_counts(trials: u64, successes: u64, seed: u64) -> Self {
        let estimate = successes as f64 / trials as f64;
        let std_error = (estimate * (1.0 - estimate) / trials as f64).sqrt();
        Self {
            trials,
            successes,
            estimate,
            std_error,
            seed,
        }
    }
}

/// RNG for trial `index` under `seed`: the seed picks the key, the trial
/// index picks the stream.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// (counted trials, successes) for one trial.
fn score(spec: &FrameworkSpec, scenario: Scenario, rng: &mut ChaCha8Rng) -> (u64, u64) {
    match scenario {
        Scenario::HonestFailure => {
            let out = run_honest(spec, rng);
            (1, u64::from(out.result == RunResult::Failure))
        }
        Scenario::CheatAlice => (1, u64::from(run_cheat_alice(spec, rng) == CheatOutcome::Win)),
        Scenario::CheatBob => (1, u64::from(run_cheat_bob(spec, rng) == CheatOutcome::Win)),
        Scenario::HonestCoin0 => match run_honest(spec, rng).result {
            RunResult::Coin(c) => (1, u64::from(c == 0)),
            RunResult::Failure => (0, 0),
        },
    }
}

fn run_chunk(spec: &FrameworkSpec, scenario: Scenario, seed: u64, range: std::ops::Range<u64>) -> (u64, u64) {
    let base = ChaCha8Rng::seed_from_u64(seed);
    range.fold((0, 0), |(n, k), i| {
        let mut rng = base.clone();
        rng.set_stream(i);
        let (dn, dk) = score(spec, scenario, &mut rng);
        (n + dn, k + dk)
    })
}

fn worker_limit() -> Option<usize> {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|n| *n > 0)
}

/// Runs `trials` independent executions of `scenario`.
///
/// Honors `NESTED_QCF_THREADS` as a worker cap when set.
pub fn estimate(spec: &FrameworkSpec, scenario: Scenario, trials: u64, seed: u64) -> Result<TrialStats> {
    estimate_with_workers(spec, scenario, trials, seed, worker_limit())
}

/// As [`estimate`] with an explicit worker count; `Some(1)` runs serially
/// on the calling thread, `None` uses the global rayon pool.
pub fn estimate_with_workers(
    spec: &FrameworkSpec,
    scenario: Scenario,
    trials: u64,
    seed: u64,
    workers: Option<usize>,
) -> Result<TrialStats> {
    if trials == 0 {
        return Err(invalid("trials must be positive"));
    }
    let chunks = trials.div_ceil(CHUNK);
    let chunk_range = |c: u64| c * CHUNK..((c + 1) * CHUNK).min(trials);
    let sum = |a: (u64, u64), b: (u64, u64)| (a.0 + b.0, a.1 + b.1);

    let (counted, successes) = match workers {
        Some(1) => (0..chunks)
            .map(|c| run_chunk(spec, scenario, seed, chunk_range(c)))
            .fold((0, 0), sum),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| invalid(format!("cannot start worker pool: {e}")))?;
            pool.install(|| {
                (0..chunks)
                    .into_par_iter()
                    .map(|c| run_chunk(spec, scenario, seed, chunk_range(c)))
                    .reduce(|| (0, 0), sum)
            })
        }
        None => (0..chunks)
            .into_par_iter()
            .map(|c| run_chunk(spec, scenario, seed, chunk_range(c)))
            .reduce(|| (0, 0), sum),
    };
    if counted == 0 {
        return Err(Error::PreconditionViolation(format!(
            "no trial out of {trials} produced a coin; nothing to condition on"
        )));
    }
    Ok(TrialStats::from_counts(counted, successes, seed))
}
