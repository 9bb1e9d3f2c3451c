//! ℓ∞-bounded noise within S_n^λ and seeded decoding experiments.
//!
//! The channel always emits a valid word of S_n^λ within distance δ of its
//! input. Two samplers are offered: exact-uniform draws from the whole
//! radius-δ ball, and swap-walk applies random transpositions that keep
//! every symbol within δ of the original word. Swap-walk is cheap but not
//! uniform over the ball.

use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codec::{encode, local_decode, unique_decode};
use crate::error::{Error, Result};
use crate::rng::RandomSource;
use crate::word::{
    check_cap, collect_ball, space_size, CodeParams, FreqPerm, Message, DEFAULT_WORD_CAP,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChannelMode {
    ExactUniform,
    SwapWalk,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChannelConfig {
    pub delta: usize,
    pub mode: ChannelMode,
    /// Swap attempts for swap-walk; `None` means 10·n.
    pub walk_steps: Option<usize>,
}

impl ChannelConfig {
    pub fn exact_uniform(delta: usize) -> Self {
        ChannelConfig {
            delta,
            mode: ChannelMode::ExactUniform,
            walk_steps: None,
        }
    }

    pub fn swap_walk(delta: usize) -> Self {
        ChannelConfig {
            delta,
            mode: ChannelMode::SwapWalk,
            walk_steps: None,
        }
    }

    pub fn steps_for(&self, n: usize) -> usize {
        self.walk_steps.unwrap_or(10 * n)
    }
}

/// Returns a word of S_n^λ within distance `cfg.delta` of `word`.
pub fn perturb(word: &FreqPerm, cfg: &ChannelConfig, rng: &mut RandomSource) -> Result<FreqPerm> {
    if cfg.delta == 0 {
        return Ok(word.clone());
    }
    match cfg.mode {
        ChannelMode::ExactUniform => {
            check_cap(
                "word space",
                &space_size(word.lambda(), word.m()),
                DEFAULT_WORD_CAP,
            )?;
            let ball = collect_ball(word, cfg.delta);
            Ok(ball[rng.below(ball.len())].clone())
        }
        ChannelMode::SwapWalk => Ok(swap_walk(word, cfg.delta, cfg.steps_for(word.len()), rng)),
    }
}

/// Each step proposes swapping two random positions and accepts only if
/// both moved symbols stay within δ of the ORIGINAL word.
fn swap_walk(word: &FreqPerm, delta: usize, steps: usize, rng: &mut RandomSource) -> FreqPerm {
    let orig = word.as_slice();
    let n = orig.len();
    let mut cur = orig.to_vec();
    if n < 2 {
        return word.clone();
    }
    for _ in 0..steps {
        let a = rng.below(n);
        let b = rng.below(n);
        if a == b || cur[a] == cur[b] {
            continue;
        }
        if cur[b].abs_diff(orig[a]) <= delta && cur[a].abs_diff(orig[b]) <= delta {
            cur.swap(a, b);
        }
    }
    FreqPerm::from_raw(cur, word.lambda())
}

/// Aggregates of [`run_experiment`]. Counts are integers, so the rates do
/// not depend on trial scheduling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub trials: u64,
    pub delta: usize,
    pub d: usize,
    /// Fraction of trials where unique decoding returned the sent message.
    pub uds_rate: f64,
    /// Fraction of local decodes whose first draw did not yield m_i.
    pub lfi_error_rate: f64,
    /// (2δ+1)/d.
    pub lfi_bound: f64,
    pub mean_reads: f64,
    pub seed: u64,
    /// Fraction of local decodes returning the wrong bit (any iteration).
    pub local_error_rate: f64,
}

impl ExperimentReport {
    /// Whether δ is within the unique-decoding radius, i.e. whether
    /// `uds_rate` is guaranteed to be 1.
    pub fn within_radius(&self) -> bool {
        self.d >= 1 && self.delta <= (self.d - 1) / 2
    }
}

#[derive(Default, Clone, Copy)]
struct Tally {
    uds_ok: u64,
    first_iter_err: u64,
    local_err: u64,
    reads: u64,
}

impl std::ops::Add for Tally {
    type Output = Tally;
    fn add(self, o: Tally) -> Tally {
        Tally {
            uds_ok: self.uds_ok + o.uds_ok,
            first_iter_err: self.first_iter_err + o.first_iter_err,
            local_err: self.local_err + o.local_err,
            reads: self.reads + o.reads,
        }
    }
}

/// Runs `trials` independent trials: random message, encode, perturb,
/// unique-decode, and local-decode one random bit. Trial t draws from the
/// stream `rng.split(t)`, so reports replay exactly from the seed.
pub fn run_experiment(
    params: &CodeParams,
    cfg: &ChannelConfig,
    trials: u64,
    rng: &RandomSource,
) -> Result<ExperimentReport> {
    if trials == 0 {
        return Err(Error::EmptyTrials);
    }
    let k = params.k();
    if k == 0 {
        return Err(Error::InvalidParams(
            "experiments need k ≥ 1 message bits".into(),
        ));
    }
    if cfg.mode == ChannelMode::ExactUniform && cfg.delta > 0 {
        check_cap(
            "word space",
            &space_size(params.lambda(), params.m()),
            DEFAULT_WORD_CAP,
        )?;
    }

    // Radius-δ balls around each codeword, built on first use.
    let balls: Vec<OnceLock<Vec<FreqPerm>>> = if cfg.mode == ChannelMode::ExactUniform && k <= 16 {
        (0..1usize << k).map(|_| OnceLock::new()).collect()
    } else {
        Vec::new()
    };

    let trial = |t: u64| -> Result<Tally> {
        let mut r = rng.split(t);
        let value = r.next_u64() & ((1u64 << k.min(63)) - 1);
        let msg = Message::from_index(value, k);
        let codeword = encode(&msg, params)?;
        let received = match balls.get(value as usize) {
            Some(cell) if cfg.delta > 0 => {
                let ball = cell.get_or_init(|| collect_ball(&codeword, cfg.delta));
                ball[r.below(ball.len())].clone()
            }
            _ => perturb(&codeword, cfg, &mut r)?,
        };
        let uds_ok = u64::from(unique_decode(&received, params)? == msg);
        let i = 1 + r.below(k);
        let local = local_decode(&received, i, params, &mut r)?;
        let truth = msg.bit(i);
        Ok(Tally {
            uds_ok,
            first_iter_err: u64::from(!(local.iterations == 1 && local.bit == truth)),
            local_err: u64::from(local.bit != truth),
            reads: local.symbols_read as u64,
        })
    };

    let total = (0..trials)
        .into_par_iter()
        .map(trial)
        .try_reduce(Tally::default, |a, b| Ok(a + b))?;

    let t = trials as f64;
    Ok(ExperimentReport {
        trials,
        delta: cfg.delta,
        d: params.d(),
        uds_rate: total.uds_ok as f64 / t,
        lfi_error_rate: total.first_iter_err as f64 / t,
        lfi_bound: (2 * cfg.delta + 1) as f64 / params.d() as f64,
        mean_reads: total.reads as f64 / t,
        seed: rng.seed(),
        local_error_rate: total.local_err as f64 / t,
    })
}
