//! (λ+1)-server private information retrieval on top of the local decoder.
//!
//! Every server stores the same codeword E(m). To fetch m_i the client runs
//! the local decoder, sending its t-th read to server σ(t) for a fresh
//! uniformly random bijection σ between read slots and servers. Servers the
//! decoder did not need get one dummy query at a uniform position, so each
//! server sees exactly one index per retrieval.
//!
//! Servers sit behind a [`Query`]/[`Answer`] message boundary and keep a
//! log of every position they were asked for.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::codec::{encode, local_decode_by, local_decode_tree};
use crate::error::{Error, Result};
use crate::rng::{shuffle, QuerySampler, RandomSource};
use crate::word::{CodeParams, FreqPerm, Message};

/// Largest randomness tree (leaf bound (n−1)^λ) the exact privacy mode walks.
pub const EXACT_TREE_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Query {
    /// 1-based codeword position.
    pub position: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Answer {
    pub symbol: usize,
}

#[derive(Debug, Clone)]
pub struct Server {
    replica: FreqPerm,
    log: Vec<usize>,
}

impl Server {
    pub fn new(replica: FreqPerm) -> Self {
        Server {
            replica,
            log: Vec::new(),
        }
    }

    pub fn handle(&mut self, query: Query) -> Result<Answer> {
        if query.position == 0 || query.position > self.replica.len() {
            return Err(Error::IndexOutOfRange {
                index: query.position,
                k: self.replica.len(),
            });
        }
        self.log.push(query.position);
        Ok(Answer {
            symbol: self.replica.symbol(query.position),
        })
    }

    pub fn replica(&self) -> &FreqPerm {
        &self.replica
    }

    pub fn query_log(&self) -> &[usize] {
        &self.log
    }
}

/// q = λ+1 servers holding replicas of one codeword.
#[derive(Debug, Clone)]
pub struct ServerFarm {
    params: CodeParams,
    servers: Vec<Server>,
}

/// Places E(msg) on λ+1 servers with empty logs.
pub fn pir_setup(msg: &Message, params: &CodeParams) -> Result<ServerFarm> {
    let codeword = encode(msg, params)?;
    Ok(ServerFarm {
        params: *params,
        servers: (0..=params.lambda())
            .map(|_| Server::new(codeword.clone()))
            .collect(),
    })
}

impl ServerFarm {
    pub fn params(&self) -> &CodeParams {
        &self.params
    }

    pub fn q(&self) -> usize {
        self.servers.len()
    }

    pub fn servers(&self) -> &[Server] {
        &self.servers
    }

    pub fn query_log(&self, server: usize) -> &[usize] {
        self.servers[server].query_log()
    }

    /// Swaps in a different replica on one server, e.g. a noisy copy.
    pub fn replace_replica(&mut self, server: usize, word: FreqPerm) -> Result<()> {
        if word.len() != self.params.n() || word.lambda() != self.params.lambda() {
            return Err(Error::InvalidParams(format!(
                "replica must be a word of length {} with lambda={}",
                self.params.n(),
                self.params.lambda()
            )));
        }
        self.servers[server].replica = word;
        Ok(())
    }

    /// Fraction of `trials` retrievals (uniform target, fresh randomness)
    /// that return the true bit of `msg`. A retrieval that runs out of
    /// servers or candidates counts as a failure.
    pub fn retrievability(
        &mut self,
        msg: &Message,
        trials: u64,
        rng: &mut RandomSource,
    ) -> Result<f64> {
        if trials == 0 {
            return Err(Error::EmptyTrials);
        }
        let k = self.params.k();
        if k == 0 || msg.len() != k {
            return Err(Error::MessageLength {
                expected: k,
                got: msg.len(),
            });
        }
        let mut ok = 0u64;
        for _ in 0..trials {
            let i = 1 + rng.below(k);
            match pir_retrieve(self, i, rng) {
                Ok(t) if t.bit == msg.bit(i) => ok += 1,
                Ok(_) | Err(Error::ReadBudgetExhausted { .. }) | Err(Error::Undecided) => {}
                Err(e) => return Err(e),
            }
        }
        Ok(ok as f64 / trials as f64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ServerQuery {
    pub server: usize,
    pub position: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RetrievalTranscript {
    pub target: usize,
    /// One entry per server, ordered by server id.
    pub queries: Vec<ServerQuery>,
    pub bit: u8,
    /// Queries consumed by the decoder; the rest were dummies.
    #[serde(skip)]
    pub real_reads: usize,
}

/// Retrieves message bit `i` (1-based).
///
/// All client randomness (the slot-to-server bijection, the decoder's
/// draws and the dummy positions) comes from `rng`, so a scripted sampler
/// can walk the whole randomness tree.
pub fn pir_retrieve<S>(farm: &mut ServerFarm, i: usize, rng: &mut S) -> Result<RetrievalTranscript>
where
    S: QuerySampler + ?Sized,
{
    let (n, k, q) = (farm.params.n(), farm.params.k(), farm.q());
    if i == 0 || i > k {
        return Err(Error::IndexOutOfRange { index: i, k });
    }
    let slot_to_server = shuffle(q, rng);
    let mut queries: Vec<Option<usize>> = vec![None; q];
    let mut slot = 0;

    let servers = &mut farm.servers;
    let result = local_decode_by(
        n,
        i,
        |position| {
            let Some(&server) = slot_to_server.get(slot) else {
                return Err(Error::ReadBudgetExhausted { reads: slot });
            };
            slot += 1;
            queries[server] = Some(position);
            Ok(servers[server].handle(Query { position })?.symbol)
        },
        rng,
    )?;

    let real_reads = slot;
    for &server in &slot_to_server[real_reads..] {
        let position = 1 + rng.pick(n);
        servers[server].handle(Query { position })?;
        queries[server] = Some(position);
    }

    Ok(RetrievalTranscript {
        target: i,
        queries: queries
            .into_iter()
            .enumerate()
            .map(|(server, p)| ServerQuery {
                server,
                position: p.expect("every server queried once"),
            })
            .collect(),
        bit: result.bit,
        real_reads,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PrivacyMode {
    Exact,
    MonteCarlo,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrivacyEstimate {
    /// max over servers s and targets i, j of Δ(D(s,i), D(s,j)).
    pub p_estimate: f64,
    pub mode: PrivacyMode,
    pub trials: u64,
    pub seed: u64,
    /// Monte Carlo noise scale ½·Σ_x sqrt((p̂(1−p̂) + q̂(1−q̂))/N) at the
    /// maximizing (server, pair); it bounds E|p̂ − p|. Zero in exact mode.
    pub std_error: f64,
}

/// Exact D(s,i): the distribution of the position server s is asked for
/// when the client retrieves bit i, indexed by position − 1.
///
/// The bijection is uniform, so a server receives read slot t with
/// probability 1/q and a dummy with probability (q − reads)/q; this is the
/// same for every s.
pub fn query_distribution_exact(
    params: &CodeParams,
    msg: &Message,
    i: usize,
) -> Result<Vec<BigRational>> {
    let n = params.n();
    let q = params.lambda() + 1;
    check_tree_size(params)?;
    let codeword = encode(msg, params)?;
    let mut dist = vec![BigRational::zero(); n];
    let q_big = BigInt::from(q);
    for (prob, leaf) in local_decode_tree(&codeword, i, params)? {
        let per_slot = &prob / BigRational::from_integer(q_big.clone());
        for &pos in &leaf.read_positions {
            dist[pos - 1] += &per_slot;
        }
        let dummies = q - leaf.symbols_read;
        if dummies > 0 {
            let per_pos = &prob * BigRational::new(BigInt::from(dummies), BigInt::from(q * n));
            for p in dist.iter_mut() {
                *p += &per_pos;
            }
        }
    }
    Ok(dist)
}

fn check_tree_size(params: &CodeParams) -> Result<()> {
    let n = params.n() as u64;
    let leaves = (n.saturating_sub(1)).checked_pow(params.lambda() as u32);
    match leaves {
        Some(l) if l <= EXACT_TREE_CAP => Ok(()),
        _ => Err(Error::CapExceeded {
            what: "local decoder randomness tree",
            size: format!("{}^{}", n.saturating_sub(1), params.lambda()),
            cap: EXACT_TREE_CAP,
        }),
    }
}

pub fn total_variation(p: &[BigRational], q: &[BigRational]) -> BigRational {
    let sum: BigRational = p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum();
    sum / BigRational::from_integer(BigInt::from(2))
}

/// Estimates the privacy parameter p of the scheme for a stored message.
///
/// Exact mode weights every branch of the decoder's randomness; Monte
/// Carlo runs `trials` retrievals per target and compares empirical
/// per-server histograms. With k ≤ 1 there is no pair of targets and the
/// result is 0.
pub fn estimate_privacy(
    params: &CodeParams,
    msg: &Message,
    mode: PrivacyMode,
    trials: u64,
    rng: &mut RandomSource,
) -> Result<PrivacyEstimate> {
    let k = params.k();
    if msg.len() != k {
        return Err(Error::MessageLength {
            expected: k,
            got: msg.len(),
        });
    }
    let seed = rng.seed();
    match mode {
        PrivacyMode::Exact => {
            let dists = (1..=k)
                .map(|i| query_distribution_exact(params, msg, i))
                .collect::<Result<Vec<_>>>()?;
            let mut best = BigRational::zero();
            for a in 0..k {
                for b in a + 1..k {
                    let tv = total_variation(&dists[a], &dists[b]);
                    if tv > best {
                        best = tv;
                    }
                }
            }
            Ok(PrivacyEstimate {
                p_estimate: best.to_f64().unwrap_or(0.0),
                mode,
                trials: 0,
                seed,
                std_error: 0.0,
            })
        }
        PrivacyMode::MonteCarlo => {
            if trials == 0 {
                return Err(Error::EmptyTrials);
            }
            let (n, q) = (params.n(), params.lambda() + 1);
            // hist[i][s][pos]
            let mut hist = vec![vec![vec![0u64; n]; q]; k];
            for (i, per_target) in hist.iter_mut().enumerate() {
                let mut farm = pir_setup(msg, params)?;
                for _ in 0..trials {
                    let t = pir_retrieve(&mut farm, i + 1, rng)?;
                    for sq in t.queries {
                        per_target[sq.server][sq.position - 1] += 1;
                    }
                }
            }
            let nt = trials as f64;
            let mut best = (0.0f64, 0.0f64);
            for a in 0..k {
                for b in a + 1..k {
                    for (ha, hb) in hist[a].iter().zip(&hist[b]) {
                        let (mut l1, mut noise) = (0.0, 0.0);
                        for (&ca, &cb) in ha.iter().zip(hb) {
                            let pa = ca as f64 / nt;
                            let pb = cb as f64 / nt;
                            l1 += (pa - pb).abs();
                            noise += ((pa * (1.0 - pa) + pb * (1.0 - pb)) / nt).sqrt();
                        }
                        if l1 / 2.0 > best.0 {
                            best = (l1 / 2.0, noise / 2.0);
                        }
                    }
                }
            }
            Ok(PrivacyEstimate {
                p_estimate: best.0,
                mode,
                trials,
                seed,
                std_error: best.1,
            })
        }
    }
}

/// Retrievability of an uncorrupted farm for `msg`.
pub fn estimate_retrievability(
    params: &CodeParams,
    msg: &Message,
    trials: u64,
    rng: &mut RandomSource,
) -> Result<f64> {
    pir_setup(msg, params)?.retrievability(msg, trials, rng)
}
