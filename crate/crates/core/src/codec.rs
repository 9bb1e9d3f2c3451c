//! Encoder, unique decoder and randomized local decoder for the code
//! C_{n,k}^λ ⊂ S_n^λ, a (λ, n, ⌊(n−k)/λ⌋) frequency permutation array of
//! size 2^k.
//!
//! The encoder keeps two counters, `max` (starting at n) and `min`
//! (starting at 1). A 1-bit emits ⌈max/λ⌉ and decrements `max`; a 0-bit
//! emits ⌈min/λ⌉ and increments `min`; the tail k+1..n is filled from
//! `min` upward. The unique decoder replays the same counters and picks
//! whichever of ⌈max/λ⌉, ⌈min/λ⌉ is strictly closer to the received
//! symbol, breaking ties toward 0.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{walk_pick_tree, QuerySampler};
use crate::word::{ceil_div, CodeParams, FreqPerm, Message};

/// Default cap on 2^k for [`enumerate_codewords`].
pub const DEFAULT_CODEWORD_CAP: u64 = 1 << 20;

fn check_word(word: &FreqPerm, params: &CodeParams) -> Result<()> {
    if word.len() != params.n() {
        return Err(Error::WrongLength {
            expected: params.n(),
            got: word.len(),
        });
    }
    if word.lambda() != params.lambda() {
        return Err(Error::InvalidParams(format!(
            "word has lambda={}, parameters have lambda={}",
            word.lambda(),
            params.lambda()
        )));
    }
    Ok(())
}

pub fn encode(msg: &Message, params: &CodeParams) -> Result<FreqPerm> {
    if msg.len() != params.k() {
        return Err(Error::MessageLength {
            expected: params.k(),
            got: msg.len(),
        });
    }
    let (lambda, n) = (params.lambda(), params.n());
    let mut max = n;
    let mut min = 1;
    let mut x = Vec::with_capacity(n);
    for &bit in msg.bits() {
        if bit == 1 {
            x.push(ceil_div(max, lambda));
            max -= 1;
        } else {
            x.push(ceil_div(min, lambda));
            min += 1;
        }
    }
    for _ in params.k()..n {
        x.push(ceil_div(min, lambda));
        min += 1;
    }
    Ok(FreqPerm::from_raw(x, lambda))
}

/// Recovers the message of any word within ⌊(d−1)/2⌋ of a codeword.
pub fn unique_decode(word: &FreqPerm, params: &CodeParams) -> Result<Message> {
    check_word(word, params)?;
    let lambda = params.lambda();
    let mut max = params.n();
    let mut min = 1;
    let bits = word.as_slice()[..params.k()]
        .iter()
        .map(|&x| {
            let hi = ceil_div(max, lambda);
            let lo = ceil_div(min, lambda);
            if x.abs_diff(hi) < x.abs_diff(lo) {
                max -= 1;
                1
            } else {
                min += 1;
                0
            }
        })
        .collect();
    Message::new(bits)
}

/// Outcome of one run of the local decoder.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalDecodeResult {
    pub bit: u8,
    /// Number of draws j; at most λ on any word of S_n^λ.
    pub iterations: usize,
    /// `iterations + 1` (every draw plus x_i itself).
    pub symbols_read: usize,
    /// 1-based positions in read order: i first, then each drawn j.
    pub read_positions: Vec<usize>,
}

/// The decoding loop, independent of where symbols come from.
///
/// Draws j uniformly without replacement from `i+1..=n` through `sampler`
/// (lazy Fisher–Yates over the candidate list) and compares x_i with x_j:
/// greater gives 1, smaller gives 0, equal draws again. `read` fetches the
/// symbol at a 1-based position.
pub(crate) fn local_decode_by<R, S>(
    n: usize,
    i: usize,
    mut read: R,
    sampler: &mut S,
) -> Result<LocalDecodeResult>
where
    R: FnMut(usize) -> Result<usize>,
    S: QuerySampler + ?Sized,
{
    let xi = read(i)?;
    let mut read_positions = vec![i];
    let mut pool: Vec<usize> = (i + 1..=n).collect();
    for t in 0..pool.len() {
        let c = sampler.pick(pool.len() - t);
        pool.swap(t, t + c);
        let j = pool[t];
        let xj = read(j)?;
        read_positions.push(j);
        if xi != xj {
            let iterations = t + 1;
            return Ok(LocalDecodeResult {
                bit: u8::from(xi > xj),
                iterations,
                symbols_read: iterations + 1,
                read_positions,
            });
        }
    }
    Err(Error::Undecided)
}

/// Decodes message bit `i` (1-based, `1..=k`) by reading at most λ+1 symbols.
pub fn local_decode<S>(
    word: &FreqPerm,
    i: usize,
    params: &CodeParams,
    sampler: &mut S,
) -> Result<LocalDecodeResult>
where
    S: QuerySampler + ?Sized,
{
    check_word(word, params)?;
    if i == 0 || i > params.k() {
        return Err(Error::IndexOutOfRange {
            index: i,
            k: params.k(),
        });
    }
    local_decode_by(params.n(), i, |p| Ok(word.symbol(p)), sampler)
}

/// Every outcome of [`local_decode`] over its full randomness tree, with
/// the exact probability of each leaf. Probabilities sum to 1.
pub fn local_decode_tree(
    word: &FreqPerm,
    i: usize,
    params: &CodeParams,
) -> Result<Vec<(BigRational, LocalDecodeResult)>> {
    let mut leaves = Vec::new();
    walk_pick_tree(
        |s| local_decode(word, i, params, s),
        |_, branching, out| {
            let denom: BigInt = branching.iter().map(|&b| BigInt::from(b)).product();
            leaves.push((BigRational::new(BigInt::one(), denom), out));
        },
    )?;
    Ok(leaves)
}

/// All (message, codeword) pairs in lexicographic message order.
pub fn enumerate_codewords(
    params: &CodeParams,
) -> Result<impl Iterator<Item = (Message, FreqPerm)> + '_> {
    enumerate_codewords_capped(params, DEFAULT_CODEWORD_CAP)
}

pub fn enumerate_codewords_capped(
    params: &CodeParams,
    cap: u64,
) -> Result<impl Iterator<Item = (Message, FreqPerm)> + '_> {
    let k = params.k();
    if k >= 64 || (1u64 << k) > cap {
        return Err(Error::CapExceeded {
            what: "message space",
            size: format!("2^{k}"),
            cap,
        });
    }
    Ok((0..1u64 << k).map(move |v| {
        let msg = Message::from_index(v, k);
        let word = encode(&msg, params).expect("message length matches k");
        (msg, word)
    }))
}
