//! Words of S_n^λ: multiset permutations in which each symbol of `1..=m`
//! appears exactly `lambda` times, plus code parameters, messages, the
//! Chebyshev (ℓ∞) metric and exhaustive enumeration.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on the number of words [`enumerate_words`] will walk.
pub const DEFAULT_WORD_CAP: u64 = 10_000_000;

#[inline]
pub(crate) fn ceil_div(a: usize, b: usize) -> usize {
    a.div_ceil(b)
}

/// The code parameters (λ, m, n, k, d) with d = ⌊(n − k)/λ⌋.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CodeParams {
    lambda: usize,
    m: usize,
    n: usize,
    k: usize,
    d: usize,
}

impl CodeParams {
    /// Requires λ | n and n ≥ k + λ.
    pub fn new(lambda: usize, n: usize, k: usize) -> Result<Self> {
        if lambda == 0 || n == 0 {
            return Err(Error::InvalidParams(format!(
                "lambda and n must be positive (lambda={lambda}, n={n})"
            )));
        }
        if n % lambda != 0 {
            return Err(Error::InvalidParams(format!(
                "lambda={lambda} does not divide n={n}"
            )));
        }
        if n < k + lambda {
            return Err(Error::InvalidParams(format!(
                "n < k+lambda ({n} < {k}+{lambda})"
            )));
        }
        Ok(CodeParams {
            lambda,
            m: n / lambda,
            n,
            k,
            d: (n - k) / lambda,
        })
    }

    pub fn lambda(&self) -> usize {
        self.lambda
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Guaranteed minimum ℓ∞ distance of the code.
    pub fn d(&self) -> usize {
        self.d
    }

    /// Unique-decoding radius ⌊(d − 1)/2⌋.
    pub fn radius(&self) -> usize {
        self.d.saturating_sub(1) / 2
    }

    pub fn identity(&self) -> FreqPerm {
        FreqPerm::identity(self.lambda, self.m)
    }
}

/// An element of S_n^λ. Symbols are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FreqPerm {
    lambda: usize,
    symbols: Vec<usize>,
}

impl FreqPerm {
    /// Checks length, range and multiplicity, in that order, and reports the
    /// first violation found.
    pub fn new(symbols: Vec<usize>, lambda: usize, m: usize) -> Result<Self> {
        if lambda == 0 || m == 0 {
            return Err(Error::InvalidParams(format!(
                "lambda and m must be positive (lambda={lambda}, m={m})"
            )));
        }
        let n = lambda * m;
        if symbols.len() != n {
            return Err(Error::WrongLength {
                expected: n,
                got: symbols.len(),
            });
        }
        let mut counts = vec![0usize; m + 1];
        for (pos, &s) in symbols.iter().enumerate() {
            if s == 0 || s > m {
                return Err(Error::OutOfRangeSymbol {
                    position: pos + 1,
                    symbol: s,
                    m,
                });
            }
            counts[s] += 1;
        }
        if let Some((symbol, &count)) = counts
            .iter()
            .enumerate()
            .skip(1)
            .find(|(_, &c)| c != lambda)
        {
            return Err(Error::WrongMultiplicity {
                symbol,
                count,
                expected: lambda,
            });
        }
        Ok(FreqPerm { lambda, symbols })
    }

    /// Validates a word whose alphabet size is implied by its length.
    pub fn with_lambda(symbols: Vec<usize>, lambda: usize) -> Result<Self> {
        if lambda == 0 || symbols.is_empty() || symbols.len() % lambda != 0 {
            return Err(Error::InvalidParams(format!(
                "word length {} is not a positive multiple of lambda={lambda}",
                symbols.len()
            )));
        }
        let m = symbols.len() / lambda;
        Self::new(symbols, lambda, m)
    }

    /// I_n^λ = (1,…,1,2,…,2,…,m,…,m); position i holds ⌈i/λ⌉.
    pub fn identity(lambda: usize, m: usize) -> Self {
        let symbols = (1..=lambda * m).map(|i| ceil_div(i, lambda)).collect();
        FreqPerm { lambda, symbols }
    }

    pub(crate) fn from_raw(symbols: Vec<usize>, lambda: usize) -> Self {
        debug_assert!(FreqPerm::with_lambda(symbols.clone(), lambda).is_ok());
        FreqPerm { lambda, symbols }
    }

    pub fn lambda(&self) -> usize {
        self.lambda
    }

    pub fn m(&self) -> usize {
        self.symbols.len() / self.lambda
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.symbols
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.symbols
    }

    /// Symbol at 1-based position `pos`.
    pub fn symbol(&self, pos: usize) -> usize {
        self.symbols[pos - 1]
    }

    pub fn distance(&self, other: &FreqPerm) -> Result<usize> {
        linf_distance(&self.symbols, &other.symbols)
    }

    /// Parses the comma-separated text form, e.g. `3,1,1,2,2,3`.
    pub fn parse(text: &str, lambda: usize) -> Result<Self> {
        Self::with_lambda(parse_symbols(text)?, lambda)
    }
}

impl fmt::Display for FreqPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.symbols.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl AsRef<[usize]> for FreqPerm {
    fn as_ref(&self) -> &[usize] {
        &self.symbols
    }
}

pub fn parse_symbols(text: &str) -> Result<Vec<usize>> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|e| Error::Parse(format!("bad symbol {t:?}: {e}")))
        })
        .collect()
}

/// Validates a raw symbol sequence as a member of S_n^λ with n = λm.
pub fn validate_word(symbols: &[usize], lambda: usize, m: usize) -> Result<FreqPerm> {
    FreqPerm::new(symbols.to_vec(), lambda, m)
}

pub fn identity_perm(params: &CodeParams) -> FreqPerm {
    params.identity()
}

/// max_i |x_i − y_i|.
pub fn linf_distance(x: &[usize], y: &[usize]) -> Result<usize> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    Ok(x.iter()
        .zip(y)
        .map(|(&a, &b)| a.abs_diff(b))
        .max()
        .unwrap_or(0))
}

/// A k-bit binary message; bit 1 is the leftmost character of the text form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Message(Vec<u8>);

impl Message {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if let Some(pos) = bits.iter().position(|&b| b > 1) {
            return Err(Error::Parse(format!(
                "message bit {} is {}, not 0/1",
                pos + 1,
                bits[pos]
            )));
        }
        Ok(Message(bits))
    }

    pub fn zeros(k: usize) -> Self {
        Message(vec![0; k])
    }

    /// The message whose bits spell `value` in binary, m₁ most significant.
    /// Enumerating `value` in `0..2^k` walks Z_2^k lexicographically.
    pub fn from_index(value: u64, k: usize) -> Self {
        Message(
            (0..k)
                .map(|i| {
                    let shift = k - 1 - i;
                    if shift >= 64 {
                        0
                    } else {
                        ((value >> shift) & 1) as u8
                    }
                })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Bit m_i, 1-based.
    pub fn bit(&self, i: usize) -> u8 {
        self.0[i - 1]
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }
}

impl FromStr for Message {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::Parse(format!(
                    "message character {other:?} is not 0/1"
                ))),
            })
            .collect::<Result<Vec<u8>>>()
            .map(Message)
    }
}

impl fmt::Display for Message {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

pub(crate) fn factorial(n: usize) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

/// |S_n^λ| = n! / (λ!)^m.
pub fn space_size(lambda: usize, m: usize) -> BigUint {
    factorial(lambda * m) / factorial(lambda).pow(m as u32)
}

pub(crate) fn check_cap(what: &'static str, size: &BigUint, cap: u64) -> Result<()> {
    match size.to_u64() {
        Some(s) if s <= cap => Ok(()),
        _ => Err(Error::CapExceeded {
            what,
            size: size.to_string(),
            cap,
        }),
    }
}

/// Lexicographic walk over S_n^λ.
#[derive(Debug, Clone)]
pub struct Words {
    lambda: usize,
    next: Option<Vec<usize>>,
}

impl Iterator for Words {
    type Item = FreqPerm;

    fn next(&mut self) -> Option<FreqPerm> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        if next_permutation(&mut succ) {
            self.next = Some(succ);
        }
        Some(FreqPerm {
            lambda: self.lambda,
            symbols: current,
        })
    }
}

/// Standard successor step; handles repeated elements, so it visits each
/// distinct arrangement once.
fn next_permutation(a: &mut [usize]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let mut i = a.len() - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = a.len() - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

/// Every word of S_n^λ in lexicographic order, starting at I_n^λ.
pub fn enumerate_words(lambda: usize, m: usize) -> Result<Words> {
    enumerate_words_capped(lambda, m, DEFAULT_WORD_CAP)
}

pub fn enumerate_words_capped(lambda: usize, m: usize, cap: u64) -> Result<Words> {
    if lambda == 0 || m == 0 {
        return Err(Error::InvalidParams(format!(
            "lambda and m must be positive (lambda={lambda}, m={m})"
        )));
    }
    check_cap("word space", &space_size(lambda, m), cap)?;
    Ok(Words {
        lambda,
        next: Some(FreqPerm::identity(lambda, m).symbols),
    })
}

/// All words within ℓ∞ distance `radius` of `center`, in lexicographic order.
///
/// Depth-first over positions: position p may take any symbol in
/// `[center_p − radius, center_p + radius]` that still has copies left.
/// The space-size cap applies as for [`enumerate_words`].
pub fn ball_words(center: &FreqPerm, radius: usize, cap: u64) -> Result<Vec<FreqPerm>> {
    check_cap("word space", &space_size(center.lambda, center.m()), cap)?;
    Ok(collect_ball(center, radius))
}

pub(crate) fn collect_ball(center: &FreqPerm, radius: usize) -> Vec<FreqPerm> {
    let lambda = center.lambda;
    let m = center.m();
    let n = center.len();
    let mut remaining = vec![lambda; m + 1];
    remaining[0] = 0;
    let mut current = Vec::with_capacity(n);
    let mut out = Vec::new();

    fn walk(
        center: &[usize],
        radius: usize,
        m: usize,
        lambda: usize,
        remaining: &mut [usize],
        current: &mut Vec<usize>,
        out: &mut Vec<FreqPerm>,
    ) {
        let pos = current.len();
        if pos == center.len() {
            out.push(FreqPerm {
                lambda,
                symbols: current.clone(),
            });
            return;
        }
        let c = center[pos];
        let lo = c.saturating_sub(radius).max(1);
        let hi = (c + radius).min(m);
        for s in lo..=hi {
            if remaining[s] == 0 {
                continue;
            }
            remaining[s] -= 1;
            current.push(s);
            walk(center, radius, m, lambda, remaining, current, out);
            current.pop();
            remaining[s] += 1;
        }
    }

    walk(
        &center.symbols,
        radius,
        m,
        lambda,
        &mut remaining,
        &mut current,
        &mut out,
    );
    out
}
