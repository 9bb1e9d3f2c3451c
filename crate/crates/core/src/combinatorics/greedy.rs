use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::word::{collect_ball, enumerate_words_capped, FreqPerm, DEFAULT_WORD_CAP};

/// Greedy (λ,n,d)-FPA: repeatedly take the lexicographically least word
/// still available and discard every word within distance d−1 of it.
///
/// The result has pairwise distance ≥ d and at least
/// |S_n^λ| / V_∞(λ,n,d−1) words.
pub fn greedy_construct(lambda: usize, n: usize, d: usize) -> Result<Vec<FreqPerm>> {
    greedy_construct_capped(lambda, n, d, DEFAULT_WORD_CAP)
}

pub fn greedy_construct_capped(
    lambda: usize,
    n: usize,
    d: usize,
    cap: u64,
) -> Result<Vec<FreqPerm>> {
    if lambda == 0 || n == 0 || n % lambda != 0 {
        return Err(Error::InvalidParams(format!(
            "lambda={lambda} must be positive and divide n={n}"
        )));
    }
    if d == 0 {
        return Err(Error::InvalidParams(
            "minimum distance d must be at least 1".into(),
        ));
    }
    let words: Vec<FreqPerm> = enumerate_words_capped(lambda, n / lambda, cap)?.collect();
    let index: HashMap<&[usize], usize> = words
        .iter()
        .enumerate()
        .map(|(i, w)| (w.as_slice(), i))
        .collect();

    let mut removed = vec![false; words.len()];
    let mut code = Vec::new();
    let mut cursor = 0;
    loop {
        while cursor < words.len() && removed[cursor] {
            cursor += 1;
        }
        if cursor == words.len() {
            return Ok(code);
        }
        let chosen = &words[cursor];
        for w in collect_ball(chosen, d - 1) {
            removed[index[w.as_slice()]] = true;
        }
        code.push(chosen.clone());
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::space_size;
    use num_bigint::BigUint;

    #[test]
    fn greedy_examples() {
        let code = greedy_construct(1, 3, 2).unwrap();
        let words: Vec<_> = code.iter().map(|w| w.as_slice().to_vec()).collect();
        assert_eq!(words, vec![vec![1, 2, 3], vec![2, 3, 1], vec![3, 1, 2]]);

        let code = greedy_construct(1, 3, 3).unwrap();
        assert_eq!(code.len(), 1);
        assert_eq!(code[0].as_slice(), &[1, 2, 3]);

        for (lambda, m) in [(1, 4), (2, 3), (3, 2)] {
            let code = greedy_construct(lambda, lambda * m, 1).unwrap();
            assert_eq!(BigUint::from(code.len()), space_size(lambda, m));
        }
    }

    #[test]
    fn greedy_rejects_zero_distance() {
        assert!(greedy_construct(1, 3, 0).is_err());
        assert!(matches!(
            greedy_construct(1, 12, 2),
            Err(Error::CapExceeded { .. })
        ));
    }
}
