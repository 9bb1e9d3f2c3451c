//! Shared oracles for the integration tests.
#![allow(dead_code)]

use fpa_core::rng::walk_pick_tree;
use fpa_core::{pir_retrieve, pir_setup, CodeParams, Error, Message, RetrievalTranscript};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

fn rational(num: usize, den: usize) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Every leaf of the full PIR client randomness tree (bijection, decoder
/// draws, dummy positions) for target `i`, driven through `pir_retrieve`.
pub fn pir_leaves(
    params: &CodeParams,
    msg: &Message,
    i: usize,
) -> Result<Vec<(BigRational, RetrievalTranscript)>, Error> {
    let mut farm = pir_setup(msg, params)?;
    let mut leaves = Vec::new();
    walk_pick_tree(
        |s| pir_retrieve(&mut farm, i, s),
        |_, branching, t| {
            let den: usize = branching.iter().product();
            leaves.push((rational(1, den), t));
        },
    )?;
    Ok(leaves)
}

/// D(s, i) for every server s, from the exhaustive PIR tree.
pub fn pir_tree_distribution(
    params: &CodeParams,
    msg: &Message,
    i: usize,
) -> Vec<Vec<BigRational>> {
    let (n, q) = (params.n(), params.lambda() + 1);
    let mut dist = vec![vec![BigRational::zero(); n]; q];
    for (p, t) in pir_leaves(params, msg, i).unwrap() {
        for sq in t.queries {
            dist[sq.server][sq.position - 1] += &p;
        }
    }
    dist
}

/// Independent D(s, i): a from-scratch local decoder walk (x_i first, then
/// uniform draws without replacement from i+1..=n until a symbol differs),
/// every slot-to-server bijection, and a uniform dummy for unused servers.
pub fn pir_oracle_distribution(word: &[usize], i: usize, q: usize) -> Vec<Vec<BigRational>> {
    let n = word.len();
    let mut leaves = Vec::new();
    let pool: Vec<usize> = (i + 1..=n).collect();
    decoder_leaves(word, i, pool, vec![i], BigRational::one(), &mut leaves);

    let perms = permutations(q);
    let per_perm = rational(1, perms.len());
    let mut dist = vec![vec![BigRational::zero(); n]; q];
    for (reads, p) in &leaves {
        for sigma in &perms {
            let weight = p * &per_perm;
            for (slot, &server) in sigma.iter().enumerate() {
                match reads.get(slot) {
                    Some(&pos) => dist[server][pos - 1] += &weight,
                    None => {
                        let each = &weight * rational(1, n);
                        for cell in dist[server].iter_mut() {
                            *cell += &each;
                        }
                    }
                }
            }
        }
    }
    dist
}

fn decoder_leaves(
    word: &[usize],
    i: usize,
    pool: Vec<usize>,
    reads: Vec<usize>,
    prob: BigRational,
    out: &mut Vec<(Vec<usize>, BigRational)>,
) {
    assert!(!pool.is_empty(), "decoder ran out of candidates");
    let branch = &prob * rational(1, pool.len());
    for (idx, &j) in pool.iter().enumerate() {
        let mut reads = reads.clone();
        reads.push(j);
        if word[j - 1] != word[i - 1] {
            out.push((reads, branch.clone()));
        } else {
            let mut rest = pool.clone();
            rest.remove(idx);
            decoder_leaves(word, i, rest, reads, branch.clone(), out);
        }
    }
}

fn permutations(q: usize) -> Vec<Vec<usize>> {
    if q == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(q - 1) {
        for at in 0..=p.len() {
            let mut v = p.clone();
            v.insert(at, q - 1);
            out.push(v);
        }
    }
    out
}

pub fn total_variation(p: &[BigRational], q: &[BigRational]) -> BigRational {
    let sum: BigRational = p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum();
    sum / rational(2, 1)
}
