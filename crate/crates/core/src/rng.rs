//! Seeded randomness for the local decoder, the channel and the PIR client.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Supplies the index choices of a sampling-without-replacement walk.
///
/// `pick(remaining)` returns a value in `0..remaining`; the caller maps it
/// onto the not-yet-drawn candidates. Anything that replays the same picks
/// replays the same transcript.
pub trait QuerySampler {
    fn pick(&mut self, remaining: usize) -> usize;
}

/// A replayable pseudo-random stream (ChaCha8) identified by its seed.
#[derive(Debug, Clone)]
pub struct RandomSource {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        RandomSource {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Uniform in `0..bound`.
    pub fn below(&mut self, bound: usize) -> usize {
        self.rng.random_range(0..bound)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.random()
    }

    /// Fisher–Yates shuffle of `0..len`.
    pub fn permutation(&mut self, len: usize) -> Vec<usize> {
        shuffle(len, self)
    }

    /// Independent child stream number `index`; see [`split_seed`].
    pub fn split(&self, index: u64) -> RandomSource {
        RandomSource::new(split_seed(self.seed, index))
    }
}

impl QuerySampler for RandomSource {
    fn pick(&mut self, remaining: usize) -> usize {
        self.below(remaining)
    }
}

/// Fisher–Yates shuffle of `0..len` driven by `sampler`.
pub fn shuffle<S: QuerySampler + ?Sized>(len: usize, sampler: &mut S) -> Vec<usize> {
    let mut p: Vec<usize> = (0..len).collect();
    for i in (1..len).rev() {
        let j = sampler.pick(i + 1);
        p.swap(i, j);
    }
    p
}

/// Per-trial seed derivation: `splitmix64(master + (index + 1)·φ)` where φ is
/// the 64-bit golden-ratio increment. Trial streams depend only on the master
/// seed and the trial index, never on scheduling.
pub fn split_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Replays a fixed list of picks, then records any picks requested past its
/// end (answering 0). Drives exhaustive walks of the randomness tree.
#[derive(Debug, Clone, Default)]
pub struct ScriptedSampler {
    script: Vec<usize>,
    cursor: usize,
    branching: Vec<usize>,
}

impl ScriptedSampler {
    pub fn new(script: Vec<usize>) -> Self {
        ScriptedSampler {
            script,
            cursor: 0,
            branching: Vec::new(),
        }
    }

    /// Picks actually made, including the zeros appended past the script.
    pub fn picks(&self) -> &[usize] {
        &self.script[..self.cursor]
    }

    /// The `remaining` argument seen at each pick.
    pub fn branching(&self) -> &[usize] {
        &self.branching
    }
}

impl QuerySampler for ScriptedSampler {
    fn pick(&mut self, remaining: usize) -> usize {
        if self.cursor == self.script.len() {
            self.script.push(0);
        }
        let c = self.script[self.cursor];
        assert!(c < remaining, "scripted pick {c} out of range {remaining}");
        self.cursor += 1;
        self.branching.push(remaining);
        c
    }
}

/// Odometer over every pick sequence of a deterministic procedure.
///
/// `run` is called with a fresh [`ScriptedSampler`] per leaf; the visitor
/// receives the leaf's picks, its branching factors and `run`'s output.
/// Leaves are visited in lexicographic pick order.
pub fn walk_pick_tree<T, E>(
    mut run: impl FnMut(&mut ScriptedSampler) -> Result<T, E>,
    mut visit: impl FnMut(&[usize], &[usize], T),
) -> Result<(), E> {
    let mut script = Vec::new();
    loop {
        let mut sampler = ScriptedSampler::new(script);
        let out = run(&mut sampler)?;
        let picks = sampler.picks().to_vec();
        let branching = sampler.branching().to_vec();
        visit(&picks, &branching, out);

        let mut next = picks;
        loop {
            match next.len().checked_sub(1) {
                None => return Ok(()),
                Some(last) => {
                    if next[last] + 1 < branching[last] {
                        next[last] += 1;
                        break;
                    }
                    next.pop();
                }
            }
        }
        script = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let mut a = RandomSource::new(42);
        let mut b = RandomSource::new(42);
        let xs: Vec<_> = (0..32).map(|_| a.below(1000)).collect();
        let ys: Vec<_> = (0..32).map(|_| b.below(1000)).collect();
        assert_eq!(xs, ys);
        assert_ne!(split_seed(42, 0), split_seed(42, 1));
        assert_eq!(a.split(7).seed(), split_seed(42, 7));
    }

    #[test]
    fn permutation_is_bijection() {
        let mut r = RandomSource::new(1);
        let mut p = r.permutation(9);
        p.sort();
        assert_eq!(p, (0..9).collect::<Vec<_>>());
    }

    #[test]
    fn pick_tree_visits_every_leaf() {
        // Two picks without replacement from 3 items: 3·2 leaves.
        let mut leaves = Vec::new();
        walk_pick_tree::<_, ()>(
            |s| {
                let a = s.pick(3);
                let b = s.pick(2);
                Ok((a, b))
            },
            |picks, branching, out| {
                assert_eq!(branching, &[3, 2]);
                leaves.push((picks.to_vec(), out));
            },
        )
        .unwrap();
        assert_eq!(leaves.len(), 6);
        assert_eq!(leaves[0].0, vec![0, 0]);
        assert_eq!(leaves[5].0, vec![2, 1]);
    }

    #[test]
    fn pick_tree_variable_depth() {
        // Stop after the first pick when it is nonzero.
        let mut count = 0;
        walk_pick_tree::<_, ()>(
            |s| {
                if s.pick(3) == 0 {
                    s.pick(2);
                }
                Ok(())
            },
            |_, _, _| count += 1,
        )
        .unwrap();
        assert_eq!(count, 2 + 2);
    }
}
