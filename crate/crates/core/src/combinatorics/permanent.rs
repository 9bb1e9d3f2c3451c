use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};

use super::matrix::BinaryMatrix;
use crate::error::{Error, Result};

/// Largest order accepted by [`permanent_naive`].
pub const NAIVE_MAX_ORDER: usize = 10;
/// Default largest order accepted by [`permanent_ryser`].
pub const RYSER_MAX_ORDER: usize = 28;

/// per A = Σ_{π ∈ S_n} Π_i a_{i,π(i)}, summed term by term.
///
/// Depth-first over rows; a branch stops as soon as its product is zero.
pub fn permanent_naive(a: &BinaryMatrix) -> Result<BigUint> {
    let n = a.order();
    if n > NAIVE_MAX_ORDER {
        return Err(Error::OrderTooLarge {
            order: n,
            max: NAIVE_MAX_ORDER,
        });
    }
    fn count(a: &BinaryMatrix, row: usize, used: u32) -> u64 {
        if row == a.order() {
            return 1;
        }
        (0..a.order())
            .filter(|&c| used & (1 << c) == 0 && a.get(row, c))
            .map(|c| count(a, row + 1, used | (1 << c)))
            .sum()
    }
    Ok(BigUint::from(count(a, 0, 0)))
}

pub fn permanent_ryser(a: &BinaryMatrix) -> Result<BigUint> {
    permanent_ryser_capped(a, RYSER_MAX_ORDER)
}

/// Ryser's inclusion–exclusion formula
///
/// per A = (−1)^n Σ_{S ⊆ cols} (−1)^{|S|} Π_i Σ_{j∈S} a_ij
///
/// walking subsets in Gray-code order so each step adds or removes one
/// column from the running row sums. O(2^n · n).
pub fn permanent_ryser_capped(a: &BinaryMatrix, max_order: usize) -> Result<BigUint> {
    let n = a.order();
    if n > max_order || n >= 63 {
        return Err(Error::OrderTooLarge {
            order: n,
            max: max_order.min(62),
        });
    }
    if n == 0 {
        return Ok(BigUint::from(1u32));
    }

    // Column-major copy so a column flip touches contiguous memory.
    let cols: Vec<Vec<bool>> = (0..n)
        .map(|j| (0..n).map(|i| a.get(i, j)).collect())
        .collect();
    let mut row_sums = vec![0i64; n];
    let mut zero_rows = n;
    let mut in_set = vec![false; n];
    let mut set_size = 0usize;

    let mut fast: i128 = 0;
    let mut slow = BigInt::zero();

    for step in 1u64..(1u64 << n) {
        let col = step.trailing_zeros() as usize;
        let delta = if in_set[col] { -1 } else { 1 };
        in_set[col] = !in_set[col];
        if delta > 0 {
            set_size += 1;
        } else {
            set_size -= 1;
        }
        for (i, &hit) in cols[col].iter().enumerate() {
            if hit {
                let before = row_sums[i];
                row_sums[i] += delta;
                if before == 0 {
                    zero_rows -= 1;
                } else if row_sums[i] == 0 {
                    zero_rows += 1;
                }
            }
        }
        if zero_rows > 0 {
            continue;
        }

        let negative = (n - set_size) % 2 == 1;
        match row_product_i128(&row_sums) {
            Some(p) => {
                let term = if negative { -p } else { p };
                match fast.checked_add(term) {
                    Some(v) => fast = v,
                    None => {
                        slow += BigInt::from(fast) + BigInt::from(term);
                        fast = 0;
                    }
                }
            }
            None => {
                let p: BigInt = row_sums.iter().map(|&s| BigInt::from(s)).product();
                if negative {
                    slow -= p;
                } else {
                    slow += p;
                }
            }
        }
    }

    let total = slow + BigInt::from(fast);
    debug_assert!(!total.is_negative());
    Ok(total
        .to_biguint()
        .expect("permanent of a 0/1 matrix is nonnegative"))
}

fn row_product_i128(sums: &[i64]) -> Option<i128> {
    sums.iter()
        .try_fold(1i128, |acc, &s| acc.checked_mul(i128::from(s)))
}
