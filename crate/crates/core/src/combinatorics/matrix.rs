use std::fmt;

use crate::error::{Error, Result};
use crate::word::ceil_div;

/// A square 0/1 matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryMatrix {
    order: usize,
    entries: Vec<bool>,
}

impl BinaryMatrix {
    pub fn from_fn(order: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut entries = Vec::with_capacity(order * order);
        for i in 0..order {
            for j in 0..order {
                entries.push(f(i, j));
            }
        }
        BinaryMatrix { order, entries }
    }

    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let order = rows.len();
        let mut entries = Vec::with_capacity(order * order);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != order {
                return Err(Error::InvalidParams(format!(
                    "row {i} has {} entries, expected {order}",
                    row.len()
                )));
            }
            for &v in row {
                match v {
                    0 => entries.push(false),
                    1 => entries.push(true),
                    _ => return Err(Error::InvalidParams(format!("entry {v} is not 0/1"))),
                }
            }
        }
        Ok(BinaryMatrix { order, entries })
    }

    pub fn ones(order: usize) -> Self {
        Self::from_fn(order, |_, _| true)
    }

    pub fn identity(order: usize) -> Self {
        Self::from_fn(order, |i, j| i == j)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Entry at 0-based (row, col).
    pub fn get(&self, row: usize, col: usize) -> bool {
        self.entries[row * self.order + col]
    }

    pub fn row(&self, row: usize) -> &[bool] {
        &self.entries[row * self.order..(row + 1) * self.order]
    }

    pub fn row_sums(&self) -> Vec<usize> {
        (0..self.order)
            .map(|i| self.row(i).iter().filter(|&&b| b).count())
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.order).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Kronecker product with the all-ones λ×λ block: every entry becomes a
    /// λ×λ block of itself.
    pub fn tensor_ones(&self, lambda: usize) -> Self {
        Self::from_fn(self.order * lambda, |i, j| self.get(i / lambda, j / lambda))
    }

    /// Rows as 0/1 bytes.
    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.order)
            .map(|i| self.row(i).iter().map(|&b| u8::from(b)).collect())
            .collect()
    }
}

impl fmt::Display for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.order {
            let line: Vec<&str> = self
                .row(i)
                .iter()
                .map(|&b| if b { "1" } else { "0" })
                .collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// The band matrix A^(λ,n,d): entry (i,j) (1-based) is 1 iff
/// |⌈i/λ⌉ − ⌈j/λ⌉| ≤ d. Its permanent is (λ!)^m times the ball volume.
pub fn build_matrix(lambda: usize, n: usize, d: usize) -> Result<BinaryMatrix> {
    if lambda == 0 || n == 0 || n % lambda != 0 {
        return Err(Error::InvalidParams(format!(
            "lambda={lambda} must be positive and divide n={n}"
        )));
    }
    Ok(BinaryMatrix::from_fn(n, |i, j| {
        ceil_div(i + 1, lambda).abs_diff(ceil_div(j + 1, lambda)) <= d
    }))
}

/// Row sum r_i of A^(1,m,d), 1-based i.
///
/// The three cases are d+i (i ≤ d), 2d+1 (d < i ≤ m−d) and m−i+1+d
/// (i > m−d). They only partition [1, m] when 2d ≤ m; past that the band
/// hits both edges and the sum is min(i+d, m) − max(i−d, 1) + 1.
pub fn band_row_sum(m: usize, d: usize, i: usize) -> usize {
    assert!((1..=m).contains(&i), "row {i} outside [1, {m}]");
    if 2 * d > m {
        return (i + d).min(m) - i.saturating_sub(d).max(1) + 1;
    }
    if i <= d {
        d + i
    } else if i <= m - d {
        2 * d + 1
    } else {
        m - i + 1 + d
    }
}
