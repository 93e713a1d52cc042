//! Exact rank computations for integer column vectors.
//!
//! Independence is decided over the rationals. The from-scratch check runs
//! fraction-free (Bareiss) elimination on big integers; the incremental
//! tableau works on primitive `i128` rows and falls back to the exact check
//! if an intermediate value would overflow.

use num_bigint::BigInt;

/// Rank of the matrix whose columns are `columns`, by Bareiss elimination.
pub(crate) fn exact_rank(columns: &[&[i64]], dimension: usize) -> usize {
    // Work on the transpose: one row per column vector. Rank is unchanged.
    let mut m: Vec<Vec<BigInt>> = columns
        .iter()
        .map(|c| c.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let rows = m.len();
    let zero = BigInt::from(0);
    let mut prev = BigInt::from(1);
    let mut rank = 0;
    for col in 0..dimension {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&r| m[r][col] != zero) else {
            continue;
        };
        m.swap(rank, pivot);
        for r in rank + 1..rows {
            for c in col + 1..dimension {
                let v = (&m[rank][col] * &m[r][c] - &m[r][col] * &m[rank][c]) / &prev;
                m[r][c] = v;
            }
            m[r][col] = zero.clone();
        }
        prev = m[rank][col].clone();
        rank += 1;
    }
    rank
}

/// Row-echelon tableau of the vectors inserted so far. Row `i` is zero at the
/// pivot positions of every earlier row.
#[derive(Debug, Clone, Default)]
pub(crate) struct Echelon {
    rows: Vec<(usize, Vec<i128>)>,
    overflowed: bool,
}

impl Echelon {
    pub(crate) fn new() -> Self {
        Self::default()
    }

    /// Residual of `column` after elimination against the tableau, or `None`
    /// on overflow.
    fn reduce(&self, column: &[i64]) -> Option<Vec<i128>> {
        let mut v: Vec<i128> = column.iter().map(|&x| x as i128).collect();
        for (pivot, row) in &self.rows {
            let factor = v[*pivot];
            if factor == 0 {
                continue;
            }
            let scale = row[*pivot];
            for (x, &r) in v.iter_mut().zip(row) {
                *x = scale.checked_mul(*x)?.checked_sub(factor.checked_mul(r)?)?;
            }
            make_primitive(&mut v);
        }
        Some(v)
    }

    /// `Some(true)` if `column` lies outside the current span; `None` when the
    /// answer could not be computed in fixed width.
    pub(crate) fn is_outside_span(&self, column: &[i64]) -> Option<bool> {
        if self.overflowed {
            return None;
        }
        self.reduce(column).map(|v| v.iter().any(|&x| x != 0))
    }

    /// Appends `column` (assumed outside the span). Marks the tableau as
    /// overflowed if the residual cannot be represented.
    pub(crate) fn push(&mut self, column: &[i64]) {
        if self.overflowed {
            return;
        }
        match self.reduce(column) {
            Some(v) => {
                if let Some(pivot) = v.iter().position(|&x| x != 0) {
                    self.rows.push((pivot, v));
                }
            }
            None => self.overflowed = true,
        }
    }
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn make_primitive(v: &mut [i128]) {
    let g = v.iter().fold(0, |g, &x| gcd(g, x));
    if g > 1 {
        for x in v.iter_mut() {
            *x /= g;
        }
    }
}
