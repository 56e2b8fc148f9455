//! Exact linear algebra over a field, for rank computations on sign patterns.

use num_rational::Ratio;
use num_traits::Num;

/// Rank of the row set by Gaussian elimination. Exact whenever `F` is an
/// exact field such as [`Ratio<i64>`].
pub fn rank<F: Num + Clone>(rows: &[Vec<F>]) -> usize {
    let mut m: Vec<Vec<F>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let lead = m[rank][col].clone();
        for r in 0..m.len() {
            if r == rank || m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone() / lead.clone();
            let pivot_row = m[rank].clone();
            for (x, p) in m[r].iter_mut().zip(pivot_row).skip(col) {
                *x = x.clone() - factor.clone() * p;
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// Rank over the rationals of integer vectors.
pub fn integer_rank(rows: &[Vec<i64>]) -> usize {
    let rational: Vec<Vec<Ratio<i64>>> =
        rows.iter().map(|r| r.iter().map(|&x| Ratio::from_integer(x)).collect()).collect();
    rank(&rational)
}

pub fn integer_dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
