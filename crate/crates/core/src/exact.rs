//! Exact integer linear algebra.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Rank over the rationals by fraction-free (Bareiss) elimination.
///
/// Every division is exact; a nonzero remainder means the elimination
/// invariant broke and is reported as an error.
pub fn bareiss_rank(matrix: &[Vec<i64>]) -> Result<usize> {
    let nrows = matrix.len();
    let ncols = matrix.first().map_or(0, Vec::len);
    if matrix.iter().any(|r| r.len() != ncols) {
        return Err(Error::Structure("ragged matrix".to_string()));
    }
    let mut m: Vec<Vec<BigInt>> = matrix
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(pivot) = (rank..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let (top, rest) = m.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        let p = &pivot_row[col];
        for row in rest.iter_mut() {
            let factor = std::mem::take(&mut row[col]);
            if factor.is_zero() {
                // (p·x − 0·y) / prev
                for x in row[col + 1..].iter_mut() {
                    *x = exact_div(&(&*x * p), &prev)?;
                }
                continue;
            }
            for (x, y) in row[col + 1..].iter_mut().zip(&pivot_row[col + 1..]) {
                let num = &*x * p - &factor * y;
                *x = exact_div(&num, &prev)?;
            }
        }
        prev = m[rank][col].clone();
        rank += 1;
    }
    Ok(rank)
}

fn exact_div(num: &BigInt, den: &BigInt) -> Result<BigInt> {
    let q = num / den;
    if &q * den != *num {
        return Err(Error::Structure("inexact division in Bareiss elimination".to_string()));
    }
    Ok(q)
}

/// Dense integer matrix product.
pub fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            let mut out = vec![0i64; n];
            for (k, &x) in row.iter().enumerate() {
                if x != 0 {
                    for (o, &y) in out.iter_mut().zip(&b[k]) {
                        *o += x * y;
                    }
                }
            }
            out
        })
        .collect()
}
