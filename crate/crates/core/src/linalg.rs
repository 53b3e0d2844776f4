//! Exact linear algebra over the rationals and over the polynomial ring.
//!
//! Ranks come in two independent flavours: fraction-free (Bareiss) elimination
//! over the integers after clearing denominators, and plain rational Gaussian
//! elimination. The two are cross-checked in tests and by the homology-rank
//! callers.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::poly::{Polynomial, Rat};

/// Determinant of a square matrix of polynomials.
///
/// Laplace expansion with memoization over column subsets; exact and
/// division-free, fine for the desk-scale orders (N <= 12) used here.
pub fn poly_det(rows: &[Vec<Polynomial>]) -> Polynomial {
    let n = rows.len();
    assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
    let vars = if n == 0 { 1 } else { rows[0][0].vars() };
    if n == 0 {
        return Polynomial::one(vars);
    }
    // dp[mask] = determinant of the submatrix on rows 0..popcount(mask) and
    // the column set encoded by mask.
    let mut dp: Vec<Option<Polynomial>> = vec![None; 1 << n];
    dp[0] = Some(Polynomial::one(vars));
    for mask in 1usize..(1 << n) {
        let r = (mask.count_ones() - 1) as usize;
        let mut acc = Polynomial::zero(vars);
        let mut pos = 0usize;
        for j in 0..n {
            if mask & (1 << j) == 0 {
                continue;
            }
            let sub = dp[mask ^ (1 << j)]
                .as_ref()
                .expect("smaller masks filled first");
            if !rows[r][j].is_zero() && !sub.is_zero() {
                let term = &rows[r][j] * sub;
                if (r + pos).is_multiple_of(2) {
                    acc = &acc + &term;
                } else {
                    acc = &acc - &term;
                }
            }
            pos += 1;
        }
        dp[mask] = Some(acc);
    }
    dp[(1 << n) - 1].take().expect("full mask computed")
}

/// Determinant of a square rational matrix by exact Gaussian elimination.
#[allow(clippy::needless_range_loop)]
pub fn rat_det(mat: &[Vec<Rat>]) -> Rat {
    let n = mat.len();
    let mut m: Vec<Vec<Rat>> = mat.to_vec();
    let mut det = Rat::one();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero());
        let Some(p) = pivot else {
            return Rat::zero();
        };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        det *= m[col][col].clone();
        let inv = m[col][col].clone().recip();
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] * &inv;
            for c in col..n {
                let sub = &m[col][c] * &f;
                m[r][c] = &m[r][c] - &sub;
            }
        }
    }
    det
}

/// Rank by plain rational Gaussian elimination (the cross-check oracle).
#[allow(clippy::needless_range_loop)]
pub fn rat_rank(mat: &[Vec<Rat>]) -> usize {
    if mat.is_empty() || mat[0].is_empty() {
        return 0;
    }
    let rows = mat.len();
    let cols = mat[0].len();
    let mut m = mat.to_vec();
    let mut rank = 0;
    for col in 0..cols {
        let pivot = (rank..rows).find(|&r| !m[r][col].is_zero());
        let Some(p) = pivot else { continue };
        m.swap(p, rank);
        let inv = m[rank][col].clone().recip();
        for r in 0..rows {
            if r == rank || m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] * &inv;
            for c in col..cols {
                let sub = &m[rank][c] * &f;
                m[r][c] = &m[r][c] - &sub;
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Rank by fraction-free (Bareiss) elimination over the integers, after
/// clearing row denominators. Controls coefficient blow-up without leaving
/// exact arithmetic.
pub fn rank_fraction_free(mat: &[Vec<Rat>]) -> usize {
    if mat.is_empty() || mat[0].is_empty() {
        return 0;
    }
    let mut m: Vec<Vec<BigInt>> = mat
        .iter()
        .map(|row| {
            let lcm = row.iter().fold(BigInt::one(), |acc, v| {
                num_integer::lcm(acc, v.denom().clone())
            });
            row.iter().map(|v| v.numer() * (&lcm / v.denom())).collect()
        })
        .collect();
    let rows = m.len();
    let cols = m[0].len();
    let mut rank = 0usize;
    let mut prev = BigInt::one();
    for col in 0..cols {
        let pivot = (rank..rows).find(|&r| !m[r][col].is_zero());
        let Some(p) = pivot else { continue };
        m.swap(p, rank);
        let pivot_val = m[rank][col].clone();
        for r in rank + 1..rows {
            for c in col + 1..cols {
                let num = &pivot_val * &m[r][c] - &m[r][col] * &m[rank][c];
                m[r][c] = &num / &prev; // exact by the Bareiss identity
            }
            m[r][col] = BigInt::zero();
        }
        prev = pivot_val;
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Solve `A x = b` exactly; returns None when inconsistent.
/// When the system is underdetermined, free variables are set to zero.
#[allow(clippy::needless_range_loop)]
pub fn solve(mat: &[Vec<Rat>], rhs: &[Rat]) -> Option<Vec<Rat>> {
    let rows = mat.len();
    assert_eq!(rows, rhs.len());
    if rows == 0 {
        return Some(Vec::new());
    }
    let cols = mat[0].len();
    let mut m: Vec<Vec<Rat>> = mat
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut rank = 0usize;
    for col in 0..cols {
        let pivot = (rank..rows).find(|&r| !m[r][col].is_zero());
        let Some(p) = pivot else { continue };
        m.swap(p, rank);
        let inv = m[rank][col].clone().recip();
        for c in col..=cols {
            m[rank][c] = &m[rank][c] * &inv;
        }
        for r in 0..rows {
            if r == rank || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for c in col..=cols {
                let sub = &m[rank][c] * &f;
                m[r][c] = &m[r][c] - &sub;
            }
        }
        pivots.push((rank, col));
        rank += 1;
        if rank == rows {
            break;
        }
    }
    // inconsistent if a zero row has a nonzero rhs
    for r in rank..rows {
        if !m[r][cols].is_zero() {
            return None;
        }
    }
    let mut x = vec![Rat::zero(); cols];
    for (r, c) in pivots {
        x[c] = m[r][cols].clone();
    }
    Some(x)
}

/// Matrix product over the rationals.
pub fn mat_mul(a: &[Vec<Rat>], b: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let n = a.len();
    let k = b.len();
    let m = b[0].len();
    assert!(a.iter().all(|r| r.len() == k));
    let mut out = vec![vec![Rat::zero(); m]; n];
    for i in 0..n {
        for t in 0..k {
            if a[i][t].is_zero() {
                continue;
            }
            for j in 0..m {
                if b[t][j].is_zero() {
                    continue;
                }
                let add = &a[i][t] * &b[t][j];
                out[i][j] = &out[i][j] + &add;
            }
        }
    }
    out
}

pub fn is_zero_matrix(m: &[Vec<Rat>]) -> bool {
    m.iter().all(|r| r.iter().all(|v| v.is_zero()))
}
