//! Exact integer linear algebra on small symmetric forms.
//!
//! Everything here works over `BigInt` or exact rationals so that no check in
//! the crate ever depends on a floating point tolerance.

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Leading principal minors of `m`, computed by fraction-free (Bareiss)
/// elimination. Elimination stops at the first vanishing minor; the returned
/// vector then ends with that zero.
pub fn leading_minors(m: &[Vec<i64>]) -> Vec<BigInt> {
    let n = m.len();
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut minors = Vec::with_capacity(n);
    let mut prev = BigInt::one();
    for k in 0..n {
        let pivot = a[k][k].clone();
        minors.push(pivot.clone());
        if pivot.is_zero() {
            break;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let v = (&a[i][j] * &pivot - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = pivot;
    }
    minors
}

/// Determinant by Bareiss elimination with row pivoting.
pub fn determinant(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        return BigInt::one();
    }
    sign * &a[n - 1][n - 1]
}

/// Checks that the symmetric matrix `m` is negative definite.
///
/// Returns the (1-based) size of the first leading minor of `-m` that is not
/// strictly positive, or `None` when `m` is negative definite. The empty
/// matrix counts as negative definite.
pub fn first_non_negative_definite_minor(m: &[Vec<i64>]) -> Option<usize> {
    let neg: Vec<Vec<i64>> = m.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
    let minors = leading_minors(&neg);
    minors.iter().position(|d| !d.is_positive()).map(|k| k + 1)
}

pub fn is_negative_definite(m: &[Vec<i64>]) -> bool {
    first_non_negative_definite_minor(m).is_none()
}

/// Bilinear pairing `aᵀ G b`.
pub fn pair(gram: &[Vec<i64>], a: &[i64], b: &[i64]) -> i64 {
    let mut acc = 0i64;
    for (i, ai) in a.iter().enumerate() {
        if *ai == 0 {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            acc += ai * gram[i][j] * bj;
        }
    }
    acc
}

/// Solves `G x = rhs` exactly. Returns `None` if `G` is singular or the
/// solution is not integral.
pub fn solve_integral(gram: &[Vec<i64>], rhs: &[i64]) -> Option<Vec<i64>> {
    let n = gram.len();
    type Q = Ratio<i128>;
    let mut a: Vec<Vec<Q>> = gram
        .iter()
        .zip(rhs)
        .map(|(row, &r)| {
            let mut v: Vec<Q> = row.iter().map(|&x| Q::from_integer(x as i128)).collect();
            v.push(Q::from_integer(r as i128));
            v
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let p = a[col][col];
        for x in a[col].iter_mut() {
            *x /= p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col];
                let pivot_row = a[col].clone();
                for (x, p) in a[r][col..].iter_mut().zip(&pivot_row[col..]) {
                    *x -= f * p;
                }
            }
        }
    }
    a.iter()
        .map(|row| {
            let v = row[n];
            if v.is_integer() {
                v.to_integer().to_i64()
            } else {
                None
            }
        })
        .collect()
}
