//! Exact dense linear algebra over the coefficient field.

use crate::exactnum::FieldElem;

pub type Matrix = Vec<Vec<FieldElem>>;

/// Rank by fraction-free (Bareiss) elimination, first nonzero pivot in
/// column order.
pub fn rank(m: &[Vec<FieldElem>]) -> usize {
    let mut a: Matrix = m.to_vec();
    let rows = a.len();
    if rows == 0 {
        return 0;
    }
    let cols = a[0].len();
    let mut prev = FieldElem::one();
    let mut r = 0;
    for col in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..rows {
            for j in col + 1..cols {
                let num = &(&a[r][col] * &a[i][j]) - &(&a[i][col] * &a[r][j]);
                a[i][j] = num.div(&prev).expect("Bareiss divisor is a previous pivot");
            }
            a[i][col] = FieldElem::zero();
        }
        prev = a[r][col].clone();
        r += 1;
    }
    r
}

/// Determinant by Bareiss elimination.
pub fn det(m: &[Vec<FieldElem>]) -> FieldElem {
    let n = m.len();
    let mut a: Matrix = m.to_vec();
    let mut prev = FieldElem::one();
    let mut sign = false;
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return FieldElem::zero();
        };
        if p != k {
            a.swap(k, p);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num.div(&prev).expect("Bareiss divisor is a previous pivot");
            }
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        return FieldElem::one();
    }
    if sign {
        -&a[n - 1][n - 1]
    } else {
        a[n - 1][n - 1].clone()
    }
}

pub fn inverse(m: &[Vec<FieldElem>]) -> Option<Matrix> {
    let n = m.len();
    let mut a: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { FieldElem::one() } else { FieldElem::zero() }));
            r
        })
        .collect();
    for k in 0..n {
        let p = (k..n).find(|&i| !a[i][k].is_zero())?;
        a.swap(k, p);
        let inv = a[k][k].inv().ok()?;
        for x in a[k].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..n {
            if i != k && !a[i][k].is_zero() {
                let f = a[i][k].clone();
                for j in 0..2 * n {
                    let t = &f * &a[k][j];
                    a[i][j] = &a[i][j] - &t;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Basis of the right nullspace {v : m v = 0}.
pub fn nullspace(m: &[Vec<FieldElem>], cols: usize) -> Vec<Vec<FieldElem>> {
    let mut a: Matrix = m.to_vec();
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][col].inv().expect("nonzero pivot");
        for x in a[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in col..cols {
                    let t = &f * &a[r][j];
                    a[i][j] = &a[i][j] - &t;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![FieldElem::zero(); cols];
            v[f] = FieldElem::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -&a[row][f];
            }
            v
        })
        .collect()
}

pub fn mat_mul(a: &[Vec<FieldElem>], b: &[Vec<FieldElem>]) -> Matrix {
    let n = a.len();
    let k = b.len();
    let m = if k == 0 { 0 } else { b[0].len() };
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let mut acc = FieldElem::zero();
                    for t in 0..k {
                        if !a[i][t].is_zero() && !b[t][j].is_zero() {
                            acc = &acc + &(&a[i][t] * &b[t][j]);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn transpose(a: &[Vec<FieldElem>]) -> Matrix {
    if a.is_empty() {
        return vec![];
    }
    (0..a[0].len()).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}
