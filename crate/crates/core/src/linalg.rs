//! Small dense exact linear algebra: elimination, rank, solving, nullspaces,
//! Gram matrices and orthogonal projections. Matrices are row-major
//! `Vec<Vec<Rat>>`; everything is fraction-free only in spirit (BigRational
//! normalizes each entry), which is fine at the problem sizes this crate
//! targets.

use crate::rational::{dot, zeros, QMat, QVec, Rat};
use num::{One, Zero};

pub fn identity(n: usize) -> QMat {
    let mut m = vec![zeros(n); n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Rat::one();
    }
    m
}

pub fn transpose(m: &[QVec]) -> QMat {
    if m.is_empty() {
        return Vec::new();
    }
    let rows = m.len();
    let cols = m[0].len();
    let mut t = vec![zeros(rows); cols];
    for i in 0..rows {
        for j in 0..cols {
            t[j][i] = m[i][j].clone();
        }
    }
    t
}

pub fn mat_vec(m: &[QVec], v: &[Rat]) -> QVec {
    m.iter().map(|row| dot(row, v)).collect()
}

pub fn mat_mul(a: &[QVec], b: &[QVec]) -> QMat {
    let bt = transpose(b);
    a.iter()
        .map(|row| bt.iter().map(|col| dot(row, col)).collect())
        .collect()
}

/// In-place reduced row echelon form. Returns the pivot column per pivot row.
pub fn rref(m: &mut QMat) -> Vec<usize> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let t = &m[r][j] * &f;
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[QVec]) -> usize {
    let mut m: QMat = rows.to_vec();
    rref(&mut m).len()
}

/// Basis of the nullspace {x : M x = 0}, one vector per free column.
pub fn nullspace(m: &[QVec], cols: usize) -> Vec<QVec> {
    let mut a: QMat = m.to_vec();
    let pivots = rref(&mut a);
    let pivot_set: Vec<bool> = {
        let mut s = vec![false; cols];
        for &c in &pivots {
            s[c] = true;
        }
        s
    };
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_set[free] {
            continue;
        }
        let mut v = zeros(cols);
        v[free] = Rat::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -a[r][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Solve M x = b exactly. Returns None when inconsistent; free variables are
/// set to zero so the answer is deterministic.
pub fn solve(m: &[QVec], b: &[Rat]) -> Option<QVec> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut aug: QMat = m
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    // a pivot in the rhs column marks inconsistency
    if pivots.last().is_some_and(|&c| c == cols) {
        return None;
    }
    let mut x = zeros(cols);
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[r][cols].clone();
    }
    Some(x)
}

/// Inverse of a square matrix, if it exists.
pub fn inverse(m: &[QVec]) -> Option<QMat> {
    let n = m.len();
    let mut aug: QMat = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend(zeros(n));
            r[n + i] = Rat::one();
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots.iter().any(|&c| c >= n) {
        return None;
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Gram matrix B^T B for column vectors given as rows of `basis`.
pub fn gram(basis_rows: &[QVec]) -> QMat {
    basis_rows
        .iter()
        .map(|a| basis_rows.iter().map(|b| dot(a, b)).collect())
        .collect()
}

/// Orthogonal projection of `v` onto span of the given (row) vectors.
pub fn project_onto_span(span_rows: &[QVec], v: &[Rat]) -> QVec {
    if span_rows.is_empty() {
        return zeros(v.len());
    }
    let g = gram(span_rows);
    let rhs: QVec = span_rows.iter().map(|r| dot(r, v)).collect();
    // Gram system is consistent even when the spanning rows are dependent.
    let coeff = solve(&g, &rhs).expect("gram system is always consistent");
    let mut out = zeros(v.len());
    for (c, row) in coeff.iter().zip(span_rows) {
        for (o, x) in out.iter_mut().zip(row) {
            *o += c * x;
        }
    }
    out
}
