//! Dense real linear algebra: cyclic Jacobi eigensolver, one-sided Jacobi
//! SVD, implicit QL for tridiagonal matrices and a canonical-orthogonalization
//! solver for generalized symmetric eigenproblems.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use crate::error::invalid;
use crate::fmath::{abs, copysign, hypot, sqrt};
use crate::{Error, Result};

/// Sweep limit for both Jacobi variants.
const MAX_SWEEPS: usize = 100;

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(invalid!("matrix data has {} entries, expected {rows}×{cols}", data.len()));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn frobenius_norm(&self) -> f64 {
        sqrt(self.data.iter().map(|v| v * v).sum())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(abs(*v)))
    }

    pub fn scale(&mut self, factor: f64) {
        for v in &mut self.data {
            *v *= factor;
        }
    }

    /// `self · other`.
    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == 0.0 {
                    continue;
                }
                let b_row = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        out
    }

    /// `self · selfᵀ`.
    pub fn gram_rows(&self) -> Matrix {
        let n = self.rows;
        let mut out = Matrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = dot(self.row(i), self.row(j));
                out[(i, j)] = v;
                out[(j, i)] = v;
            }
        }
        out
    }

    /// Largest `|a_ij − sign·a_ji|`.
    pub fn symmetry_defect(&self, sign: f64) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols.min(self.rows) {
                worst = worst.max(abs(self[(i, j)] - sign * self[(j, i)]));
            }
        }
        worst
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])])
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Eigenvalues (descending) and, optionally, eigenvectors stored as columns.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    pub vectors: Option<Matrix>,
}

/// Cyclic Jacobi diagonalization of a real symmetric matrix.
///
/// Sweeps rotate every off-diagonal pair in row order until the off-diagonal
/// Frobenius norm drops below `1e-14·‖A‖_F`. Results are sorted descending.
pub fn symmetric_eigen(a: &Matrix, with_vectors: bool) -> Result<SymmetricEigen> {
    if !a.is_square() {
        return Err(invalid!("eigenproblem needs a square matrix"));
    }
    let n = a.rows;
    let mut m = a.clone();
    let mut v = with_vectors.then(|| Matrix::identity(n));
    let norm = a.frobenius_norm();
    let threshold = 1e-14 * norm;

    let mut converged = n < 2 || norm == 0.0;
    let mut sweeps = 0;
    while !converged {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NonConvergence {
                routine: "cyclic Jacobi",
                detail: alloc::format!("off-diagonal norm {:e} after {MAX_SWEEPS} sweeps", off_norm(&m)),
            });
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate_pair(&mut m, v.as_mut(), p, q);
            }
        }
        sweeps += 1;
        converged = off_norm(&m) <= threshold;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(j, j)].total_cmp(&m[(i, i)]));
    let values = order.iter().map(|&i| m[(i, i)]).collect();
    let vectors = v.map(|v| Matrix::from_fn(n, n, |r, c| v[(r, order[c])]));
    Ok(SymmetricEigen { values, vectors })
}

fn off_norm(m: &Matrix) -> f64 {
    let n = m.rows;
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += m[(i, j)] * m[(i, j)];
            }
        }
    }
    sqrt(s)
}

fn rotate_pair(m: &mut Matrix, v: Option<&mut Matrix>, p: usize, q: usize) {
    let apq = m[(p, q)];
    if apq == 0.0 {
        return;
    }
    let app = m[(p, p)];
    let aqq = m[(q, q)];
    let theta = (aqq - app) / (2.0 * apq);
    let t = copysign(1.0, theta) / (abs(theta) + hypot(theta, 1.0));
    let c = 1.0 / hypot(t, 1.0);
    let s = t * c;
    let n = m.rows;
    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = m[(k, p)];
        let akq = m[(k, q)];
        let new_kp = c * akp - s * akq;
        let new_kq = s * akp + c * akq;
        m[(k, p)] = new_kp;
        m[(p, k)] = new_kp;
        m[(k, q)] = new_kq;
        m[(q, k)] = new_kq;
    }
    m[(p, p)] = app - t * apq;
    m[(q, q)] = aqq + t * apq;
    m[(p, q)] = 0.0;
    m[(q, p)] = 0.0;
    if let Some(v) = v {
        for k in 0..n {
            let vkp = v[(k, p)];
            let vkq = v[(k, q)];
            v[(k, p)] = c * vkp - s * vkq;
            v[(k, q)] = s * vkp + c * vkq;
        }
    }
}

/// Singular values (descending) by one-sided Jacobi on the rows of `a`.
///
/// Pairs of rows are rotated until every pair is orthogonal to relative
/// precision `1e-15`; the singular values are then the row norms. Small
/// singular values come out with absolute error near `ε‖A‖`, so their squares
/// sit far below the floor of a Gram-matrix eigensolve.
pub fn singular_values(a: &Matrix) -> Result<Vec<f64>> {
    let mut w = a.clone();
    let n = w.rows;
    let cols = w.cols;
    let tol = 1e-15;
    let mut sweeps = 0;
    loop {
        let mut rotated = false;
        for i in 0..n.saturating_sub(1) {
            for j in i + 1..n {
                let (alpha, beta, gamma) = {
                    let ri = w.row(i);
                    let rj = w.row(j);
                    (dot(ri, ri), dot(rj, rj), dot(ri, rj))
                };
                // Rows whose squared norm underflows cannot be rotated further.
                if gamma == 0.0 || alpha == 0.0 || beta == 0.0 || abs(gamma) <= tol * sqrt(alpha * beta) {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = copysign(1.0, zeta) / (abs(zeta) + hypot(zeta, 1.0));
                let c = 1.0 / hypot(t, 1.0);
                let s = c * t;
                for k in 0..cols {
                    let x = w.data[i * cols + k];
                    let y = w.data[j * cols + k];
                    w.data[i * cols + k] = c * x - s * y;
                    w.data[j * cols + k] = s * x + c * y;
                }
            }
        }
        sweeps += 1;
        if !rotated {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NonConvergence {
                routine: "one-sided Jacobi SVD",
                detail: alloc::format!("{n}×{cols} matrix still rotating after {MAX_SWEEPS} sweeps"),
            });
        }
    }
    let mut values: Vec<f64> = (0..n).map(|i| sqrt(dot(w.row(i), w.row(i)))).collect();
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(values)
}

/// Row groups of `a` that share no nonzero column with any other group.
///
/// Each block is `(rows, cols)`; `a` restricted to the block rows is zero
/// outside the block columns, so the singular values of `a` are the union of
/// the block singular values. All-zero rows form no block.
pub fn coupled_blocks(a: &Matrix) -> Vec<(Vec<usize>, Vec<usize>)> {
    let n = a.rows;
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for j in 0..a.cols {
        let mut first: Option<usize> = None;
        for i in 0..n {
            if a[(i, j)] != 0.0 {
                match first {
                    None => first = Some(i),
                    Some(f) => {
                        let (ra, rb) = (find(&mut parent, f), find(&mut parent, i));
                        if ra != rb {
                            parent[rb] = ra;
                        }
                    }
                }
            }
        }
    }
    let mut blocks: Vec<(usize, Vec<usize>, Vec<usize>)> = Vec::new();
    for i in 0..n {
        if a.row(i).iter().all(|v| *v == 0.0) {
            continue;
        }
        let root = find(&mut parent, i);
        match blocks.iter_mut().find(|b| b.0 == root) {
            Some(b) => b.1.push(i),
            None => blocks.push((root, vec![i], Vec::new())),
        }
    }
    for block in &mut blocks {
        block.2 = (0..a.cols).filter(|&j| block.1.iter().any(|&i| a[(i, j)] != 0.0)).collect();
    }
    blocks.into_iter().map(|(_, r, c)| (r, c)).collect()
}

/// Singular values of `a`, computed block by block over [`coupled_blocks`].
/// The result has `a.rows()` entries, zero rows contributing zeros.
pub fn blocked_singular_values(a: &Matrix) -> Result<Vec<f64>> {
    let mut values = Vec::with_capacity(a.rows);
    for (rows, cols) in coupled_blocks(a) {
        let sub = a.submatrix(&rows, &cols);
        // Rotating the shorter dimension is cheaper; singular values agree.
        let sub = if sub.rows > sub.cols { sub.transpose() } else { sub };
        let sv = singular_values(&sub)?;
        let pad = rows.len() - sv.len();
        values.extend(sv);
        values.extend(core::iter::repeat_n(0.0, pad));
    }
    values.resize(a.rows, 0.0);
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(values)
}

/// Eigenvalues (ascending) of the symmetric tridiagonal matrix with diagonal
/// `diag` and off-diagonal `off` (`off[k]` couples `k` and `k+1`), by the
/// implicit QL method with Wilkinson shifts.
pub fn tridiagonal_eigenvalues(diag: &[f64], off: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut e = vec![0.0; n];
    e[..n.saturating_sub(1)].copy_from_slice(&off[..n.saturating_sub(1)]);

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = abs(d[m]) + abs(d[m + 1]);
                if abs(e[m]) <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            if iter == 60 {
                return Err(Error::NonConvergence {
                    routine: "tridiagonal QL",
                    detail: alloc::format!("eigenvalue {l} of {n} after 60 iterations"),
                });
            }
            iter += 1;
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + copysign(r, g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = hypot(f, g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(|a, b| a.total_cmp(b));
    Ok(d)
}

/// Lowest eigenpair data of the generalized problem `H c = E S c`.
#[derive(Debug, Clone)]
pub struct GeneralizedGround {
    pub energy: f64,
    /// Condition number of the overlap matrix `S`.
    pub condition: f64,
    /// Number of overlap eigenvectors discarded by canonical orthogonalization.
    pub dropped: usize,
}

/// Ground eigenvalue of `H c = E S c` for symmetric `H` and positive
/// semi-definite `S`.
///
/// When `cond(S)` exceeds `max_condition` the near-null overlap directions are
/// removed (canonical orthogonalization) and the problem is solved in the
/// reduced space; if nothing usable remains the overlap is reported as
/// ill-conditioned.
pub fn generalized_ground(h: &Matrix, s: &Matrix, max_condition: f64) -> Result<GeneralizedGround> {
    if h.rows != s.rows || !h.is_square() || !s.is_square() {
        return Err(invalid!("generalized eigenproblem needs square matrices of equal size"));
    }
    let se = symmetric_eigen(s, true)?;
    let smax = se.values.first().copied().unwrap_or(0.0);
    let smin = se.values.last().copied().unwrap_or(0.0);
    if smax <= 0.0 {
        return Err(Error::IllConditioned { condition: f64::INFINITY });
    }
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    let cutoff = smax / max_condition;
    let keep: Vec<usize> = (0..se.values.len()).filter(|&k| se.values[k] > cutoff).collect();
    if keep.is_empty() {
        return Err(Error::IllConditioned { condition });
    }
    let u = se.vectors.as_ref().expect("vectors requested");
    let n = h.rows;
    let x = Matrix::from_fn(n, keep.len(), |i, j| u[(i, keep[j])] / sqrt(se.values[keep[j]]));
    let reduced = x.transpose().matmul(h).matmul(&x);
    let he = symmetric_eigen(&reduced, false)?;
    let energy = *he.values.last().expect("non-empty reduced problem");
    Ok(GeneralizedGround { energy, condition, dropped: n - keep.len() })
}
