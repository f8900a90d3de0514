//! Exact linear algebra over a [`Scalar`] field.
//!
//! Two tools live here. [`Matrix`] is a small dense matrix with an RREF-based
//! [`rank_kernel_solve`]. [`Echelon`] is an incremental sparse row-echelon
//! basis used for every kernel, rank and quotient computation on tensor
//! spaces, where vectors are indexed by (very sparse) word codes.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Dense `rows x cols` matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    entries: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, entries: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Mismatch("ragged matrix rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, entries: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| S::from_i64(v)).collect()).collect())
            .expect("rectangular literal")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let v = &self[(i, j)];
                    if i == j {
                        v.is_one()
                    } else {
                        v.is_zero()
                    }
                })
            })
    }

    pub fn mul(&self, other: &Matrix<S>) -> Result<Matrix<S>> {
        if self.cols != other.rows {
            return Err(Error::Mismatch(format!(
                "matrix product {}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::<S>::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out.entries[i * other.cols + j].add_mul(a, b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        (0..self.rows)
            .map(|i| {
                let mut acc = S::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    acc.add_mul(a, b);
                }
                acc
            })
            .collect()
    }

    /// Inverse by Gauss-Jordan elimination; `Error::Singular` if not invertible.
    pub fn inverse(&self) -> Result<Matrix<S>> {
        if self.rows != self.cols {
            return Err(Error::Singular);
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = S::one();
        }
        let (rref, pivots) = rref_with_pivots(&aug);
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::Singular);
        }
        let mut inv = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = rref[(i, n + j)].clone();
            }
        }
        Ok(inv)
    }

    pub fn transpose(&self) -> Matrix<S> {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }
}

impl<S> std::ops::Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.entries[i * self.cols + j]
    }
}

impl<S> std::ops::IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.entries[i * self.cols + j]
    }
}

/// Result of [`rank_kernel_solve`].
#[derive(Clone, Debug, PartialEq)]
pub struct RankKernel<S> {
    pub rank: usize,
    pub kernel: Vec<Vec<S>>,
    pub rref: Matrix<S>,
}

fn rref_with_pivots<S: Scalar>(m: &Matrix<S>) -> (Matrix<S>, Vec<usize>) {
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                a.entries.swap(p * cols + j, r * cols + j);
            }
        }
        let inv = a[(r, c)].inv();
        for j in c..cols {
            let v = a[(r, j)].mul_ref(&inv);
            a[(r, j)] = v;
        }
        for i in 0..rows {
            if i == r || a[(i, c)].is_zero() {
                continue;
            }
            let f = a[(i, c)].clone();
            for j in c..cols {
                if a[(r, j)].is_zero() {
                    continue;
                }
                let d = f.mul_ref(&a[(r, j)]);
                a[(i, j)].sub_assign_ref(&d);
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

/// Rank, a kernel basis and the reduced row-echelon form of `m`.
///
/// Kernel vectors are the standard basis attached to the free columns of the
/// RREF, so `rank + kernel.len() == m.cols()`.
pub fn rank_kernel_solve<S: Scalar>(m: &Matrix<S>) -> RankKernel<S> {
    let (rref, pivots) = rref_with_pivots(m);
    let cols = m.cols;
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let kernel = (0..cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![S::zero(); cols];
            v[free] = S::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -rref[(r, free)].clone();
            }
            v
        })
        .collect();
    RankKernel { rank: pivots.len(), kernel, rref }
}

/// Sparse vector: strictly increasing indices, no zero entries.
pub type SparseVec<S> = Vec<(usize, S)>;

/// `a - f * b` on sparse vectors.
pub fn sparse_axpy<S: Scalar>(a: &[(usize, S)], f: &S, b: &[(usize, S)]) -> SparseVec<S> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j == b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i == a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            out.push((b[j].0, -f.mul_ref(&b[j].1)));
            j += 1;
        } else {
            let mut v = a[i].1.clone();
            v.sub_assign_ref(&f.mul_ref(&b[j].1));
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn sparse_from_map<S: Scalar>(map: BTreeMap<usize, S>) -> SparseVec<S> {
    map.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

#[derive(Clone, Debug)]
struct EchelonRow<S> {
    entries: SparseVec<S>,
    /// Expression of this row as a combination of tagged inputs.
    combo: SparseVec<S>,
}

/// Incremental semi-echelon basis of a subspace of a sparse coordinate space.
///
/// Every stored row has a distinct leading index (its pivot) and is normalised
/// to leading coefficient one. Reduction eliminates pivots in increasing index
/// order, which yields the unique representative of a vector's class that has
/// no pivot coordinates.
///
/// Inputs may carry a tag; rows then remember their expression in terms of the
/// tagged inputs (modulo untagged ones), which gives kernels and quotient
/// coordinates without a second pass.
#[derive(Clone, Debug)]
pub struct Echelon<S> {
    rows: Vec<EchelonRow<S>>,
    pivot_of: BTreeMap<usize, usize>,
}

impl<S: Scalar> Default for Echelon<S> {
    fn default() -> Self {
        Echelon { rows: Vec::new(), pivot_of: BTreeMap::new() }
    }
}

impl<S: Scalar> Echelon<S> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivot_of.keys().copied()
    }

    pub fn is_pivot(&self, index: usize) -> bool {
        self.pivot_of.contains_key(&index)
    }

    /// Reduces `v`, returning the normal form and the accumulated tag combination.
    pub fn reduce_tracked(&self, v: &[(usize, S)]) -> (SparseVec<S>, SparseVec<S>) {
        let mut cur: SparseVec<S> = v.to_vec();
        let mut combo: SparseVec<S> = Vec::new();
        let mut cursor = 0usize;
        loop {
            let next =
                cur.iter().skip_while(|(i, _)| *i < cursor).find(|(i, _)| self.pivot_of.contains_key(i)).cloned();
            let Some((idx, coeff)) = next else { break };
            let row = &self.rows[self.pivot_of[&idx]];
            cur = sparse_axpy(&cur, &coeff, &row.entries);
            if !row.combo.is_empty() {
                combo = sparse_axpy(&combo, &-coeff.clone(), &row.combo);
            }
            cursor = idx + 1;
        }
        (cur, combo)
    }

    pub fn reduce(&self, v: &[(usize, S)]) -> SparseVec<S> {
        let mut cur: SparseVec<S> = v.to_vec();
        let mut cursor = 0usize;
        loop {
            let next =
                cur.iter().skip_while(|(i, _)| *i < cursor).find(|(i, _)| self.pivot_of.contains_key(i)).cloned();
            let Some((idx, coeff)) = next else { break };
            cur = sparse_axpy(&cur, &coeff, &self.rows[self.pivot_of[&idx]].entries);
            cursor = idx + 1;
        }
        cur
    }

    pub fn contains(&self, v: &[(usize, S)]) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds `v` to the span. Returns the new pivot, or `None` if `v` was dependent.
    pub fn insert(&mut self, v: &[(usize, S)]) -> Option<usize> {
        let r = self.reduce(v);
        self.push_reduced(r, Vec::new())
    }

    /// Adds a tagged input. If it is dependent, returns `Err(relation)`: a
    /// combination of tags (including `tag` itself with coefficient one) whose
    /// inputs sum to an element of the span of the untagged inputs.
    pub fn insert_tagged(&mut self, v: &[(usize, S)], tag: usize) -> std::result::Result<usize, SparseVec<S>> {
        let (r, combo) = self.reduce_tracked(v);
        // v = r + sum(combo) (mod untagged), so the new row r has combo e_tag - combo.
        let own = sparse_axpy(&[(tag, S::one())], &S::one(), &combo);
        if r.is_empty() {
            return Err(own);
        }
        Ok(self.push_reduced(r, own).expect("nonzero remainder"))
    }

    fn push_reduced(&mut self, mut r: SparseVec<S>, mut combo: SparseVec<S>) -> Option<usize> {
        let (pivot, lead) = r.first().cloned()?;
        if !lead.is_one() {
            let inv = lead.inv();
            for (_, x) in r.iter_mut() {
                *x = x.mul_ref(&inv);
            }
            for (_, x) in combo.iter_mut() {
                *x = x.mul_ref(&inv);
            }
        }
        self.pivot_of.insert(pivot, self.rows.len());
        self.rows.push(EchelonRow { entries: r, combo });
        Some(pivot)
    }
}

/// Kernel of the linear map sending input `j` to `columns[j]`.
pub fn sparse_kernel<S: Scalar>(columns: &[SparseVec<S>]) -> (usize, Vec<SparseVec<S>>) {
    let mut ech = Echelon::new();
    let mut kernel = Vec::new();
    for (j, col) in columns.iter().enumerate() {
        if let Err(rel) = ech.insert_tagged(col, j) {
            kernel.push(rel);
        }
    }
    (ech.rank(), kernel)
}

pub fn sparse_rank<S: Scalar>(vectors: &[SparseVec<S>]) -> usize {
    let mut ech = Echelon::new();
    for v in vectors {
        ech.insert(v);
    }
    ech.rank()
}
