//! Truncated quotients `T̂/⟨L_{≥m}⟩`, Magnus (Jacobian) matrices, the
//! noncommutative trace and the log-determinant.
//!
//! In each degree the ideal is spanned by `u P_w v` with `P_w` a Lyndon
//! element of length `m`. Words are indexed from the largest down, so echelon
//! pivots are the largest words and normal forms use the smallest ones; for
//! `m = 2` the normal forms are exactly the sorted words.

use std::collections::HashMap;
use std::sync::Arc;

use crate::alphabet::Alphabet;
use crate::automorphism::FilteredAutomorphism;
use crate::cyclic::{CyclicElement, SymElement};
use crate::error::{Error, Result};
use crate::fox::fox_t;
use crate::free_lie::lyndon_expansions;
use crate::linalg::{Echelon, Matrix, SparseVec};
use crate::scalar::Scalar;
use crate::tensor::Tensor;
use crate::word::{all_words, necklaces, Word};

/// One degree of a quotient: word indexing plus the echelon basis of the relations.
#[derive(Clone, Debug)]
struct DegreeQuotient<S> {
    words: Vec<Word>,
    index: HashMap<Word, usize>,
    relations: Echelon<S>,
    basis: Vec<Word>,
}

impl<S: Scalar> DegreeQuotient<S> {
    /// `words` in increasing order; index runs from the largest word down.
    fn new(words: Vec<Word>, relations: impl Fn(&mut dyn FnMut(Vec<(Word, S)>))) -> Self {
        let total = words.len();
        let index: HashMap<Word, usize> = words.iter().enumerate().map(|(p, w)| (w.clone(), total - 1 - p)).collect();
        let mut q = DegreeQuotient { words, index, relations: Echelon::new(), basis: Vec::new() };
        relations(&mut |rel: Vec<(Word, S)>| {
            let v = q.vectorize(rel);
            q.relations.insert(&v);
        });
        q.basis = q.words.iter().filter(|w| !q.relations.is_pivot(q.index[*w])).cloned().collect();
        q
    }

    fn vectorize(&self, terms: Vec<(Word, S)>) -> SparseVec<S> {
        let mut map: std::collections::BTreeMap<usize, S> = std::collections::BTreeMap::new();
        for (w, c) in terms {
            map.entry(self.index[&w]).or_insert_with(S::zero).add_assign_ref(&c);
        }
        crate::linalg::sparse_from_map(map)
    }

    fn word_at(&self, idx: usize) -> &Word {
        &self.words[self.words.len() - 1 - idx]
    }

    fn normal_form(&self, terms: Vec<(Word, S)>) -> Vec<(Word, S)> {
        let v = self.vectorize(terms);
        self.relations.reduce(&v).into_iter().map(|(i, c)| (self.word_at(i).clone(), c)).collect()
    }
}

/// The truncated quotient algebra `T̂^R` for `R = L_{≥m}` and its cyclic quotient.
#[derive(Clone, Debug)]
pub struct QuotientAlgebra<S> {
    alphabet: Arc<Alphabet>,
    m: usize,
    trunc: usize,
    algebra: Vec<DegreeQuotient<S>>,
    cyclic: Vec<DegreeQuotient<S>>,
}

impl<S: Scalar> QuotientAlgebra<S> {
    pub fn new(alphabet: &Arc<Alphabet>, m: usize, trunc: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::Unsupported("the ideal cut must satisfy m >= 2".into()));
        }
        let n = alphabet.len();
        let lie = lyndon_expansions(n, m);
        let algebra = (0..=trunc)
            .map(|k| {
                DegreeQuotient::new(all_words(n, k), |emit| {
                    if k < m {
                        return;
                    }
                    for split in 0..=(k - m) {
                        let lefts = all_words(n, split);
                        let rights = all_words(n, k - m - split);
                        for e in &lie.expansions {
                            for u in &lefts {
                                for v in &rights {
                                    emit(e.iter().map(|(w, c)| (u.concat(w).concat(v), S::from_i64(*c))).collect());
                                }
                            }
                        }
                    }
                })
            })
            .collect();
        let cyclic = (0..=trunc)
            .map(|k| {
                DegreeQuotient::new(necklaces(n, k), |emit| {
                    if k < m {
                        return;
                    }
                    for v in all_words(n, k - m) {
                        for e in &lie.expansions {
                            emit(e.iter().map(|(w, c)| (w.concat(&v).least_rotation(), S::from_i64(*c))).collect());
                        }
                    }
                })
            })
            .collect();
        Ok(QuotientAlgebra { alphabet: alphabet.clone(), m, trunc, algebra, cyclic })
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    /// Dimension of the degree-`k` part.
    pub fn dim(&self, k: usize) -> usize {
        self.algebra.get(k).map_or(0, |q| q.basis.len())
    }

    /// Representative words of the degree-`k` part.
    pub fn basis(&self, k: usize) -> &[Word] {
        self.algebra.get(k).map_or(&[], |q| &q.basis)
    }

    /// Dimension of the degree-`k` part of the cyclic quotient.
    pub fn cyclic_dim(&self, k: usize) -> usize {
        self.cyclic.get(k).map_or(0, |q| q.basis.len())
    }

    fn check(&self, t: &Tensor<S>) -> Result<()> {
        if t.trunc() != self.trunc || **t.alphabet() != *self.alphabet {
            return Err(Error::Mismatch("tensor incompatible with quotient algebra".into()));
        }
        Ok(())
    }

    /// Normal form of a tensor in the quotient.
    pub fn project(&self, t: &Tensor<S>) -> Result<Tensor<S>> {
        self.check(t)?;
        Ok(self.project_unchecked(t))
    }

    fn project_unchecked(&self, t: &Tensor<S>) -> Tensor<S> {
        let mut by_degree: Vec<Vec<(Word, S)>> = vec![Vec::new(); self.trunc + 1];
        for (w, c) in t.terms() {
            by_degree[w.len()].push((w.clone(), c.clone()));
        }
        let terms = by_degree.into_iter().enumerate().flat_map(|(k, terms)| self.algebra[k].normal_form(terms));
        Tensor::from_terms(&self.alphabet, self.trunc, terms)
    }

    pub fn mul(&self, a: &Tensor<S>, b: &Tensor<S>) -> Result<Tensor<S>> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.project_unchecked(&(a * b)))
    }

    /// Normal form in the cyclic quotient `T^R/[T^R, T^R]`.
    pub fn project_cyclic(&self, c: &CyclicElement<S>) -> Result<CyclicElement<S>> {
        if c.trunc() != self.trunc || **c.alphabet() != *self.alphabet {
            return Err(Error::Mismatch("cyclic element incompatible with quotient algebra".into()));
        }
        let mut by_degree: Vec<Vec<(Word, S)>> = vec![Vec::new(); self.trunc + 1];
        for (w, x) in c.terms() {
            by_degree[w.len()].push((w.clone(), x.clone()));
        }
        let terms = by_degree.into_iter().enumerate().flat_map(|(k, terms)| self.cyclic[k].normal_form(terms));
        Ok(CyclicElement::from_terms(&self.alphabet, self.trunc, terms))
    }
}

/// A square matrix over a quotient algebra, entries in normal form.
#[derive(Clone)]
pub struct RMatrix<S> {
    algebra: Arc<QuotientAlgebra<S>>,
    n: usize,
    entries: Vec<Tensor<S>>,
}

impl<S: Scalar + std::fmt::Display> std::fmt::Debug for RMatrix<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RMatrix").field("m", &self.algebra.m).field("entries", &self.entries).finish()
    }
}

impl<S: Scalar> PartialEq for RMatrix<S> {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.algebra.m == other.algebra.m
            && self.algebra.trunc == other.algebra.trunc
            && self.entries == other.entries
    }
}

impl<S: Scalar> RMatrix<S> {
    /// Projects row-major entries into the quotient.
    pub fn new(algebra: &Arc<QuotientAlgebra<S>>, rows: Vec<Vec<Tensor<S>>>) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::Mismatch("matrix must be square".into()));
            }
            for t in row {
                entries.push(algebra.project(&t)?);
            }
        }
        Ok(RMatrix { algebra: algebra.clone(), n, entries })
    }

    pub fn identity(algebra: &Arc<QuotientAlgebra<S>>, n: usize) -> Self {
        Self::scalar(algebra, n, &Tensor::one(&algebra.alphabet, algebra.trunc))
    }

    /// `r` times the identity.
    pub fn scalar(algebra: &Arc<QuotientAlgebra<S>>, n: usize, r: &Tensor<S>) -> Self {
        let zero = Tensor::zero(&algebra.alphabet, algebra.trunc);
        let r = algebra.project_unchecked(r);
        let entries = (0..n * n).map(|p| if p / n == p % n { r.clone() } else { zero.clone() }).collect();
        RMatrix { algebra: algebra.clone(), n, entries }
    }

    pub fn diagonal(algebra: &Arc<QuotientAlgebra<S>>, diag: &[Tensor<S>]) -> Result<Self> {
        let n = diag.len();
        let zero = Tensor::zero(&algebra.alphabet, algebra.trunc);
        let rows =
            (0..n).map(|i| (0..n).map(|j| if i == j { diag[i].clone() } else { zero.clone() }).collect()).collect();
        Self::new(algebra, rows)
    }

    pub fn algebra(&self) -> &Arc<QuotientAlgebra<S>> {
        &self.algebra
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Tensor<S> {
        &self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<Tensor<S>>> {
        (0..self.n).map(|i| self.entries[i * self.n..(i + 1) * self.n].to_vec()).collect()
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        if self.n != other.n || self.algebra.m != other.algebra.m || self.algebra.trunc != other.algebra.trunc {
            return Err(Error::Mismatch("matrices differ in size or quotient algebra".into()));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Tensor::zero(&self.algebra.alphabet, self.algebra.trunc);
                for k in 0..n {
                    acc.add_assign_unchecked(&(self.get(i, k) * other.get(k, j)), &S::one());
                }
                entries.push(self.algebra.project_unchecked(&acc));
            }
        }
        RMatrix { algebra: self.algebra.clone(), n, entries }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect();
        Ok(RMatrix { algebra: self.algebra.clone(), n: self.n, entries })
    }

    /// Block sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.algebra.m != other.algebra.m || self.algebra.trunc != other.algebra.trunc {
            return Err(Error::Mismatch("matrices over different quotient algebras".into()));
        }
        let n = self.n + other.n;
        let zero = Tensor::zero(&self.algebra.alphabet, self.algebra.trunc);
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| match (i < self.n, j < self.n) {
                        (true, true) => self.get(i, j).clone(),
                        (false, false) => other.get(i - self.n, j - self.n).clone(),
                        _ => zero.clone(),
                    })
                    .collect()
            })
            .collect();
        Self::new(&self.algebra, rows)
    }

    /// The degree-0 (counit) matrix.
    pub fn epsilon(&self) -> Matrix<S> {
        let mut m = Matrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                m[(i, j)] = self.get(i, j).counit();
            }
        }
        m
    }

    fn scale_right(&self, a: &Matrix<S>) -> Self {
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Tensor::zero(&self.algebra.alphabet, self.algebra.trunc);
                for k in 0..n {
                    acc.add_assign_unchecked(self.get(i, k), &a[(k, j)]);
                }
                entries.push(acc);
            }
        }
        RMatrix { algebra: self.algebra.clone(), n, entries }
    }

    /// Sum of the diagonal in the cyclic quotient.
    pub fn nc_trace(&self) -> CyclicElement<S> {
        let mut acc = Tensor::zero(&self.algebra.alphabet, self.algebra.trunc);
        for i in 0..self.n {
            acc.add_assign_unchecked(self.get(i, i), &S::one());
        }
        self.algebra.project_cyclic(&CyclicElement::from_tensor(&acc)).expect("same algebra")
    }

    /// `ℓdet(P) = -Σ_k tr((I - P ε(P)⁻¹)^k) / k`.
    pub fn ldet(&self) -> Result<CyclicElement<S>> {
        let eps = self.epsilon();
        let q = if eps.is_identity() { self.clone() } else { self.scale_right(&eps.inverse()?) };
        let x = RMatrix::identity(&self.algebra, self.n).sub(&q)?;
        let mut out = CyclicElement::zero(&self.algebra.alphabet, self.algebra.trunc);
        let mut power = x.clone();
        for k in 1..=self.algebra.trunc {
            let tr = power.nc_trace();
            out = out.sub(&tr.scale(&S::from_frac(1, k as i64)))?;
            if k < self.algebra.trunc {
                power = power.mul_unchecked(&x);
            }
        }
        Ok(out)
    }

    /// Leibniz determinant over the commutative quotient (`m = 2`).
    pub fn det_commutative(&self) -> Result<SymElement<S>> {
        if self.algebra.m != 2 {
            return Err(Error::Noncommutative);
        }
        let alphabet = &self.algebra.alphabet;
        let trunc = self.algebra.trunc;
        let sym: Vec<SymElement<S>> = self.entries.iter().map(SymElement::from_tensor).collect();
        let mut total = SymElement::zero(alphabet, trunc);
        for (perm, sign) in permutations(self.n) {
            let mut prod = SymElement::one(alphabet, trunc);
            for (col, &row) in perm.iter().enumerate() {
                prod = prod.mul_unchecked(&sym[row * self.n + col]);
                if prod.is_zero() {
                    break;
                }
            }
            total = total.add(&prod.scale(&S::from_i64(sign)))?;
        }
        Ok(total)
    }
}

/// All permutations of `0..n` with their signs (Heap's algorithm).
fn permutations(n: usize) -> Vec<(Vec<usize>, i64)> {
    let mut out = Vec::new();
    let mut a: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    let mut sign = 1;
    out.push((a.clone(), sign));
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            sign = -sign;
            out.push((a.clone(), sign));
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// The Jacobian matrix `(p^R ∂_i ψ(x_j))_{i,j}` over `T̂^R`, `R = L_{≥m}`.
///
/// Requires `ψ(x_j) - x_j ∈ L_{≥m}`. The quotient is truncated at `trunc(ψ) - 1`.
pub fn mag<S: Scalar>(psi: &FilteredAutomorphism<S>, algebra: &Arc<QuotientAlgebra<S>>) -> Result<RMatrix<S>> {
    let m = algebra.m;
    let n = psi.alphabet().len();
    if algebra.trunc + 1 != psi.trunc() || **algebra.alphabet() != **psi.alphabet() {
        return Err(Error::Mismatch("quotient algebra must be truncated one below the automorphism".into()));
    }
    for j in 0..n {
        let diff = psi.image(j) - &Tensor::generator(psi.alphabet(), psi.trunc(), j as u8);
        if diff.min_degree().is_some_and(|d| d < m) {
            return Err(Error::NotInAutR(m));
        }
    }
    let rows =
        (0..n).map(|i| (0..n).map(|j| fox_t(i as u8, psi.image(j)).with_trunc(algebra.trunc)).collect()).collect();
    RMatrix::new(algebra, rows)
}
