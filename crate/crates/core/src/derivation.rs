//! Derivations of the free Lie algebra, the trace cocycle and Morita's trace.
//!
//! A derivation is stored through its generator images. The degree-`d` piece
//! sends generators to `L_{d+1}`; a degree-0 piece is a linear map of `H`.

use std::fmt;
use std::sync::Arc;

use crate::alphabet::Alphabet;
use crate::cyclic::{CyclicElement, SymElement};
use crate::error::{Error, Result};
use crate::free_lie::{bracket_unchecked, lyndon_coefficients, lyndon_element, lyndon_expansions, lyndon_index};
use crate::linalg::{Matrix, SparseVec};
use crate::scalar::Scalar;
use crate::tensor::Tensor;
use crate::word::Word;

/// A derivation of the truncated free Lie algebra, given by generator images.
///
/// Invariant: every image is a Lie element (primitive, zero constant term)
/// sharing the alphabet and truncation of the derivation.
#[derive(Clone, PartialEq)]
pub struct Derivation<S> {
    alphabet: Arc<Alphabet>,
    trunc: usize,
    images: Vec<Tensor<S>>,
}

impl<S: Scalar> Derivation<S> {
    /// Validates that every image is a Lie element.
    pub fn new(alphabet: &Arc<Alphabet>, trunc: usize, images: Vec<Tensor<S>>) -> Result<Self> {
        if images.len() != alphabet.len() {
            return Err(Error::Mismatch(format!("{} images for {} generators", images.len(), alphabet.len())));
        }
        let probe = Tensor::zero(alphabet, trunc);
        for (i, img) in images.iter().enumerate() {
            img.compatible(&probe)?;
            if !img.is_primitive() {
                return Err(Error::NotPrimitive(format!("image of `{}` is not a Lie element", alphabet.name(i as u8))));
            }
        }
        Ok(Derivation { alphabet: alphabet.clone(), trunc, images })
    }

    pub(crate) fn from_images_unchecked(alphabet: &Arc<Alphabet>, trunc: usize, images: Vec<Tensor<S>>) -> Self {
        Derivation { alphabet: alphabet.clone(), trunc, images }
    }

    pub fn zero(alphabet: &Arc<Alphabet>, trunc: usize) -> Self {
        Derivation { alphabet: alphabet.clone(), trunc, images: vec![Tensor::zero(alphabet, trunc); alphabet.len()] }
    }

    /// Degree-0 derivation `x_j ↦ Σ_i a[i][j] x_i`.
    pub fn linear(alphabet: &Arc<Alphabet>, trunc: usize, a: &Matrix<S>) -> Result<Self> {
        let n = alphabet.len();
        if a.rows() != n || a.cols() != n {
            return Err(Error::Mismatch(format!("expected a {n}x{n} matrix")));
        }
        let images = (0..n)
            .map(|j| Tensor::from_terms(alphabet, trunc, (0..n).map(|i| (Word::letter(i as u8), a[(i, j)].clone()))))
            .collect();
        Ok(Derivation { alphabet: alphabet.clone(), trunc, images })
    }

    /// The derivation sending generator `i` to the Lyndon element `P_w` and the others to 0.
    pub fn elementary(alphabet: &Arc<Alphabet>, trunc: usize, i: usize, w: &Word) -> Self {
        let mut d = Self::zero(alphabet, trunc);
        d.images[i] = lyndon_element(alphabet, trunc, w);
        d
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn images(&self) -> &[Tensor<S>] {
        &self.images
    }

    pub fn image(&self, i: usize) -> &Tensor<S> {
        &self.images[i]
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(Tensor::is_zero)
    }

    /// Least `d` with a nonzero degree-`d` piece.
    pub fn min_degree(&self) -> Option<usize> {
        self.images.iter().filter_map(Tensor::min_degree).min().map(|m| m - 1)
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.images.iter().filter_map(Tensor::max_degree).max().map(|m| m - 1)
    }

    /// The homogeneous piece of degree `d` (generators to `L_{d+1}`).
    pub fn homogeneous_part(&self, d: usize) -> Self {
        self.map_images(|t| t.degree_part(d + 1))
    }

    pub fn is_homogeneous(&self, d: usize) -> bool {
        self.images.iter().all(|t| t.is_homogeneous(d + 1))
    }

    pub fn with_trunc(&self, trunc: usize) -> Self {
        Derivation {
            alphabet: self.alphabet.clone(),
            trunc,
            images: self.images.iter().map(|t| t.with_trunc(trunc)).collect(),
        }
    }

    fn map_images<F: FnMut(&Tensor<S>) -> Tensor<S>>(&self, f: F) -> Self {
        Derivation { alphabet: self.alphabet.clone(), trunc: self.trunc, images: self.images.iter().map(f).collect() }
    }

    pub fn compatible(&self, other: &Self) -> Result<()> {
        if self.trunc != other.trunc || *self.alphabet != *other.alphabet {
            return Err(Error::Mismatch("derivations differ in alphabet or truncation".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        Ok(self.add_unchecked(other, &S::one()))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        Ok(self.add_unchecked(other, &-S::one()))
    }

    /// `self + c * other`.
    pub(crate) fn add_unchecked(&self, other: &Self, c: &S) -> Self {
        let images = self
            .images
            .iter()
            .zip(&other.images)
            .map(|(x, y)| {
                let mut z = x.clone();
                z.add_assign_unchecked(y, c);
                z
            })
            .collect();
        Derivation { alphabet: self.alphabet.clone(), trunc: self.trunc, images }
    }

    pub fn scale(&self, c: &S) -> Self {
        self.map_images(|t| t.scale(c))
    }

    /// Leibniz extension to the tensor algebra.
    pub fn apply(&self, x: &Tensor<S>) -> Result<Tensor<S>> {
        x.compatible(&self.images[0])?;
        Ok(self.apply_unchecked(x))
    }

    pub(crate) fn apply_unchecked(&self, x: &Tensor<S>) -> Tensor<S> {
        let trunc = x.trunc();
        let mut out = Tensor::zero(x.alphabet(), trunc);
        for (w, c) in x.terms() {
            let len = w.len();
            for p in 0..len {
                let prefix = w.slice(0, p);
                let suffix = w.slice(p + 1, len);
                let room = trunc + 1 - len;
                for (u, d) in self.images[w.letters()[p] as usize].terms() {
                    if u.len() > room {
                        break;
                    }
                    out.add_term_mul(prefix.concat(u).concat(&suffix), c, d);
                }
            }
        }
        out
    }

    /// `[δ, η](x) = δ(η(x)) - η(δ(x))`.
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        Ok(self.bracket_unchecked(other))
    }

    pub(crate) fn bracket_unchecked(&self, other: &Self) -> Self {
        let images = self
            .images
            .iter()
            .zip(&other.images)
            .map(|(dx, ex)| {
                let mut z = self.apply_unchecked(ex);
                z.add_assign_unchecked(&other.apply_unchecked(dx), &-S::one());
                z
            })
            .collect();
        Derivation { alphabet: self.alphabet.clone(), trunc: self.trunc, images }
    }

    /// Divergence `Tr(δ) = Σ_i ∂_i(δ(x_i))` in the cyclic quotient, truncated at `trunc - 1`.
    pub fn trace(&self) -> CyclicElement<S> {
        let top = self.trunc.saturating_sub(1);
        let terms = self.images.iter().enumerate().flat_map(|(i, img)| {
            img.terms().filter(move |(w, _)| w.first() == Some(i as u8)).map(|(w, c)| (w.tail(), c.clone()))
        });
        CyclicElement::from_terms(&self.alphabet, top, terms)
    }

    /// Morita's trace: the trace pushed to the symmetric algebra; requires no degree-0 part.
    pub fn itr(&self) -> Result<SymElement<S>> {
        if self.min_degree() == Some(0) {
            return Err(Error::DegreeZeroPart);
        }
        Ok(self.trace().to_sym())
    }

    /// Leibniz action on cyclic words; requires `c.trunc() <= self.trunc()`.
    pub fn act_on_cyclic(&self, c: &CyclicElement<S>) -> Result<CyclicElement<S>> {
        if **c.alphabet() != *self.alphabet || c.trunc() > self.trunc {
            return Err(Error::Mismatch("cyclic element incompatible with derivation".into()));
        }
        let rep = c.to_tensor(self.trunc).with_trunc(c.trunc());
        let moved = self.with_trunc(c.trunc()).apply_unchecked(&rep);
        Ok(CyclicElement::from_tensor(&moved))
    }

    /// Coordinates of the degree-`d` piece: entry `i * dim L_{d+1} + p` is the
    /// coefficient of generator `i`'s image on the `p`-th Lyndon word.
    pub fn vectorize(&self, d: usize) -> SparseVec<S> {
        let dim = lyndon_index(self.alphabet.len(), d + 1).words.len();
        self.images
            .iter()
            .enumerate()
            .flat_map(|(i, img)| lyndon_coefficients(img, d + 1).into_iter().map(move |(p, c)| (i * dim + p, c)))
            .collect()
    }

    /// Homogeneous degree-`d` derivation sending generator `i` to `Σ_p c_{i·dim+p} P_{w_p}`.
    pub fn from_lie_coordinates(alphabet: &Arc<Alphabet>, trunc: usize, d: usize, coords: &[(usize, S)]) -> Self {
        let lie = lyndon_expansions(alphabet.len(), d + 1);
        let dim = lie.index.words.len();
        let mut images = vec![Tensor::zero(alphabet, trunc); alphabet.len()];
        if d < trunc {
            for (idx, c) in coords {
                for (w, k) in &lie.expansions[idx % dim] {
                    images[idx / dim].add_term(w.clone(), &c.mul_ref(&S::from_i64(*k)));
                }
            }
        }
        Derivation { alphabet: alphabet.clone(), trunc, images }
    }

    /// Inverse of [`Derivation::vectorize`] on homogeneous degree-`d` derivations.
    pub fn from_vector(alphabet: &Arc<Alphabet>, trunc: usize, d: usize, v: &[(usize, S)]) -> Self {
        let lie = lyndon_expansions(alphabet.len(), d + 1);
        let dim = lie.index.words.len();
        // Lyndon words appear in P_w only at w and above, so the change of basis is unitriangular.
        let mut rest: std::collections::BTreeMap<usize, S> = v.iter().cloned().collect();
        let mut coords = Vec::new();
        while let Some((idx, c)) = rest.pop_first() {
            let (i, p) = (idx / dim, idx % dim);
            for (w, k) in lie.expansions[p].iter().skip(1) {
                if let Some(&q) = lie.index.position.get(w) {
                    let entry = rest.entry(i * dim + q).or_insert_with(S::zero);
                    entry.sub_assign_ref(&c.mul_ref(&S::from_i64(*k)));
                    if entry.is_zero() {
                        rest.remove(&(i * dim + q));
                    }
                }
            }
            coords.push((idx, c));
        }
        Self::from_lie_coordinates(alphabet, trunc, d, &coords)
    }

    /// Inner derivation `u ↦ [ξ, u]`.
    pub fn inner(xi: &Tensor<S>) -> Result<Self> {
        if !xi.is_primitive() {
            return Err(Error::NotLie);
        }
        let alphabet = xi.alphabet().clone();
        let images = (0..alphabet.len())
            .map(|i| bracket_unchecked(xi, &Tensor::generator(&alphabet, xi.trunc(), i as u8)))
            .collect();
        Ok(Derivation { alphabet, trunc: xi.trunc(), images })
    }
}

impl<S: fmt::Display> fmt::Debug for Derivation<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (i, img) in self.images.iter().enumerate() {
            m.entry(&self.alphabet.name(i as u8), img);
        }
        m.finish()
    }
}
