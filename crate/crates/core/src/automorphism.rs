//! Filtered automorphisms of the completed free Lie algebra.
//!
//! An automorphism is stored by generator images; its action on the tensor
//! algebra is the induced algebra map. `σ(ψ)[i][j]` is the coefficient of
//! `x_i` in `ψ(x_j)`, so `σ(ψ∘φ) = σ(ψ) σ(φ)`.

use std::fmt;
use std::sync::Arc;

use crate::alphabet::Alphabet;
use crate::derivation::Derivation;
use crate::error::{Error, Result};
use crate::free_lie::lyndon_index;
use crate::linalg::{Echelon, Matrix};
use crate::scalar::Scalar;
use crate::tensor::Tensor;
use crate::word::Word;

#[derive(Clone, PartialEq)]
pub struct FilteredAutomorphism<S> {
    alphabet: Arc<Alphabet>,
    trunc: usize,
    images: Vec<Tensor<S>>,
    sigma: Matrix<S>,
}

fn sigma_of<S: Scalar>(alphabet: &Alphabet, images: &[Tensor<S>]) -> Matrix<S> {
    let n = alphabet.len();
    let mut m = Matrix::zeros(n, n);
    for (j, img) in images.iter().enumerate() {
        for i in 0..n {
            m[(i, j)] = img.coeff(&Word::letter(i as u8));
        }
    }
    m
}

impl<S: Scalar> FilteredAutomorphism<S> {
    /// Validates Lie images with an invertible degree-1 part.
    pub fn new(alphabet: &Arc<Alphabet>, trunc: usize, images: Vec<Tensor<S>>) -> Result<Self> {
        let d = Derivation::new(alphabet, trunc, images)?;
        if d.min_degree().is_none_or(|m| m > 0) && trunc > 0 {
            return Err(Error::Singular);
        }
        let images = d.images().to_vec();
        let sigma = sigma_of(alphabet, &images);
        sigma.inverse()?;
        Ok(FilteredAutomorphism { alphabet: alphabet.clone(), trunc, images, sigma })
    }

    pub(crate) fn from_images_unchecked(alphabet: &Arc<Alphabet>, trunc: usize, images: Vec<Tensor<S>>) -> Self {
        let sigma = sigma_of(alphabet, &images);
        FilteredAutomorphism { alphabet: alphabet.clone(), trunc, images, sigma }
    }

    pub fn identity(alphabet: &Arc<Alphabet>, trunc: usize) -> Self {
        let images = (0..alphabet.len()).map(|i| Tensor::generator(alphabet, trunc, i as u8)).collect();
        Self::from_images_unchecked(alphabet, trunc, images)
    }

    /// The linear substitution `s(A)`: `x_j ↦ Σ_i A[i][j] x_i`.
    pub fn linear(alphabet: &Arc<Alphabet>, trunc: usize, a: &Matrix<S>) -> Result<Self> {
        a.inverse()?;
        let d = Derivation::linear(alphabet, trunc, a)?;
        Ok(Self::from_images_unchecked(alphabet, trunc, d.images().to_vec()))
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

    pub fn sigma(&self) -> &Matrix<S> {
        &self.sigma
    }

    pub fn is_iaut(&self) -> bool {
        self.sigma.is_identity()
    }

    pub fn compatible(&self, other: &Self) -> Result<()> {
        if self.trunc != other.trunc || *self.alphabet != *other.alphabet {
            return Err(Error::Mismatch("automorphisms differ in alphabet or truncation".into()));
        }
        Ok(())
    }

    /// The induced algebra map on tensors.
    pub fn apply(&self, y: &Tensor<S>) -> Result<Tensor<S>> {
        y.compatible(&self.images[0])?;
        Ok(self.apply_unchecked(y))
    }

    pub(crate) fn apply_unchecked(&self, y: &Tensor<S>) -> Tensor<S> {
        let terms: Vec<(Word, S)> = y.terms().map(|(w, c)| (w.clone(), c.clone())).collect();
        self.substitute(&terms, y.trunc())
    }

    /// `ψ(y) = ε(y) + Σ_i ψ(x_i) ψ(∂_i y)`, keeping degrees `<= limit`.
    fn substitute(&self, terms: &[(Word, S)], limit: usize) -> Tensor<S> {
        let mut out = Tensor::zero(&self.alphabet, self.trunc);
        let mut groups: Vec<Vec<(Word, S)>> = vec![Vec::new(); self.alphabet.len()];
        for (w, c) in terms {
            match w.first() {
                None => out.add_term(Word::empty(), c),
                Some(x) if w.len() <= limit => groups[x as usize].push((w.tail(), c.clone())),
                Some(_) => {}
            }
        }
        for (i, group) in groups.iter().enumerate() {
            if group.is_empty() {
                continue;
            }
            let inner = self.substitute(group, limit - 1);
            let prod = self.images[i].mul_limited(&inner, limit);
            out.add_assign_unchecked(&prod, &S::one());
        }
        out
    }

    /// `ψ ∘ φ`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &Self) -> Self {
        let images = other.images.iter().map(|y| self.apply_unchecked(y)).collect();
        Self::from_images_unchecked(&self.alphabet, self.trunc, images)
    }

    /// Inverse: `ψ = φ ∘ s(σ)` with `φ` unipotent, inverted by the series `Σ (id - φ)^k`.
    pub fn invert(&self) -> Result<Self> {
        let ainv = self.sigma.inverse()?;
        let s = Self::linear(&self.alphabet, self.trunc, &ainv)?;
        let phi = self.compose_unchecked(&s);
        let images = (0..self.alphabet.len())
            .map(|i| {
                let x = Tensor::generator(&self.alphabet, self.trunc, i as u8);
                let mut sum = x.clone();
                let mut term = x;
                for _ in 1..self.trunc {
                    let next = &term - &phi.apply_unchecked(&term);
                    if next.is_zero() {
                        break;
                    }
                    sum.add_assign_unchecked(&next, &S::one());
                    term = next;
                }
                s.apply_unchecked(&sum)
            })
            .collect();
        Ok(Self::from_images_unchecked(&self.alphabet, self.trunc, images))
    }

    /// `log ψ = Σ (-1)^(k+1) (ψ - id)^k / k` on generators; requires `σ(ψ) = 1`.
    pub fn log_aut(&self) -> Result<Derivation<S>> {
        if !self.is_iaut() {
            return Err(Error::NotIaut);
        }
        let images = (0..self.alphabet.len())
            .map(|i| {
                let mut term = Tensor::generator(&self.alphabet, self.trunc, i as u8);
                let mut sum = Tensor::zero(&self.alphabet, self.trunc);
                for k in 1..self.trunc.max(1) {
                    term = &self.apply_unchecked(&term) - &term;
                    if term.is_zero() {
                        break;
                    }
                    let sign = if k % 2 == 1 { 1 } else { -1 };
                    sum.add_assign_unchecked(&term, &S::from_frac(sign, k as i64));
                }
                sum
            })
            .collect();
        Ok(Derivation::from_images_unchecked(&self.alphabet, self.trunc, images))
    }

    /// `exp δ = Σ δ^n / n!` on generators; requires `δ` without degree-0 part.
    pub fn exp_der(delta: &Derivation<S>) -> Result<Self> {
        if delta.min_degree() == Some(0) {
            return Err(Error::DegreeZeroPart);
        }
        let alphabet = delta.alphabet();
        let trunc = delta.trunc();
        let images = (0..alphabet.len())
            .map(|i| {
                let mut term = Tensor::generator(alphabet, trunc, i as u8);
                let mut sum = term.clone();
                for n in 1..trunc.max(1) {
                    term = delta.apply_unchecked(&term).scale(&S::from_frac(1, n as i64));
                    if term.is_zero() {
                        break;
                    }
                    sum.add_assign_unchecked(&term, &S::one());
                }
                sum
            })
            .collect();
        Ok(Self::from_images_unchecked(alphabet, trunc, images))
    }

    /// `Ab(ψ) = log(ψ ∘ s(σ(ψ))⁻¹)`, a representative of the class in `H_1`.
    pub fn ab(&self) -> Result<Derivation<S>> {
        let s = Self::linear(&self.alphabet, self.trunc, &self.sigma.inverse()?)?;
        self.compose_unchecked(&s).log_aut()
    }

    /// Least degree of `log ψ`, or `None` when `ψ` is the identity up to truncation.
    pub fn filtration_degree(&self) -> Result<Option<usize>> {
        Ok(self.log_aut()?.min_degree())
    }

    /// The degree-`k` piece of `log ψ`; requires filtration degree `>= k`.
    pub fn tau(&self, k: usize) -> Result<Derivation<S>> {
        let log = self.log_aut()?;
        if let Some(found) = log.min_degree() {
            if found < k {
                return Err(Error::FiltrationTooLow { found, requested: k });
            }
        }
        Ok(log.homogeneous_part(k))
    }

    /// `ψ ∘ δ ∘ ψ⁻¹`.
    pub fn conjugate_derivation(&self, delta: &Derivation<S>) -> Result<Derivation<S>> {
        if delta.trunc() != self.trunc || **delta.alphabet() != *self.alphabet {
            return Err(Error::Mismatch("derivation incompatible with automorphism".into()));
        }
        let inv = self.invert()?;
        let images = inv.images.iter().map(|y| self.apply_unchecked(&delta.apply_unchecked(y))).collect();
        Ok(Derivation::from_images_unchecked(&self.alphabet, self.trunc, images))
    }
}

/// The `GL(H)` action `A·δ = s(A) ∘ δ ∘ s(A)⁻¹`.
pub fn gl_act<S: Scalar>(a: &Matrix<S>, delta: &Derivation<S>) -> Result<Derivation<S>> {
    FilteredAutomorphism::linear(delta.alphabet(), delta.trunc(), a)?.conjugate_derivation(delta)
}

impl<S: fmt::Display> fmt::Debug for FilteredAutomorphism<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (i, img) in self.images.iter().enumerate() {
            m.entry(&self.alphabet.name(i as u8), img);
        }
        m.finish()
    }
}

/// Per-degree span of `Σ_{i+j=d} [Der_i, Der_j]` inside positive-degree derivations.
///
/// Membership of a derivation is decided degree by degree in Lyndon coordinates.
pub struct BracketSpan<S> {
    alphabet: Arc<Alphabet>,
    trunc: usize,
    spans: Vec<Echelon<S>>,
}

impl<S: Scalar> BracketSpan<S> {
    /// Spans for all derivation degrees `1 ..= trunc - 1`.
    pub fn new(alphabet: &Arc<Alphabet>, trunc: usize) -> Self {
        let n = alphabet.len();
        let top = trunc.saturating_sub(1);
        let basis: Vec<Vec<Derivation<S>>> = (0..=top)
            .map(|d| {
                if d == 0 {
                    return Vec::new();
                }
                let words = lyndon_index(n, d + 1).words.clone();
                (0..n)
                    .flat_map(|i| words.iter().map(move |w| (i, w.clone())))
                    .map(|(i, w)| Derivation::elementary(alphabet, trunc, i, &w))
                    .collect()
            })
            .collect();
        let spans = (0..=top)
            .map(|d| {
                let mut ech = Echelon::new();
                for i in 1..d {
                    let j = d - i;
                    if i > j {
                        break;
                    }
                    for (p, x) in basis[i].iter().enumerate() {
                        let start = if i == j { p + 1 } else { 0 };
                        for y in &basis[j][start..] {
                            ech.insert(&x.bracket_unchecked(y).vectorize(d));
                        }
                    }
                }
                ech
            })
            .collect();
        BracketSpan { alphabet: alphabet.clone(), trunc, spans }
    }

    /// Dimension of the bracket span in degree `d`.
    pub fn rank(&self, d: usize) -> usize {
        self.spans.get(d).map_or(0, Echelon::rank)
    }

    /// Whether every homogeneous piece of `δ` lies in the bracket span (degree 0 must vanish).
    pub fn contains(&self, delta: &Derivation<S>) -> Result<bool> {
        if delta.trunc() != self.trunc || **delta.alphabet() != *self.alphabet {
            return Err(Error::Mismatch("derivation incompatible with bracket span".into()));
        }
        if delta.min_degree() == Some(0) {
            return Ok(false);
        }
        Ok((1..self.spans.len()).all(|d| self.spans[d].contains(&delta.vectorize(d))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::free_lie::{bch, bracket};
    use num_rational::BigRational;

    type Q = BigRational;
    type T = Tensor<Q>;
    type A = FilteredAutomorphism<Q>;
    type D = Derivation<Q>;

    fn sample(trunc: usize) -> (Arc<Alphabet>, A) {
        let h = Alphabet::new(["a", "b"]).unwrap();
        let (a, b) = (T::generator(&h, trunc, 0), T::generator(&h, trunc, 1));
        let ab = bracket(&a, &b).unwrap();
        let d = D::new(&h, trunc, vec![ab.clone(), bracket(&ab, &b).unwrap()]).unwrap();
        let lin = A::linear(&h, trunc, &Matrix::from_i64_rows(&[&[1, 2], &[1, 3]])).unwrap();
        (h, A::exp_der(&d).unwrap().compose(&lin).unwrap())
    }

    #[test]
    fn identity_laws() {
        let (h, psi) = sample(5);
        let id = A::identity(&h, 5);
        assert_eq!(psi.compose(&id).unwrap(), psi);
        assert_eq!(id.invert().unwrap(), id);
        assert!(id.log_aut().unwrap().is_zero());
        assert!(id.ab().unwrap().is_zero());
        assert_eq!(psi.compose(&psi.invert().unwrap()).unwrap(), id);
        assert_eq!(psi.invert().unwrap().compose(&psi).unwrap(), id);
    }

    #[test]
    fn sigma_is_multiplicative() {
        let (_, psi) = sample(4);
        let sq = psi.compose(&psi).unwrap();
        assert_eq!(*sq.sigma(), psi.sigma().mul(psi.sigma()).unwrap());
        assert_eq!(psi.log_aut(), Err(Error::NotIaut));
    }

    #[test]
    fn exp_log_roundtrip() {
        let h = Alphabet::new(["a", "b"]).unwrap();
        let (a, b) = (T::generator(&h, 5, 0), T::generator(&h, 5, 1));
        let ab = bracket(&a, &b).unwrap();
        let d = D::new(&h, 5, vec![&ab + &bracket(&a, &ab).unwrap(), bracket(&b, &ab).unwrap()]).unwrap();
        let psi = A::exp_der(&d).unwrap();
        assert_eq!(psi.log_aut().unwrap(), d);
        assert_eq!(psi.filtration_degree().unwrap(), Some(1));
        assert_eq!(psi.tau(1).unwrap(), d.homogeneous_part(1));
        assert!(matches!(psi.tau(2), Err(Error::FiltrationTooLow { found: 1, requested: 2 })));
    }

    #[test]
    fn inner_automorphism_matches_bch() {
        // exp(ad x1) is conjugation by exp(x1): x ↦ bch(x1, bch(x, -x1))
        let h = Alphabet::new(["a", "b"]).unwrap();
        let a = T::generator(&h, 5, 0);
        let psi = A::exp_der(&D::inner(&a).unwrap()).unwrap();
        for j in 0..2 {
            let x = T::generator(&h, 5, j);
            assert_eq!(psi.image(j as usize), &bch(&a, &bch(&x, &-&a).unwrap()).unwrap());
        }
    }

    #[test]
    fn bracket_span_in_low_degree() {
        let h = Alphabet::new(["a", "b"]).unwrap();
        let span = BracketSpan::<Q>::new(&h, 4);
        assert_eq!(span.rank(1), 0);
        let (a, b) = (T::generator(&h, 4, 0), T::generator(&h, 4, 1));
        let d1 = D::new(&h, 4, vec![bracket(&a, &b).unwrap(), T::zero(&h, 4)]).unwrap();
        let d2 = D::new(&h, 4, vec![T::zero(&h, 4), bracket(&a, &b).unwrap()]).unwrap();
        assert!(!span.contains(&d1).unwrap());
        assert!(span.contains(&d1.bracket(&d2).unwrap()).unwrap());
    }
}
