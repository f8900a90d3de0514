//! Free groups, expansions into the tensor algebra, and Fox derivatives.
//!
//! Fox derivatives follow the right-module convention: `∂_i` strips a leading
//! letter, so `v - ε(v) = Σ_k x_k ∂_k(v)` and
//! `∂_i(uv) = ∂_i(u) v + ε(u) ∂_i(v)`. This differs from the classical
//! left-module Fox calculus.

use std::fmt;
use std::sync::Arc;

use crate::alphabet::Alphabet;
use crate::automorphism::FilteredAutomorphism;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tensor::Tensor;

/// A generator or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupLetter {
    pub generator: u8,
    pub inverse: bool,
}

impl GroupLetter {
    pub fn inv(self) -> Self {
        GroupLetter { generator: self.generator, inverse: !self.inverse }
    }
}

/// A freely reduced word in the free group.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GroupWord(Vec<GroupLetter>);

impl GroupWord {
    pub fn identity() -> Self {
        GroupWord(Vec::new())
    }

    pub fn generator(i: u8) -> Self {
        GroupWord(vec![GroupLetter { generator: i, inverse: false }])
    }

    /// Freely reduces the given letters.
    pub fn new<I: IntoIterator<Item = GroupLetter>>(letters: I) -> Self {
        let mut out: Vec<GroupLetter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        GroupWord(out)
    }

    /// From signed 1-based indices: `2` is the second generator, `-2` its inverse.
    pub fn from_signed(letters: &[i32]) -> Self {
        Self::new(letters.iter().map(|&s| GroupLetter { generator: (s.unsigned_abs() - 1) as u8, inverse: s < 0 }))
    }

    pub fn letters(&self) -> &[GroupLetter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &GroupWord) -> GroupWord {
        Self::new(self.0.iter().chain(&other.0).copied())
    }

    pub fn inverse(&self) -> GroupWord {
        GroupWord(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    /// `x y x⁻¹ y⁻¹`.
    pub fn commutator(x: &GroupWord, y: &GroupWord) -> GroupWord {
        x.mul(y).mul(&x.inverse()).mul(&y.inverse())
    }

    pub fn max_generator(&self) -> Option<u8> {
        self.0.iter().map(|l| l.generator).max()
    }

    /// Substitutes `images[i]` for generator `i`.
    pub fn substitute(&self, images: &[GroupWord]) -> GroupWord {
        let mut out = GroupWord::identity();
        for l in &self.0 {
            let img = &images[l.generator as usize];
            out = out.mul(&if l.inverse { img.inverse() } else { img.clone() });
        }
        out
    }
}

impl fmt::Debug for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.0.iter().map(|l| format!("{}{}", if l.inverse { "-" } else { "" }, l.generator + 1)).collect();
        write!(f, "<{}>", parts.join(" "))
    }
}

/// An expansion `θ: F → T̂`, given by generator images `1 + x_i + (higher terms)`.
#[derive(Clone, PartialEq)]
pub struct Expansion<S> {
    alphabet: Arc<Alphabet>,
    trunc: usize,
    images: Vec<Tensor<S>>,
    inverse_images: Vec<Tensor<S>>,
    grouplike: bool,
}

impl<S: Scalar> Expansion<S> {
    /// Validates the normalisation `θ(γ_i) = 1 + x_i + (degree >= 2)`.
    pub fn new(alphabet: &Arc<Alphabet>, trunc: usize, images: Vec<Tensor<S>>) -> Result<Self> {
        if images.len() != alphabet.len() {
            return Err(Error::Mismatch(format!("{} images for {} generators", images.len(), alphabet.len())));
        }
        let probe = Tensor::zero(alphabet, trunc);
        for (i, img) in images.iter().enumerate() {
            img.compatible(&probe)?;
            let low = img.with_trunc(1);
            let expected = &Tensor::one(alphabet, 1) + &Tensor::generator(alphabet, 1, i as u8);
            if trunc == 0 || low != expected {
                return Err(Error::Counit {
                    expected: format!("1 + {}", alphabet.name(i as u8)),
                    found: format!("{low:?}"),
                });
            }
        }
        let grouplike = images.iter().all(Tensor::is_grouplike);
        let inverse_images = images.iter().map(|t| t.inverse().expect("counit 1")).collect();
        Ok(Expansion { alphabet: alphabet.clone(), trunc, images, inverse_images, grouplike })
    }

    /// `γ_i ↦ 1 + x_i`.
    pub fn magnus(alphabet: &Arc<Alphabet>, trunc: usize) -> Self {
        let images = (0..alphabet.len())
            .map(|i| &Tensor::one(alphabet, trunc) + &Tensor::generator(alphabet, trunc, i as u8))
            .collect();
        Self::new(alphabet, trunc, images).expect("normalised images")
    }

    /// `γ_i ↦ exp(x_i)`.
    pub fn exponential(alphabet: &Arc<Alphabet>, trunc: usize) -> Self {
        let images = (0..alphabet.len()).map(|i| Tensor::generator(alphabet, trunc, i as u8).exp_unchecked()).collect();
        Self::new(alphabet, trunc, images).expect("normalised images")
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

    pub fn is_grouplike(&self) -> bool {
        self.grouplike
    }

    /// Multiplicative extension to group words.
    pub fn evaluate(&self, w: &GroupWord) -> Result<Tensor<S>> {
        let mut out = Tensor::one(&self.alphabet, self.trunc);
        for l in w.letters() {
            let g = l.generator as usize;
            if g >= self.images.len() {
                return Err(Error::UnknownSymbol(format!("generator {}", g + 1)));
            }
            let img = if l.inverse { &self.inverse_images[g] } else { &self.images[g] };
            out = &out * img;
        }
        Ok(out)
    }
}

impl<S: fmt::Display> fmt::Debug for Expansion<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Expansion").field("trunc", &self.trunc).field("images", &self.images).finish()
    }
}

/// `∂_i` on tensors: `x_j w ↦ w` if `j = i`, otherwise 0.
pub fn fox_t<S: Scalar>(i: u8, v: &Tensor<S>) -> Tensor<S> {
    Tensor::from_terms(
        v.alphabet(),
        v.trunc(),
        v.terms().filter(|(w, _)| w.first() == Some(i)).map(|(w, c)| (w.tail(), c.clone())),
    )
}

/// Expansion of the Fox derivative `∂w/∂γ_i`, computed as `∂_i(θ(w))`.
pub fn fox_group<S: Scalar>(theta: &Expansion<S>, i: u8, w: &GroupWord) -> Result<Tensor<S>> {
    Ok(fox_t(i, &theta.evaluate(w)?))
}

/// An automorphism of the free group with caller-supplied inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeGroupAutomorphism {
    images: Vec<GroupWord>,
    inverse_images: Vec<GroupWord>,
}

impl FreeGroupAutomorphism {
    /// Checks that both composites fix every generator.
    pub fn new(images: Vec<GroupWord>, inverse_images: Vec<GroupWord>) -> Result<Self> {
        let n = images.len();
        if inverse_images.len() != n {
            return Err(Error::InvalidAutomorphism("images and inverse images differ in rank".into()));
        }
        let in_range = |w: &GroupWord| w.max_generator().is_none_or(|g| (g as usize) < n);
        if !images.iter().chain(&inverse_images).all(in_range) {
            return Err(Error::InvalidAutomorphism("image uses a generator outside the rank".into()));
        }
        for i in 0..n {
            let g = GroupWord::generator(i as u8);
            if inverse_images[i].substitute(&images) != g || images[i].substitute(&inverse_images) != g {
                return Err(Error::InvalidAutomorphism(format!("inverse images do not invert generator {}", i + 1)));
            }
        }
        Ok(FreeGroupAutomorphism { images, inverse_images })
    }

    pub fn identity(n: usize) -> Self {
        let g: Vec<GroupWord> = (0..n).map(|i| GroupWord::generator(i as u8)).collect();
        FreeGroupAutomorphism { images: g.clone(), inverse_images: g }
    }

    /// `x ↦ w x w⁻¹`.
    pub fn conjugation(n: usize, w: &GroupWord) -> Self {
        let images = (0..n).map(|i| w.mul(&GroupWord::generator(i as u8)).mul(&w.inverse())).collect();
        let inverse_images = (0..n).map(|i| w.inverse().mul(&GroupWord::generator(i as u8)).mul(w)).collect();
        FreeGroupAutomorphism { images, inverse_images }
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[GroupWord] {
        &self.images
    }

    pub fn inverse_images(&self) -> &[GroupWord] {
        &self.inverse_images
    }

    pub fn apply(&self, w: &GroupWord) -> GroupWord {
        w.substitute(&self.images)
    }

    /// `f ∘ g`.
    pub fn compose(&self, g: &FreeGroupAutomorphism) -> Self {
        FreeGroupAutomorphism {
            images: g.images.iter().map(|w| w.substitute(&self.images)).collect(),
            inverse_images: self.inverse_images.iter().map(|w| w.substitute(&g.inverse_images)).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        FreeGroupAutomorphism { images: self.inverse_images.clone(), inverse_images: self.images.clone() }
    }

    /// `f g f⁻¹ g⁻¹`.
    pub fn commutator(f: &Self, g: &Self) -> Self {
        f.compose(g).compose(&f.inverse()).compose(&g.inverse())
    }
}

/// The automorphism `ψ` of the completed free Lie algebra with `ψ(θ(γ_i)) = θ(f(γ_i))`.
///
/// With `φ: x_i ↦ log θ(γ_i)` and `χ: x_i ↦ log θ(f(γ_i))`, `ψ = χ ∘ φ⁻¹`.
pub fn induced_automorphism<S: Scalar>(
    theta: &Expansion<S>,
    f: &FreeGroupAutomorphism,
) -> Result<FilteredAutomorphism<S>> {
    if !theta.is_grouplike() {
        return Err(Error::NotGroupLike);
    }
    if f.rank() != theta.alphabet.len() {
        return Err(Error::Mismatch(format!(
            "automorphism of rank {} for {} generators",
            f.rank(),
            theta.alphabet.len()
        )));
    }
    let chi_images =
        f.images.iter().map(|w| theta.evaluate(w).map(|t| t.log_unchecked())).collect::<Result<Vec<_>>>()?;
    let chi = FilteredAutomorphism::new(&theta.alphabet, theta.trunc, chi_images)?;
    let phi_images = theta.images.iter().map(Tensor::log_unchecked).collect();
    let phi = FilteredAutomorphism::new(&theta.alphabet, theta.trunc, phi_images)?;
    chi.compose(&phi.invert()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::free_lie::{bch, bracket};
    use crate::linalg::Matrix;
    use crate::word::Word;
    use num_rational::BigRational;

    type Q = BigRational;
    type T = Tensor<Q>;

    #[test]
    fn classical_expansions() {
        let h = Alphabet::standard(2);
        let m = Expansion::<Q>::magnus(&h, 3);
        assert_eq!(m.images()[0], &T::one(&h, 3) + &T::generator(&h, 3, 0));
        assert!(!Expansion::<Q>::magnus(&h, 2).is_grouplike());
        let e = Expansion::<Q>::exponential(&h, 3);
        assert!(e.is_grouplike());
        assert_eq!(e.images()[0].coeff(&Word::from_slice(&[0, 0])), Q::from_frac(1, 2));
    }

    #[test]
    fn evaluation() {
        let h = Alphabet::standard(2);
        let e = Expansion::<Q>::exponential(&h, 4);
        assert_eq!(e.evaluate(&GroupWord::from_signed(&[1, -1])).unwrap(), T::one(&h, 4));
        assert_eq!(e.evaluate(&GroupWord::identity()).unwrap(), T::one(&h, 4));
        let c = GroupWord::commutator(&GroupWord::generator(0), &GroupWord::generator(1));
        let x = e.evaluate(&c).unwrap();
        let (a, b) = (T::generator(&h, 4, 0), T::generator(&h, 4, 1));
        assert_eq!(x.degree_part(2), bracket(&a, &b).unwrap());
        assert_eq!(x.degree_part(1), T::zero(&h, 4));
    }

    #[test]
    fn fox_examples() {
        let h = Alphabet::new(["a", "b"]).unwrap();
        let t = |s: &[&str]| T::from_symbols(&h, 3, &[(s, 1)]).unwrap();
        assert_eq!(fox_t(0, &t(&["a", "a", "b"])), t(&["a", "b"]));
        assert!(fox_t(0, &t(&["b", "a", "b"])).is_zero());
        assert!(fox_t(0, &T::one(&h, 3)).is_zero());

        let g = Alphabet::standard(2);
        let e = Expansion::<Q>::exponential(&g, 4);
        assert_eq!(fox_group(&e, 0, &GroupWord::from_signed(&[1, 2])).unwrap().counit(), Q::from_i64(1));
        assert!(fox_group(&e, 0, &GroupWord::from_signed(&[2])).unwrap().is_zero());
        assert_eq!(fox_group(&e, 0, &GroupWord::from_signed(&[-1])).unwrap().counit(), Q::from_i64(-1));
    }

    #[test]
    fn automorphism_validation() {
        let f = FreeGroupAutomorphism::new(
            vec![GroupWord::from_signed(&[1, 2]), GroupWord::from_signed(&[2])],
            vec![GroupWord::from_signed(&[1, -2]), GroupWord::from_signed(&[2])],
        );
        assert!(f.is_ok());
        let bad = FreeGroupAutomorphism::new(
            vec![GroupWord::from_signed(&[1, 2]), GroupWord::from_signed(&[2])],
            vec![GroupWord::from_signed(&[1]), GroupWord::from_signed(&[2])],
        );
        assert!(matches!(bad, Err(Error::InvalidAutomorphism(_))));
    }

    #[test]
    fn induced_examples() {
        let h = Alphabet::standard(2);
        let e = Expansion::<Q>::exponential(&h, 5);
        let id = induced_automorphism(&e, &FreeGroupAutomorphism::identity(2)).unwrap();
        assert_eq!(id, FilteredAutomorphism::identity(&h, 5));

        let conj = induced_automorphism(&e, &FreeGroupAutomorphism::conjugation(2, &GroupWord::generator(0))).unwrap();
        let x1 = T::generator(&h, 5, 0);
        for j in 0..2u8 {
            let xj = T::generator(&h, 5, j);
            assert_eq!(conj.image(j as usize), &bch(&x1, &bch(&xj, &-&x1).unwrap()).unwrap());
        }

        let f = FreeGroupAutomorphism::new(
            vec![GroupWord::from_signed(&[1, 2]), GroupWord::from_signed(&[2])],
            vec![GroupWord::from_signed(&[1, -2]), GroupWord::from_signed(&[2])],
        )
        .unwrap();
        let psi = induced_automorphism(&e, &f).unwrap();
        assert_eq!(*psi.sigma(), Matrix::from_i64_rows(&[&[1, 0], &[1, 1]]));
        assert!(matches!(induced_automorphism(&Expansion::<Q>::magnus(&h, 3), &f), Err(Error::NotGroupLike)));
    }
}
