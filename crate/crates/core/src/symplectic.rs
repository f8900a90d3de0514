//! The symplectic layer: `ω`, the derivation algebra `h = Der_ω`, symplectic
//! expansions, the boundary Dehn twist, `H₁(h⁺)` quotients and sl₂-invariants.
//!
//! Letters `0..g` are `a_1..a_g` and letters `g..2g` are `b_1..b_g`, with
//! `ω(a_i, b_i) = 1`.

use std::sync::Arc;

use crate::alphabet::Alphabet;
use crate::automorphism::FilteredAutomorphism;
use crate::derivation::Derivation;
use crate::error::{Error, Result};
use crate::fox::{Expansion, GroupWord};
use crate::free_lie::{bracket_unchecked, dynkin_unchecked, lyndon_expansions, lyndon_index};
use crate::linalg::{sparse_kernel, sparse_rank, Echelon, Matrix, SparseVec};
use crate::scalar::Scalar;
use crate::tensor::Tensor;
use crate::word::Word;

/// `ω = Σ_i (a_i b_i - b_i a_i)` over a paired alphabet.
pub fn omega<S: Scalar>(alphabet: &Arc<Alphabet>, trunc: usize) -> Result<Tensor<S>> {
    let pairs = alphabet.pairing().ok_or_else(|| Error::InvalidAlphabet("alphabet has no pairing".into()))?;
    let terms = pairs.iter().flat_map(|&(a, b)| {
        let (a, b) = (a as u8, b as u8);
        [(Word::from_slice(&[a, b]), S::one()), (Word::from_slice(&[b, a]), -S::one())]
    });
    Ok(Tensor::from_terms(alphabet, trunc, terms))
}

/// Genus, paired alphabet, truncation and `ω`.
#[derive(Clone)]
pub struct SymplecticData<S> {
    genus: usize,
    alphabet: Arc<Alphabet>,
    trunc: usize,
    omega: Tensor<S>,
}

impl<S: Scalar> SymplecticData<S> {
    pub fn new(genus: usize, trunc: usize) -> Result<Self> {
        if genus == 0 {
            return Err(Error::InvalidAlphabet("genus must be positive".into()));
        }
        if trunc < 2 {
            return Err(Error::DegreeMismatch { expected: 2, found: trunc });
        }
        let alphabet = Alphabet::symplectic(genus);
        let omega = omega(&alphabet, trunc)?;
        Ok(SymplecticData { genus, alphabet, trunc, omega })
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn omega(&self) -> &Tensor<S> {
        &self.omega
    }
}

/// The boundary word `ζ = Π_i [β_i, α_i]`, with `α_i`, `β_i` the generators `i`, `g + i`.
pub fn boundary_word(genus: usize) -> GroupWord {
    (0..genus).fold(GroupWord::identity(), |acc, i| {
        let alpha = GroupWord::generator(i as u8);
        let beta = GroupWord::generator((genus + i) as u8);
        acc.mul(&GroupWord::commutator(&beta, &alpha))
    })
}

/// A basis of `h_k`, with coordinates in the [`Derivation::vectorize`] layout.
#[derive(Clone)]
pub struct HBasis<S> {
    alphabet: Arc<Alphabet>,
    degree: usize,
    basis: Vec<Derivation<S>>,
    vectors: Vec<SparseVec<S>>,
}

impl<S: Scalar> HBasis<S> {
    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Derivation<S>] {
        &self.basis
    }

    pub fn vectors(&self) -> &[SparseVec<S>] {
        &self.vectors
    }
}

fn symplectic_alphabet(alphabet: &Arc<Alphabet>) -> Result<&[(usize, usize)]> {
    alphabet.pairing().ok_or_else(|| Error::InvalidAlphabet("alphabet has no pairing".into()))
}

/// Kernel of `Hom(H, L_{k+1}) → L_{k+2}`, `δ ↦ δ(ω)`, for genus `g`; requires `trunc >= k + 2`.
pub fn h_basis<S: Scalar>(genus: usize, k: usize, trunc: usize) -> Result<HBasis<S>> {
    if trunc < k + 2 {
        return Err(Error::DegreeMismatch { expected: k + 2, found: trunc });
    }
    let data = SymplecticData::<S>::new(genus, trunc)?;
    let alphabet = data.alphabet.clone();
    let n = alphabet.len();
    let lie = lyndon_expansions(n, k + 1);
    let dim = lie.index.words.len();
    let top = lyndon_index(n, k + 2);
    let mut partner = vec![(0u8, false); n];
    for &(a, b) in symplectic_alphabet(&alphabet)? {
        partner[a] = (b as u8, true);
        partner[b] = (a as u8, false);
    }
    let columns: Vec<SparseVec<S>> = (0..n * dim)
        .map(|idx| {
            let (i, p) = (idx / dim, idx % dim);
            let pw = Tensor::from_terms(
                &alphabet,
                k + 2,
                lie.expansions[p].iter().map(|(w, c)| (w.clone(), S::from_i64(*c))),
            );
            let (other, is_a) = partner[i];
            let x = Tensor::generator(&alphabet, k + 2, other);
            // δ(a_j) = P_w contributes [P_w, b_j]; δ(b_j) = P_w contributes [a_j, P_w].
            let image = if is_a { bracket_unchecked(&pw, &x) } else { bracket_unchecked(&x, &pw) };
            image
                .terms()
                .filter_map(|(w, c)| top.position.get(w).map(|&q| (q, c.clone())))
                .collect::<std::collections::BTreeMap<_, _>>()
                .into_iter()
                .collect()
        })
        .collect();
    let (_, kernel) = sparse_kernel(&columns);
    let basis: Vec<Derivation<S>> =
        kernel.iter().map(|v| Derivation::from_lie_coordinates(&alphabet, trunc, k, v)).collect();
    let vectors = basis.iter().map(|d| d.vectorize(k)).collect();
    Ok(HBasis { alphabet, degree: k, basis, vectors })
}

/// Errors with [`Error::NotSymplectic`] unless `δ(ω) = 0`.
pub fn check_symplectic<S: Scalar>(delta: &Derivation<S>) -> Result<()> {
    let w = omega(delta.alphabet(), delta.trunc())?;
    if !delta.apply(&w)?.is_zero() {
        return Err(Error::NotSymplectic);
    }
    Ok(())
}

/// `h_k / Σ_{i+j=k} [h_i, h_j]` with a complement basis and the projection onto it.
#[derive(Clone)]
pub struct H1Quotient<S> {
    pub h: HBasis<S>,
    /// Spanning vectors of the bracket subspace (possibly dependent).
    pub brackets: Vec<SparseVec<S>>,
    /// Indices into `h.basis()` forming a complement of the bracket subspace.
    pub complement: Vec<usize>,
    /// `dim × dim h_k` matrix sending `h`-basis coordinates to complement coordinates.
    pub projection: Matrix<S>,
}

impl<S: Scalar> H1Quotient<S> {
    pub fn dim(&self) -> usize {
        self.complement.len()
    }
}

/// `H₁(h⁺)_k` for genus `g`; requires `k >= 2`.
pub fn h1_quotient<S: Scalar>(genus: usize, k: usize) -> Result<H1Quotient<S>> {
    if k < 2 {
        return Err(Error::DegreeMismatch { expected: 2, found: k });
    }
    let trunc = k + 2;
    let lower: Vec<HBasis<S>> = (1..k).map(|i| h_basis(genus, i, trunc)).collect::<Result<_>>()?;
    let h = h_basis(genus, k, trunc)?;
    let mut brackets = Vec::new();
    for i in 1..=k / 2 {
        let j = k - i;
        for (s, x) in lower[i - 1].basis.iter().enumerate() {
            let start = if i == j { s + 1 } else { 0 };
            for y in &lower[j - 1].basis[start.min(lower[j - 1].basis.len())..] {
                let v = x.bracket_unchecked(y).vectorize(k);
                if !v.is_empty() {
                    brackets.push(v);
                }
            }
        }
    }
    let mut ech = Echelon::new();
    for v in &brackets {
        ech.insert(v);
    }
    let mut complement = Vec::new();
    for (t, v) in h.vectors.iter().enumerate() {
        if ech.insert_tagged(v, t).is_ok() {
            complement.push(t);
        }
    }
    let mut projection = Matrix::zeros(complement.len(), h.dim());
    for (t, v) in h.vectors.iter().enumerate() {
        let (rest, combo) = ech.reduce_tracked(v);
        debug_assert!(rest.is_empty());
        for (tag, c) in combo {
            let row = complement.iter().position(|&x| x == tag).expect("complement tag");
            projection[(row, t)] = c;
        }
    }
    Ok(H1Quotient { h, brackets, complement, projection })
}

/// The sl₂ raising and lowering derivations `E: b ↦ a` and `F: a ↦ b` (genus 1).
fn sl2_pair<S: Scalar>(alphabet: &Arc<Alphabet>, trunc: usize) -> Result<(Derivation<S>, Derivation<S>)> {
    if alphabet.genus() != Some(1) {
        return Err(Error::Unsupported("sl2 invariant counting requires genus 1".into()));
    }
    let e = Derivation::linear(alphabet, trunc, &Matrix::from_i64_rows(&[&[0, 1], &[0, 0]]))?;
    let f = Derivation::linear(alphabet, trunc, &Matrix::from_i64_rows(&[&[0, 0], &[1, 0]]))?;
    Ok((e, f))
}

/// Dimension of the sl₂-invariants in the span of degree-`k` vectors (genus 1).
///
/// Computed as `rank(V) - rank(V → V ⊕ V, v ↦ ([E, v], [F, v]))`.
pub fn sl2_invariant_count<S: Scalar>(alphabet: &Arc<Alphabet>, k: usize, space: &[SparseVec<S>]) -> Result<usize> {
    let trunc = k + 1;
    let (e, f) = sl2_pair::<S>(alphabet, trunc)?;
    let offset = alphabet.len() * lyndon_index(alphabet.len(), k + 1).words.len();
    let images: Vec<SparseVec<S>> = space
        .iter()
        .map(|v| {
            let d = Derivation::from_vector(alphabet, trunc, k, v);
            let mut out = e.bracket_unchecked(&d).vectorize(k);
            out.extend(f.bracket_unchecked(&d).vectorize(k).into_iter().map(|(i, c)| (i + offset, c)));
            out
        })
        .collect();
    Ok(sparse_rank(space) - sparse_rank(&images))
}

/// Multiplicity of the trivial representation in `H₁(h⁺)_k` (genus 1).
pub fn h1_invariant_count<S: Scalar>(k: usize) -> Result<usize> {
    let q = h1_quotient::<S>(1, k)?;
    let alphabet = q.h.alphabet.clone();
    Ok(sl2_invariant_count(&alphabet, k, &q.h.vectors)? - sl2_invariant_count(&alphabet, k, &q.brackets)?)
}

/// Right-normed bracketing `x_1 .. x_d ↦ [x_1, [x_2, .. x_d]]` of a degree-`d` tensor.
fn right_normed<S: Scalar>(t: &Tensor<S>, d: usize) -> Tensor<S> {
    let reversed = t.map_words(|w| Word::from_slice(&w.letters().iter().rev().copied().collect::<Vec<_>>()));
    let out = dynkin_unchecked(&reversed);
    if d.is_multiple_of(2) {
        -&out
    } else {
        out
    }
}

/// A group-like expansion with `log θ(ζ) = -ω` through degree `trunc`, `ζ` as in [`boundary_word`].
///
/// Starts from `γ ↦ exp(x)` and cancels the degree-`(d+1)` error `e` by
/// `θ(α_i) ← θ(α_i) exp(u_i)`, `θ(β_i) ← θ(β_i) exp(v_i)` with `u_i, v_i ∈ L_d`
/// solving `Σ_i [b_i, u_i] - [a_i, v_i] = -e`. Writing `e = Σ_x [x, c_x]` with
/// `c_x = D'(∂_x e) / (d+1)` and `D'` the right-normed bracketing gives
/// `u_i = -c_{b_i}` and `v_i = c_{a_i}`.
pub fn symplectic_expansion<S: Scalar>(genus: usize, trunc: usize) -> Result<Expansion<S>> {
    let data = SymplecticData::<S>::new(genus, trunc)?;
    let alphabet = data.alphabet.clone();
    let zeta = boundary_word(genus);
    let mut images: Vec<Tensor<S>> =
        (0..2 * genus).map(|i| Tensor::generator(&alphabet, trunc, i as u8).exp_unchecked()).collect();
    for d in 2..trunc {
        let theta = Expansion::new(&alphabet, trunc, images.clone())?;
        let err = (&theta.evaluate(&zeta)?.log()? + &data.omega).degree_part(d + 1);
        if err.is_zero() {
            continue;
        }
        let scale = S::from_frac(1, (d + 1) as i64);
        let c: Vec<Tensor<S>> =
            (0..2 * genus).map(|x| right_normed(&crate::fox::fox_t(x as u8, &err), d).scale(&scale)).collect();
        for i in 0..genus {
            let u = -&c[genus + i];
            let v = c[i].clone();
            images[i] = &images[i] * &u.exp_unchecked();
            images[genus + i] = &images[genus + i] * &v.exp_unchecked();
        }
    }
    Expansion::new(&alphabet, trunc, images)
}

/// `x ↦ exp(-ω) x exp(ω)`, the image of the boundary Dehn twist.
pub fn dehn_twist_boundary<S: Scalar>(genus: usize, trunc: usize) -> Result<FilteredAutomorphism<S>> {
    let data = SymplecticData::<S>::new(genus, trunc)?;
    let alphabet = &data.alphabet;
    let left = (-&data.omega).exp_unchecked();
    let right = data.omega.exp_unchecked();
    let images = (0..2 * genus).map(|i| &(&left * &Tensor::generator(alphabet, trunc, i as u8)) * &right).collect();
    FilteredAutomorphism::new(alphabet, trunc, images)
}

/// `t: u ↦ [u, ω]`, homogeneous of degree 2.
pub fn dehn_twist_derivation<S: Scalar>(genus: usize, trunc: usize) -> Result<Derivation<S>> {
    let data = SymplecticData::<S>::new(genus, trunc)?;
    let images = (0..2 * genus)
        .map(|i| bracket_unchecked(&Tensor::generator(&data.alphabet, trunc, i as u8), &data.omega))
        .collect();
    Ok(Derivation::from_images_unchecked(&data.alphabet, trunc, images))
}

/// `Σ_i (-b_i) ⊗ δ(a_i) + a_i ⊗ δ(b_i)` in `H^{⊗(k+2)}`, for `δ ∈ h_k`.
pub fn embed_h<S: Scalar>(delta: &Derivation<S>, k: usize) -> Result<Tensor<S>> {
    let alphabet = delta.alphabet().clone();
    let pairs = symplectic_alphabet(&alphabet)?.to_vec();
    if !delta.is_homogeneous(k) {
        return Err(Error::NotHomogeneous(k));
    }
    if delta.trunc() < k + 2 {
        return Err(Error::DegreeMismatch { expected: k + 2, found: delta.trunc() });
    }
    check_symplectic(delta)?;
    let mut out = Tensor::zero(&alphabet, k + 2);
    for (a, b) in pairs {
        for (x, y, sign) in [(b, a, -S::one()), (a, b, S::one())] {
            let head = Word::letter(x as u8);
            for (w, c) in delta.image(y).terms() {
                out.add_term(head.concat(w), &c.mul_ref(&sign));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::Tensor as T;
    use num_rational::BigRational;

    type Q = BigRational;

    #[test]
    fn omega_is_primitive() {
        let d = SymplecticData::<Q>::new(2, 4).unwrap();
        assert!(d.omega().is_primitive());
        assert!(d.omega().is_homogeneous(2));
        assert!(SymplecticData::<Q>::new(0, 4).is_err());
    }

    #[test]
    fn small_h_dimensions() {
        let dims: Vec<usize> = (1..=6).map(|k| h_basis::<Q>(1, k, k + 2).unwrap().dim()).collect();
        assert_eq!(dims, vec![0, 1, 0, 3, 0, 6]);
        let h = h_basis::<Q>(1, 4, 6).unwrap();
        assert!(h.basis().iter().all(|d| check_symplectic(d).is_ok()));
        assert!(h_basis::<Q>(1, 4, 5).is_err());
    }

    #[test]
    fn from_vector_inverts_vectorize() {
        let h = h_basis::<Q>(2, 2, 4).unwrap();
        for (d, v) in h.basis().iter().zip(h.vectors()) {
            assert_eq!(&d.vectorize(2), v);
        }
    }

    #[test]
    fn h1_small_degrees() {
        assert_eq!(h1_quotient::<Q>(1, 2).unwrap().dim(), 1);
        assert_eq!(h1_invariant_count::<Q>(2).unwrap(), 1);
        let h2 = h_basis::<Q>(1, 2, 4).unwrap();
        assert_eq!(sl2_invariant_count(h2.alphabet(), 2, h2.vectors()).unwrap(), 1);
        let h4 = h_basis::<Q>(1, 4, 6).unwrap();
        assert_eq!(sl2_invariant_count(h4.alphabet(), 4, h4.vectors()).unwrap(), 0);
        let h = h_basis::<Q>(2, 1, 3).unwrap();
        assert!(sl2_invariant_count(h.alphabet(), 1, h.vectors()).is_err());
    }

    #[test]
    fn expansion_is_symplectic() {
        for g in 1..=2 {
            let theta = symplectic_expansion::<Q>(g, 5).unwrap();
            assert!(theta.is_grouplike());
            let log = theta.evaluate(&boundary_word(g)).unwrap().log().unwrap();
            assert_eq!(log, -&omega::<Q>(theta.alphabet(), 5).unwrap());
        }
    }

    #[test]
    fn dehn_twist_log() {
        let t = dehn_twist_boundary::<Q>(1, 5).unwrap();
        assert!(t.is_iaut());
        assert_eq!(t.filtration_degree().unwrap(), Some(2));
        assert_eq!(t.log_aut().unwrap(), dehn_twist_derivation::<Q>(1, 5).unwrap());
    }

    #[test]
    fn embedding() {
        let t = dehn_twist_derivation::<Q>(1, 4).unwrap();
        let e = embed_h(&t, 2).unwrap();
        assert!(e.is_homogeneous(4));
        let zero = Derivation::<Q>::zero(&Alphabet::symplectic(1), 4);
        assert!(embed_h(&zero, 2).unwrap().is_zero());
        let h = Alphabet::symplectic(1);
        let bad = Derivation::new(
            &h,
            4,
            vec![T::<Q>::zero(&h, 4), bracket_unchecked(&T::generator(&h, 4, 0), &T::generator(&h, 4, 1))],
        )
        .unwrap();
        assert_eq!(embed_h(&bad, 1), Err(Error::NotSymplectic));
    }
}
