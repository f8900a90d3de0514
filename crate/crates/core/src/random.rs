//! Seeded random generators for derivations, automorphisms and matrices.
//!
//! Contract: trial `t` of a run with seed `s` draws from
//! `ChaCha8Rng::seed_from_u64(s)` on stream `t`. ChaCha is platform
//! independent and each stream is an independent sequence.

use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::alphabet::Alphabet;
use crate::automorphism::FilteredAutomorphism;
use crate::derivation::Derivation;
use crate::free_lie::lyndon_expansions;
use crate::linalg::Matrix;
use crate::magnus::{QuotientAlgebra, RMatrix};
use crate::scalar::Scalar;
use crate::tensor::Tensor;
use crate::word::all_words;

/// The generator for trial `trial` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// A nonzero rational `p/q` with `|p| <= 3`, `1 <= q <= 3`.
pub fn small_rational<S: Scalar>(rng: &mut impl Rng) -> S {
    let p = rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 };
    S::from_frac(p, rng.gen_range(1..=3))
}

/// A sparse random element of `L_k` (at most `terms` Lyndon basis elements).
pub fn lie_element<S: Scalar>(
    rng: &mut impl Rng,
    alphabet: &Arc<Alphabet>,
    trunc: usize,
    k: usize,
    terms: usize,
) -> Tensor<S> {
    let lie = lyndon_expansions(alphabet.len(), k);
    let mut out = Tensor::zero(alphabet, trunc);
    if lie.expansions.is_empty() || k > trunc {
        return out;
    }
    for _ in 0..terms {
        let p = rng.gen_range(0..lie.expansions.len());
        let c: S = small_rational(rng);
        for (w, e) in &lie.expansions[p] {
            out.add_term(w.clone(), &c.mul_ref(&S::from_i64(*e)));
        }
    }
    out
}

/// A homogeneous derivation of degree `d`; degree 0 gives a random linear map.
pub fn homogeneous_derivation<S: Scalar>(
    rng: &mut impl Rng,
    alphabet: &Arc<Alphabet>,
    trunc: usize,
    d: usize,
) -> Derivation<S> {
    let n = alphabet.len();
    if d == 0 {
        let rows = (0..n)
            .map(|_| (0..n).map(|_| if rng.gen_bool(0.5) { small_rational(rng) } else { S::zero() }).collect())
            .collect();
        return Derivation::linear(alphabet, trunc, &Matrix::from_rows(rows).expect("square")).expect("square");
    }
    let images = (0..n).map(|_| lie_element(rng, alphabet, trunc, d + 1, 2)).collect();
    Derivation::from_images_unchecked(alphabet, trunc, images)
}

/// A derivation with random pieces in degrees `from ..= trunc - 1`.
pub fn positive_derivation<S: Scalar>(
    rng: &mut impl Rng,
    alphabet: &Arc<Alphabet>,
    trunc: usize,
    from: usize,
) -> Derivation<S> {
    let mut out = Derivation::zero(alphabet, trunc);
    for d in from.max(1)..trunc {
        out = out.add(&homogeneous_derivation(rng, alphabet, trunc, d)).expect("compatible");
    }
    out
}

/// A unimodular integer matrix: a product of random elementary transvections.
pub fn unimodular<S: Scalar>(rng: &mut impl Rng, n: usize) -> Matrix<S> {
    let mut m = Matrix::identity(n);
    if n < 2 {
        return m;
    }
    for _ in 0..3 {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let c = S::from_i64(if rng.gen_bool(0.5) { 1 } else { -1 });
        let mut e = Matrix::identity(n);
        e[(i, j)] = c;
        m = m.mul(&e).expect("square");
    }
    m
}

/// `exp(δ)` with `δ` random of degrees `>= 1`.
pub fn iaut<S: Scalar>(rng: &mut impl Rng, alphabet: &Arc<Alphabet>, trunc: usize) -> FilteredAutomorphism<S> {
    FilteredAutomorphism::exp_der(&positive_derivation(rng, alphabet, trunc, 1)).expect("positive degrees")
}

/// `s(A) ∘ exp(δ)` with `A` unimodular.
pub fn aut<S: Scalar>(rng: &mut impl Rng, alphabet: &Arc<Alphabet>, trunc: usize) -> FilteredAutomorphism<S> {
    let s = FilteredAutomorphism::linear(alphabet, trunc, &unimodular(rng, alphabet.len())).expect("invertible");
    s.compose(&iaut(rng, alphabet, trunc)).expect("compatible")
}

/// `exp(δ)` with `δ` of degrees `>= m - 1`, so `ψ(x) - x ∈ L_{≥m}`.
pub fn aut_r<S: Scalar>(
    rng: &mut impl Rng,
    alphabet: &Arc<Alphabet>,
    trunc: usize,
    m: usize,
) -> FilteredAutomorphism<S> {
    let delta = positive_derivation(rng, alphabet, trunc, m - 1);
    FilteredAutomorphism::exp_der(&delta).expect("positive degrees")
}

/// A random element of the quotient with counit `counit`.
pub fn quotient_element<S: Scalar>(rng: &mut impl Rng, algebra: &QuotientAlgebra<S>, counit: S) -> Tensor<S> {
    let alphabet = algebra.alphabet();
    let mut t = Tensor::scalar(alphabet, algebra.trunc(), counit);
    for k in 1..=algebra.trunc() {
        for w in all_words(alphabet.len(), k) {
            if rng.gen_bool(0.3) {
                t.add_term(w, &small_rational(rng));
            }
        }
    }
    algebra.project(&t).expect("same algebra")
}

/// An `n × n` matrix whose degree-0 part is unipotent upper triangular.
pub fn unipotent_matrix<S: Scalar>(rng: &mut impl Rng, algebra: &Arc<QuotientAlgebra<S>>, n: usize) -> RMatrix<S> {
    let rows = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = match i.cmp(&j) {
                        std::cmp::Ordering::Equal => S::one(),
                        std::cmp::Ordering::Less => S::from_i64(rng.gen_range(-2..=2)),
                        std::cmp::Ordering::Greater => S::zero(),
                    };
                    quotient_element(rng, algebra, c)
                })
                .collect()
        })
        .collect();
    RMatrix::new(algebra, rows).expect("same algebra")
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<u32> = (0..4).map(|_| trial_rng(7, 0).gen()).collect();
        let b: Vec<u32> = (0..4).map(|_| trial_rng(7, 0).gen()).collect();
        assert_eq!(a, b);
        assert_ne!(trial_rng(7, 0).gen::<u64>(), trial_rng(7, 1).gen::<u64>());
    }

    #[test]
    fn generated_objects_are_valid() {
        let mut rng = trial_rng(1, 0);
        let h = Alphabet::standard(2);
        let d: Derivation<Q> = homogeneous_derivation(&mut rng, &h, 4, 2);
        assert!(d.is_homogeneous(2));
        assert!(d.images().iter().all(Tensor::is_primitive));
        let psi: FilteredAutomorphism<Q> = aut(&mut rng, &h, 4);
        let inv = psi.invert().unwrap();
        assert_eq!(psi.compose(&inv).unwrap(), FilteredAutomorphism::identity(&h, 4));
        let r: FilteredAutomorphism<Q> = aut_r(&mut rng, &h, 4, 3);
        for j in 0..2 {
            let diff = r.image(j) - &Tensor::generator(&h, 4, j as u8);
            assert!(diff.min_degree().is_none_or(|m| m >= 3));
        }
        let q = Arc::new(QuotientAlgebra::<Q>::new(&h, 2, 3).unwrap());
        assert!(unipotent_matrix(&mut rng, &q, 3).epsilon().rows() == 3);
    }
}
