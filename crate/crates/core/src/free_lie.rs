//! The free Lie algebra inside the tensor algebra.
//!
//! Lie elements are kept in expanded tensor form. The Lyndon basis element
//! `P_w` (bracketing of the standard factorization) equals `w` plus strictly
//! larger words of the same length, so a Lie element is determined by its
//! coefficients on Lyndon words and its coordinates follow by triangular
//! elimination.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::linalg::SparseVec;
use crate::scalar::Scalar;
use crate::tensor::Tensor;
use crate::word::{lyndon_words, Word};

/// Lyndon words of one length with their positions.
#[derive(Debug)]
pub struct LyndonIndex {
    pub words: Vec<Word>,
    pub position: HashMap<Word, usize>,
}

/// Integer expansions of the standard bracketings `P_w`, aligned with [`LyndonIndex::words`].
#[derive(Debug)]
pub struct LyndonExpansions {
    pub index: Arc<LyndonIndex>,
    pub expansions: Vec<Vec<(Word, i64)>>,
}

type Cache<T> = Mutex<HashMap<(usize, usize), Arc<T>>>;

fn index_cache() -> &'static Cache<LyndonIndex> {
    static CACHE: OnceLock<Cache<LyndonIndex>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn expansion_cache() -> &'static Cache<LyndonExpansions> {
    static CACHE: OnceLock<Cache<LyndonExpansions>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Lyndon words of length `k` over `n` letters (cached).
pub fn lyndon_index(n: usize, k: usize) -> Arc<LyndonIndex> {
    if let Some(t) = index_cache().lock().unwrap().get(&(n, k)) {
        return t.clone();
    }
    let words = lyndon_words(n, k);
    let position = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
    let t = Arc::new(LyndonIndex { words, position });
    index_cache().lock().unwrap().entry((n, k)).or_insert(t).clone()
}

/// Longest proper Lyndon suffix split `w = u v`.
fn standard_factorization(w: &Word) -> (Word, Word) {
    let n = w.len();
    for i in 1..n {
        let v = w.slice(i, n);
        if v.is_lyndon() {
            return (w.slice(0, i), v);
        }
    }
    unreachable!("a Lyndon word of length >= 2 has a proper Lyndon suffix")
}

fn int_bracket(x: &[(Word, i64)], y: &[(Word, i64)]) -> Vec<(Word, i64)> {
    let mut out: BTreeMap<Word, i64> = BTreeMap::new();
    for (u, a) in x {
        for (v, b) in y {
            *out.entry(u.concat(v)).or_default() += a * b;
            *out.entry(v.concat(u)).or_default() -= a * b;
        }
    }
    out.into_iter().filter(|(_, c)| *c != 0).collect()
}

/// Expansions of `P_w` for all Lyndon words of length `k` over `n` letters (cached).
pub fn lyndon_expansions(n: usize, k: usize) -> Arc<LyndonExpansions> {
    if let Some(t) = expansion_cache().lock().unwrap().get(&(n, k)) {
        return t.clone();
    }
    let index = lyndon_index(n, k);
    let expansions = index
        .words
        .iter()
        .map(|w| {
            if k == 1 {
                return vec![(w.clone(), 1)];
            }
            let (u, v) = standard_factorization(w);
            let pu = lyndon_expansions(n, u.len());
            let pv = lyndon_expansions(n, v.len());
            int_bracket(&pu.expansions[pu.index.position[&u]], &pv.expansions[pv.index.position[&v]])
        })
        .collect();
    let t = Arc::new(LyndonExpansions { index, expansions });
    expansion_cache().lock().unwrap().entry((n, k)).or_insert(t).clone()
}

/// A Lyndon basis element of `L_k` with its expanded tensor form.
#[derive(Clone, PartialEq)]
pub struct LieBasisElement<S> {
    pub degree: usize,
    pub lyndon_word: Word,
    pub tensor_form: Tensor<S>,
}

impl<S: std::fmt::Display> std::fmt::Debug for LieBasisElement<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "P{:?} = {:?}", self.lyndon_word, self.tensor_form)
    }
}

/// The tensor form of `P_w` for a Lyndon word `w`.
pub fn lyndon_element<S: Scalar>(alphabet: &Arc<Alphabet>, trunc: usize, w: &Word) -> Tensor<S> {
    let table = lyndon_expansions(alphabet.len(), w.len());
    let pos = table.index.position[w];
    expansion_tensor(alphabet, trunc, &table.expansions[pos])
}

fn expansion_tensor<S: Scalar>(alphabet: &Arc<Alphabet>, trunc: usize, e: &[(Word, i64)]) -> Tensor<S> {
    Tensor::from_terms(alphabet, trunc, e.iter().map(|(w, c)| (w.clone(), S::from_i64(*c))))
}

/// Lyndon basis of `L_k`; requires `1 <= k <= trunc`.
pub fn lyndon_basis<S: Scalar>(alphabet: &Arc<Alphabet>, trunc: usize, k: usize) -> Vec<LieBasisElement<S>> {
    if k == 0 || k > trunc {
        return Vec::new();
    }
    let table = lyndon_expansions(alphabet.len(), k);
    table
        .index
        .words
        .iter()
        .zip(&table.expansions)
        .map(|(w, e)| LieBasisElement {
            degree: k,
            lyndon_word: w.clone(),
            tensor_form: expansion_tensor(alphabet, trunc, e),
        })
        .collect()
}

/// `xy - yx`.
pub fn bracket<S: Scalar>(x: &Tensor<S>, y: &Tensor<S>) -> Result<Tensor<S>> {
    x.compatible(y)?;
    Ok(bracket_unchecked(x, y))
}

pub(crate) fn bracket_unchecked<S: Scalar>(x: &Tensor<S>, y: &Tensor<S>) -> Tensor<S> {
    let mut out = x.mul_limited(y, x.trunc());
    out.add_assign_unchecked(&y.mul_limited(x, x.trunc()), &-S::one());
    out
}

/// Coordinates of a homogeneous Lie element of degree `k` in the Lyndon basis.
pub fn lie_coordinates<S: Scalar>(x: &Tensor<S>, k: usize) -> Result<Vec<S>> {
    if !x.is_homogeneous(k) {
        return Err(Error::NotHomogeneous(k));
    }
    let table = lyndon_expansions(x.alphabet().len(), k);
    let mut coords = vec![S::zero(); table.index.words.len()];
    let mut rest: BTreeMap<Word, S> = x.terms().map(|(w, c)| (w.clone(), c.clone())).collect();
    while let Some((w, c)) = rest.pop_first() {
        let Some(&pos) = table.index.position.get(&w) else {
            return Err(Error::NotLie);
        };
        for (v, e) in table.expansions[pos].iter().skip(1) {
            let entry = rest.entry(v.clone()).or_insert_with(S::zero);
            entry.sub_assign_ref(&c.mul_ref(&S::from_i64(*e)));
            if entry.is_zero() {
                rest.remove(v);
            }
        }
        coords[pos] = c;
    }
    Ok(coords)
}

/// Coefficients of a degree-`k` element on Lyndon words, indexed by Lyndon position.
///
/// Injective on `L_k`, so it is a faithful vectorization of Lie elements.
pub fn lyndon_coefficients<S: Scalar>(x: &Tensor<S>, k: usize) -> SparseVec<S> {
    let index = lyndon_index(x.alphabet().len(), k);
    let mut v: SparseVec<S> = x
        .terms()
        .filter(|(w, _)| w.len() == k)
        .filter_map(|(w, c)| index.position.get(w).map(|&p| (p, c.clone())))
        .collect();
    v.sort_by_key(|(p, _)| *p);
    v
}

/// Left-normed bracketing `w ↦ [..[[x_{i1}, x_{i2}], x_{i3}], .., x_{ik}]`, extended linearly.
pub fn dynkin<S: Scalar>(x: &Tensor<S>) -> Result<Tensor<S>> {
    let k = x.min_degree().unwrap_or(1);
    if k == 0 || !x.is_homogeneous(k) {
        return Err(Error::NotHomogeneous(k));
    }
    Ok(dynkin_unchecked(x))
}

pub(crate) fn dynkin_unchecked<S: Scalar>(x: &Tensor<S>) -> Tensor<S> {
    let terms: Vec<(Word, S)> = x.terms().map(|(w, c)| (w.clone(), c.clone())).collect();
    let out = left_normed(&terms);
    Tensor::from_terms(x.alphabet(), x.trunc(), out)
}

fn left_normed<S: Scalar>(terms: &[(Word, S)]) -> BTreeMap<Word, S> {
    let Some(k) = terms.first().map(|(w, _)| w.len()) else { return BTreeMap::new() };
    if k <= 1 {
        return terms.iter().cloned().collect();
    }
    let mut by_last: BTreeMap<u8, Vec<(Word, S)>> = BTreeMap::new();
    for (w, c) in terms {
        by_last.entry(w.letters()[k - 1]).or_default().push((w.slice(0, k - 1), c.clone()));
    }
    let mut out: BTreeMap<Word, S> = BTreeMap::new();
    for (x, group) in by_last {
        let xw = Word::letter(x);
        for (u, c) in left_normed(&group) {
            out.entry(u.concat(&xw)).or_insert_with(S::zero).add_assign_ref(&c);
            out.entry(xw.concat(&u)).or_insert_with(S::zero).sub_assign_ref(&c);
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// `log(exp(x) exp(y))`, for primitive `x`, `y`.
pub fn bch<S: Scalar>(x: &Tensor<S>, y: &Tensor<S>) -> Result<Tensor<S>> {
    x.compatible(y)?;
    for z in [x, y] {
        if !z.is_primitive() {
            return Err(Error::NotPrimitive("bch arguments must be Lie elements".into()));
        }
    }
    Ok(bch_unchecked(x, y))
}

pub(crate) fn bch_unchecked<S: Scalar>(x: &Tensor<S>, y: &Tensor<S>) -> Tensor<S> {
    (&x.exp_unchecked() * &y.exp_unchecked()).log_unchecked()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;
    type T = Tensor<Q>;

    fn witt(n: usize, k: usize) -> usize {
        fn mobius(mut d: usize) -> i64 {
            let mut m = 1;
            let mut p = 2;
            while p * p <= d {
                if d.is_multiple_of(p) {
                    d /= p;
                    if d.is_multiple_of(p) {
                        return 0;
                    }
                    m = -m;
                }
                p += 1;
            }
            if d > 1 {
                m = -m;
            }
            m
        }
        let s: i64 = (1..=k).filter(|d| k.is_multiple_of(*d)).map(|d| mobius(d) * (n as i64).pow((k / d) as u32)).sum();
        (s / k as i64) as usize
    }

    #[test]
    fn basis_sizes_follow_witt() {
        let h2 = Alphabet::new(["a", "b"]).unwrap();
        let b3 = lyndon_basis::<Q>(&h2, 3, 3);
        assert_eq!(b3.len(), 2);
        assert_eq!(b3[0].lyndon_word, Word::from_slice(&[0, 0, 1]));
        assert_eq!(lyndon_index(2, 11).words.len(), 186);
        assert_eq!(lyndon_index(4, 5).words.len(), 204);
        for n in [2, 4] {
            for k in 1..=12 {
                if n == 4 && k > 9 {
                    continue;
                }
                assert_eq!(lyndon_index(n, k).words.len(), witt(n, k), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn standard_bracketing_is_unitriangular() {
        for k in 1..=8 {
            let t = lyndon_expansions(2, k);
            for (w, e) in t.index.words.iter().zip(&t.expansions) {
                assert_eq!(e[0], (w.clone(), 1));
                assert!(e[1..].iter().all(|(v, _)| v > w));
            }
        }
    }

    #[test]
    fn bracket_identities() {
        let h = Alphabet::new(["a", "b", "c"]).unwrap();
        let [a, b, c] = [0, 1, 2].map(|i| T::generator(&h, 3, i));
        assert_eq!(bracket(&a, &b).unwrap(), &(&a * &b) - &(&b * &a));
        assert!(bracket(&a, &a).unwrap().is_zero());
        let br = |x: &T, y: &T| bracket(x, y).unwrap();
        let jacobi = &(&br(&br(&a, &b), &c) + &br(&br(&b, &c), &a)) + &br(&br(&c, &a), &b);
        assert!(jacobi.is_zero());
    }

    #[test]
    fn coordinates_and_non_lie_rejection() {
        let h = Alphabet::new(["a", "b"]).unwrap();
        let (a, b) = (T::generator(&h, 3, 0), T::generator(&h, 3, 1));
        let comm = bracket(&a, &b).unwrap();
        assert_eq!(lie_coordinates(&comm, 2).unwrap(), vec![Q::from_i64(1)]);
        let sym = &(&a * &b) + &(&b * &a);
        assert_eq!(lie_coordinates(&sym, 2), Err(Error::NotLie));
        assert!(!sym.is_primitive());
    }

    #[test]
    fn dynkin_examples() {
        let h = Alphabet::new(["a", "b"]).unwrap();
        let (a, b) = (T::generator(&h, 3, 0), T::generator(&h, 3, 1));
        let ab = &a * &b;
        let comm = bracket(&a, &b).unwrap();
        assert_eq!(dynkin(&ab).unwrap(), comm);
        assert_eq!(dynkin(&comm).unwrap(), comm.scale(&Q::from_i64(2)));
        assert!(dynkin(&(&a * &a)).unwrap().is_zero());
        assert!(dynkin(&(&a + &ab)).is_err());
    }

    #[test]
    fn bch_examples() {
        let h = Alphabet::new(["a", "b"]).unwrap();
        let (a, b) = (T::generator(&h, 2, 0), T::generator(&h, 2, 1));
        assert_eq!(bch(&a, &T::zero(&h, 2)).unwrap(), a);
        let expected = &(&a + &b) + &bracket(&a, &b).unwrap().scale(&Q::from_frac(1, 2));
        assert_eq!(bch(&a, &b).unwrap(), expected);
        assert!(bch(&a, &-&a).unwrap().is_zero());
        assert!(bch(&a, &(&a * &b)).is_err());
    }
}
