//! Degree-truncated free associative algebra with its Hopf structure.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::word::Word;

/// An element of the free associative algebra, truncated above degree `trunc`.
///
/// Invariant: no stored coefficient is zero and no stored word is longer than `trunc`.
#[derive(Clone, PartialEq)]
pub struct Tensor<S> {
    alphabet: Arc<Alphabet>,
    trunc: usize,
    terms: BTreeMap<Word, S>,
}

/// Coproduct as a sparse map on pairs of words.
pub type Coproduct<S> = BTreeMap<(Word, Word), S>;

impl<S: Scalar> Tensor<S> {
    pub fn zero(alphabet: &Arc<Alphabet>, trunc: usize) -> Self {
        Tensor { alphabet: alphabet.clone(), trunc, terms: BTreeMap::new() }
    }

    pub fn scalar(alphabet: &Arc<Alphabet>, trunc: usize, c: S) -> Self {
        Self::monomial(alphabet, trunc, Word::empty(), c)
    }

    pub fn one(alphabet: &Arc<Alphabet>, trunc: usize) -> Self {
        Self::scalar(alphabet, trunc, S::one())
    }

    pub fn generator(alphabet: &Arc<Alphabet>, trunc: usize, i: u8) -> Self {
        Self::monomial(alphabet, trunc, Word::letter(i), S::one())
    }

    pub fn monomial(alphabet: &Arc<Alphabet>, trunc: usize, w: Word, c: S) -> Self {
        Self::from_terms(alphabet, trunc, [(w, c)])
    }

    /// Builds a tensor, summing repeated words and dropping zeros and words above `trunc`.
    pub fn from_terms<I: IntoIterator<Item = (Word, S)>>(alphabet: &Arc<Alphabet>, trunc: usize, terms: I) -> Self {
        let mut t = Self::zero(alphabet, trunc);
        for (w, c) in terms {
            t.add_term(w, &c);
        }
        t.terms.retain(|_, c| !c.is_zero());
        t
    }

    /// Parses `[(symbols, coeff)]`, e.g. `[(vec!["a","b"], 1)]`.
    pub fn from_symbols<T: AsRef<str>>(alphabet: &Arc<Alphabet>, trunc: usize, terms: &[(&[T], i64)]) -> Result<Self> {
        let mut out = Vec::new();
        for (syms, c) in terms {
            out.push((alphabet.parse_word(syms)?, S::from_i64(*c)));
        }
        Ok(Self::from_terms(alphabet, trunc, out))
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &S)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &Word) -> S {
        self.terms.get(w).cloned().unwrap_or_else(S::zero)
    }

    /// Value of the counit (the constant term).
    pub fn counit(&self) -> S {
        self.coeff(&Word::empty())
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.terms.keys().next().map(Word::len)
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.terms.keys().next_back().map(Word::len)
    }

    pub fn degree_part(&self, k: usize) -> Self {
        let terms = self.terms.iter().filter(|(w, _)| w.len() == k).map(|(w, c)| (w.clone(), c.clone()));
        Tensor { alphabet: self.alphabet.clone(), trunc: self.trunc, terms: terms.collect() }
    }

    /// Part of degree at least `k`.
    pub fn degrees_from(&self, k: usize) -> Self {
        let terms = self.terms.iter().filter(|(w, _)| w.len() >= k).map(|(w, c)| (w.clone(), c.clone()));
        Tensor { alphabet: self.alphabet.clone(), trunc: self.trunc, terms: terms.collect() }
    }

    pub fn is_homogeneous(&self, k: usize) -> bool {
        self.terms.keys().all(|w| w.len() == k)
    }

    /// Re-truncates at `trunc`, discarding longer words.
    pub fn with_trunc(&self, trunc: usize) -> Self {
        let terms = self.terms.iter().filter(|(w, _)| w.len() <= trunc).map(|(w, c)| (w.clone(), c.clone()));
        Tensor { alphabet: self.alphabet.clone(), trunc, terms: terms.collect() }
    }

    pub fn map_words<F: FnMut(&Word) -> Word>(&self, mut f: F) -> Self {
        Self::from_terms(&self.alphabet, self.trunc, self.terms.iter().map(|(w, c)| (f(w), c.clone())))
    }

    pub fn compatible(&self, other: &Self) -> Result<()> {
        if self.trunc != other.trunc {
            return Err(Error::Mismatch(format!("truncations {} and {}", self.trunc, other.trunc)));
        }
        if !Arc::ptr_eq(&self.alphabet, &other.alphabet) && self.alphabet != other.alphabet {
            return Err(Error::Mismatch("different alphabets".into()));
        }
        Ok(())
    }

    /// `self += c * w` without normalising zeros (callers clean up).
    pub(crate) fn add_term(&mut self, w: Word, c: &S) {
        if w.len() > self.trunc || c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                e.get_mut().add_assign_ref(c);
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub(crate) fn add_term_mul(&mut self, w: Word, a: &S, b: &S) {
        if w.len() > self.trunc {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(a.mul_ref(b));
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                e.get_mut().add_mul(a, b);
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let mut out = self.clone();
        out.add_assign_unchecked(other, &S::one());
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let mut out = self.clone();
        out.add_assign_unchecked(other, &-S::one());
        Ok(out)
    }

    /// `self += c * other`; alphabets are assumed compatible.
    pub(crate) fn add_assign_unchecked(&mut self, other: &Self, c: &S) {
        for (w, x) in &other.terms {
            self.add_term_mul(w.clone(), c, x);
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: &S) -> Result<()> {
        self.compatible(other)?;
        self.add_assign_unchecked(other, c);
        Ok(())
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero(&self.alphabet, self.trunc);
        }
        let terms = self.terms.iter().map(|(w, x)| (w.clone(), x.mul_ref(c))).collect();
        Tensor { alphabet: self.alphabet.clone(), trunc: self.trunc, terms }
    }

    /// Concatenation product; words above `trunc` are discarded.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        Ok(self.mul_limited(other, self.trunc))
    }

    /// Product keeping only degrees `<= limit`.
    pub(crate) fn mul_limited(&self, other: &Self, limit: usize) -> Self {
        let limit = limit.min(self.trunc);
        let mut out = Self::zero(&self.alphabet, self.trunc);
        for (u, a) in &self.terms {
            if u.len() > limit {
                break;
            }
            let room = limit - u.len();
            for (v, b) in &other.terms {
                if v.len() > room {
                    break;
                }
                out.add_term_mul(u.concat(v), a, b);
            }
        }
        out
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut out = Self::one(&self.alphabet, self.trunc);
        for _ in 0..k {
            out = out.mul_limited(self, self.trunc);
        }
        out
    }

    fn require_counit(&self, expected: S) -> Result<()> {
        let found = self.counit();
        if found != expected {
            return Err(Error::Counit { expected: expected.to_string(), found: found.to_string() });
        }
        Ok(())
    }

    /// `exp(x) = sum x^n / n!`; requires counit 0.
    pub fn exp(&self) -> Result<Self> {
        self.require_counit(S::zero())?;
        Ok(self.exp_unchecked())
    }

    pub(crate) fn exp_unchecked(&self) -> Self {
        let mut out = Self::one(&self.alphabet, self.trunc);
        let mut power = out.clone();
        for n in 1..=self.trunc {
            power = power.mul_limited(self, self.trunc).scale(&S::from_frac(1, n as i64));
            if power.is_zero() {
                break;
            }
            out.add_assign_unchecked(&power, &S::one());
        }
        out
    }

    /// `log(x) = sum (-1)^(k+1) (x-1)^k / k`; requires counit 1.
    pub fn log(&self) -> Result<Self> {
        self.require_counit(S::one())?;
        Ok(self.log_unchecked())
    }

    pub(crate) fn log_unchecked(&self) -> Self {
        let mut y = self.clone();
        y.terms.remove(&Word::empty());
        let mut out = Self::zero(&self.alphabet, self.trunc);
        let mut power = Self::one(&self.alphabet, self.trunc);
        for k in 1..=self.trunc {
            power = power.mul_limited(&y, self.trunc);
            if power.is_zero() {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            out.add_assign_unchecked(&power, &S::from_frac(sign, k as i64));
        }
        out
    }

    /// Multiplicative inverse by the geometric series; requires a nonzero counit.
    pub fn inverse(&self) -> Result<Self> {
        let c = self.counit();
        if c.is_zero() {
            return Err(Error::Counit { expected: "nonzero".into(), found: "0".into() });
        }
        let cinv = c.inv();
        // x = c (1 - y), so x^-1 = c^-1 sum y^k
        let mut y = self.scale(&-cinv.clone());
        y.terms.remove(&Word::empty());
        let mut out = Self::one(&self.alphabet, self.trunc);
        let mut power = out.clone();
        for _ in 1..=self.trunc {
            power = power.mul_limited(&y, self.trunc);
            if power.is_zero() {
                break;
            }
            out.add_assign_unchecked(&power, &S::one());
        }
        Ok(out.scale(&cinv))
    }

    /// Coproduct determined by primitive generators, as a map on word pairs.
    ///
    /// A word splits over all subsets of its positions: `Δ(w) = Σ_S w|_S ⊗ w|_{S^c}`.
    pub fn coproduct(&self) -> Coproduct<S> {
        let mut out: Coproduct<S> = BTreeMap::new();
        for (w, c) in &self.terms {
            let k = w.len();
            assert!(k < 32, "coproduct of words longer than 31 letters");
            for mask in 0u32..(1u32 << k) {
                let mut left = Word::empty();
                let mut right = Word::empty();
                for (p, &x) in w.letters().iter().enumerate() {
                    if mask & (1 << p) != 0 {
                        left.push(x);
                    } else {
                        right.push(x);
                    }
                }
                let entry = out.entry((left, right)).or_insert_with(S::zero);
                entry.add_assign_ref(c);
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// Whether `Δ(x) = x⊗1 + 1⊗x`, tested through the Dynkin criterion
    /// `D(x_k) = k x_k` on every homogeneous piece (equivalent in characteristic zero).
    pub fn is_primitive(&self) -> bool {
        if !self.counit().is_zero() {
            return false;
        }
        let Some(top) = self.max_degree() else { return true };
        (1..=top).all(|k| {
            let part = self.degree_part(k);
            part.is_zero() || crate::free_lie::dynkin_unchecked(&part) == part.scale(&S::from_i64(k as i64))
        })
    }

    /// Whether `Δ(x) = x⊗x` and `ε(x) = 1`, i.e. `log x` is primitive.
    pub fn is_grouplike(&self) -> bool {
        self.counit().is_one() && self.log_unchecked().is_primitive()
    }

    /// Renders as `[(symbols, coeff)]` for diagnostics.
    pub fn render(&self) -> Vec<(Vec<String>, String)> {
        self.terms.iter().map(|(w, c)| (self.alphabet.render(w), c.to_string())).collect()
    }
}

impl<S: fmt::Display> fmt::Debug for Tensor<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (w, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let word: Vec<&str> = w.letters().iter().map(|&i| self.alphabet.name(i)).collect();
            if word.is_empty() {
                write!(f, "{c}")?;
            } else {
                write!(f, "({c}){}", word.join("·"))?;
            }
        }
        Ok(())
    }
}

fn expect_compatible<S: Scalar>(a: &Tensor<S>, b: &Tensor<S>) {
    if let Err(e) = a.compatible(b) {
        panic!("tensor operator on incompatible operands: {e}");
    }
}

impl<S: Scalar> std::ops::Add for &Tensor<S> {
    type Output = Tensor<S>;
    /// Panics on alphabet or truncation mismatch; use [`Tensor::add`] to get an error instead.
    fn add(self, rhs: &Tensor<S>) -> Tensor<S> {
        expect_compatible(self, rhs);
        let mut out = self.clone();
        out.add_assign_unchecked(rhs, &S::one());
        out
    }
}

impl<S: Scalar> std::ops::Sub for &Tensor<S> {
    type Output = Tensor<S>;
    fn sub(self, rhs: &Tensor<S>) -> Tensor<S> {
        expect_compatible(self, rhs);
        let mut out = self.clone();
        out.add_assign_unchecked(rhs, &-S::one());
        out
    }
}

impl<S: Scalar> std::ops::Mul for &Tensor<S> {
    type Output = Tensor<S>;
    fn mul(self, rhs: &Tensor<S>) -> Tensor<S> {
        expect_compatible(self, rhs);
        self.mul_limited(rhs, self.trunc)
    }
}

impl<S: Scalar> std::ops::Neg for &Tensor<S> {
    type Output = Tensor<S>;
    fn neg(self) -> Tensor<S> {
        self.scale(&-S::one())
    }
}
