//! The cyclic quotient `C = T/[T,T]` and the symmetric algebra `S`.
//!
//! Both are stored as sparse maps from canonical words: least rotations for
//! cyclic words (necklaces), non-decreasing letter sequences for symmetric ones.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tensor::Tensor;
use crate::word::Word;

/// A linear combination of necklaces, keyed by least rotation.
#[derive(Clone, PartialEq)]
pub struct CyclicElement<S> {
    alphabet: Arc<Alphabet>,
    trunc: usize,
    terms: BTreeMap<Word, S>,
}

/// A linear combination of sorted words: an element of the truncated symmetric algebra.
#[derive(Clone, PartialEq)]
pub struct SymElement<S> {
    alphabet: Arc<Alphabet>,
    trunc: usize,
    terms: BTreeMap<Word, S>,
}

fn accumulate<S: Scalar>(map: &mut BTreeMap<Word, S>, w: Word, c: &S) {
    if c.is_zero() {
        return;
    }
    match map.entry(w) {
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

macro_rules! graded_common {
    ($ty:ident, $canon:expr) => {
        impl<S: Scalar> $ty<S> {
            pub fn zero(alphabet: &Arc<Alphabet>, trunc: usize) -> Self {
                $ty { alphabet: alphabet.clone(), trunc, terms: BTreeMap::new() }
            }

            /// Canonicalizes arbitrary words; words above `trunc` are dropped.
            pub fn from_terms<I: IntoIterator<Item = (Word, S)>>(
                alphabet: &Arc<Alphabet>,
                trunc: usize,
                terms: I,
            ) -> Self {
                let mut out = Self::zero(alphabet, trunc);
                for (w, c) in terms {
                    if w.len() <= trunc {
                        accumulate(&mut out.terms, $canon(&w), &c);
                    }
                }
                out
            }

            /// The class of a tensor.
            pub fn from_tensor(t: &Tensor<S>) -> Self {
                Self::from_terms(t.alphabet(), t.trunc(), t.terms().map(|(w, c)| (w.clone(), c.clone())))
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

            pub fn coeff(&self, w: &Word) -> S {
                self.terms.get(&$canon(w)).cloned().unwrap_or_else(S::zero)
            }

            pub fn is_zero(&self) -> bool {
                self.terms.is_empty()
            }

            pub fn len(&self) -> usize {
                self.terms.len()
            }

            pub fn is_empty(&self) -> bool {
                self.terms.is_empty()
            }

            pub fn degree_part(&self, k: usize) -> Self {
                let terms =
                    self.terms.iter().filter(|(w, _)| w.len() == k).map(|(w, c)| (w.clone(), c.clone())).collect();
                $ty { alphabet: self.alphabet.clone(), trunc: self.trunc, terms }
            }

            pub fn with_trunc(&self, trunc: usize) -> Self {
                let terms =
                    self.terms.iter().filter(|(w, _)| w.len() <= trunc).map(|(w, c)| (w.clone(), c.clone())).collect();
                $ty { alphabet: self.alphabet.clone(), trunc, terms }
            }

            /// The representative tensor (canonical words), at truncation `trunc`.
            pub fn to_tensor(&self, trunc: usize) -> Tensor<S> {
                Tensor::from_terms(&self.alphabet, trunc, self.terms.iter().map(|(w, c)| (w.clone(), c.clone())))
            }

            pub fn compatible(&self, other: &Self) -> Result<()> {
                if self.trunc != other.trunc || *self.alphabet != *other.alphabet {
                    return Err(Error::Mismatch(format!(
                        "{} operands differ in alphabet or truncation",
                        stringify!($ty)
                    )));
                }
                Ok(())
            }

            pub fn add(&self, other: &Self) -> Result<Self> {
                self.compatible(other)?;
                let mut out = self.clone();
                for (w, c) in &other.terms {
                    accumulate(&mut out.terms, w.clone(), c);
                }
                Ok(out)
            }

            pub fn sub(&self, other: &Self) -> Result<Self> {
                self.add(&other.scale(&-S::one()))
            }

            pub fn scale(&self, c: &S) -> Self {
                if c.is_zero() {
                    return Self::zero(&self.alphabet, self.trunc);
                }
                let terms = self.terms.iter().map(|(w, x)| (w.clone(), x.mul_ref(c))).collect();
                $ty { alphabet: self.alphabet.clone(), trunc: self.trunc, terms }
            }

            pub fn render(&self) -> Vec<(Vec<String>, String)> {
                self.terms.iter().map(|(w, c)| (self.alphabet.render(w), c.to_string())).collect()
            }
        }

        impl<S: fmt::Display> fmt::Debug for $ty<S> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                if self.terms.is_empty() {
                    return write!(f, "0");
                }
                let parts: Vec<String> = self
                    .terms
                    .iter()
                    .map(|(w, c)| {
                        let word: Vec<&str> = w.letters().iter().map(|&i| self.alphabet.name(i)).collect();
                        format!("({c})[{}]", word.join(" "))
                    })
                    .collect();
                write!(f, "{}", parts.join(" + "))
            }
        }
    };
}

graded_common!(CyclicElement, Word::least_rotation);
graded_common!(SymElement, Word::sorted);

impl<S: Scalar> CyclicElement<S> {
    /// Pushes to the symmetric algebra by sorting letters.
    pub fn to_sym(&self) -> SymElement<S> {
        SymElement::from_terms(&self.alphabet, self.trunc, self.terms.iter().map(|(w, c)| (w.clone(), c.clone())))
    }
}

impl<S: Scalar> SymElement<S> {
    pub fn one(alphabet: &Arc<Alphabet>, trunc: usize) -> Self {
        Self::from_terms(alphabet, trunc, [(Word::empty(), S::one())])
    }

    pub fn counit(&self) -> S {
        self.coeff(&Word::empty())
    }

    /// Commutative product, truncated.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let mut out = Self::zero(&self.alphabet, self.trunc);
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                if u.len() + v.len() > self.trunc {
                    break;
                }
                let mut merged: Vec<u8> = Vec::with_capacity(u.len() + v.len());
                let (x, y) = (u.letters(), v.letters());
                let (mut i, mut j) = (0, 0);
                while i < x.len() || j < y.len() {
                    if j == y.len() || (i < x.len() && x[i] <= y[j]) {
                        merged.push(x[i]);
                        i += 1;
                    } else {
                        merged.push(y[j]);
                        j += 1;
                    }
                }
                accumulate(&mut out.terms, Word::from_slice(&merged), &a.mul_ref(b));
            }
        }
        out
    }

    /// `exp`, requires counit 0.
    pub fn exp(&self) -> Result<Self> {
        if !self.counit().is_zero() {
            return Err(Error::Counit { expected: "0".into(), found: self.counit().to_string() });
        }
        let mut out = Self::one(&self.alphabet, self.trunc);
        let mut power = out.clone();
        for n in 1..=self.trunc {
            power = power.mul_unchecked(self).scale(&S::from_frac(1, n as i64));
            if power.is_zero() {
                break;
            }
            out = out.add(&power)?;
        }
        Ok(out)
    }

    /// `log`, requires counit 1.
    pub fn log(&self) -> Result<Self> {
        if !self.counit().is_one() {
            return Err(Error::Counit { expected: "1".into(), found: self.counit().to_string() });
        }
        let y = self.sub(&Self::one(&self.alphabet, self.trunc))?;
        let mut out = Self::zero(&self.alphabet, self.trunc);
        let mut power = Self::one(&self.alphabet, self.trunc);
        for k in 1..=self.trunc {
            power = power.mul_unchecked(&y);
            if power.is_zero() {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            out = out.add(&power.scale(&S::from_frac(sign, k as i64)))?;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    #[test]
    fn canonical_keys() {
        let h = Alphabet::new(["a", "b"]).unwrap();
        let ab = Word::from_slice(&[0, 1]);
        let ba = Word::from_slice(&[1, 0]);
        let c = CyclicElement::<Q>::from_terms(&h, 3, [(ab.clone(), Q::from_i64(3)), (ba.clone(), Q::from_i64(-3))]);
        assert!(c.is_zero());
        let s = SymElement::<Q>::from_terms(&h, 3, [(ba, Q::from_i64(2))]);
        assert_eq!(s.coeff(&ab), Q::from_i64(2));
    }

    #[test]
    fn sym_exp_log() {
        let h = Alphabet::new(["a", "b"]).unwrap();
        let x = SymElement::<Q>::from_terms(
            &h,
            4,
            [(Word::letter(0), Q::from_i64(1)), (Word::from_slice(&[1, 0]), Q::from_i64(2))],
        );
        assert_eq!(x.exp().unwrap().log().unwrap(), x);
        let a = SymElement::<Q>::from_terms(&h, 4, [(Word::letter(0), Q::from_i64(1))]);
        let b = SymElement::<Q>::from_terms(&h, 4, [(Word::letter(1), Q::from_i64(1))]);
        assert_eq!(a.exp().unwrap().mul(&b.exp().unwrap()).unwrap(), a.add(&b).unwrap().exp().unwrap());
    }
}
