//! Generator alphabets, optionally with a symplectic pairing.

use std::collections::HashSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::word::Word;

/// Ordered generator names. A symplectic alphabet pairs `a_i` with `b_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    names: Vec<String>,
    pairing: Option<Vec<(usize, usize)>>,
}

impl Alphabet {
    pub fn new<I, T>(names: I) -> Result<Arc<Self>>
    where
        I: IntoIterator<Item = T>,
        T: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        Self::validate_names(&names)?;
        Ok(Arc::new(Alphabet { names, pairing: None }))
    }

    /// An alphabet whose couples `(a, b)` carry the form `omega(a, b) = 1`.
    pub fn with_pairing<T: Into<String>>(names: Vec<T>, pairs: Vec<(usize, usize)>) -> Result<Arc<Self>> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        Self::validate_names(&names)?;
        if !names.len().is_multiple_of(2) {
            return Err(Error::InvalidAlphabet("a paired alphabet needs an even number of symbols".into()));
        }
        let mut seen = vec![false; names.len()];
        for &(a, b) in &pairs {
            for i in [a, b] {
                if i >= names.len() || seen[i] {
                    return Err(Error::InvalidAlphabet("every symbol must lie in exactly one couple".into()));
                }
                seen[i] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidAlphabet("every symbol must lie in exactly one couple".into()));
        }
        Ok(Arc::new(Alphabet { names, pairing: Some(pairs) }))
    }

    /// `x1, …, xn`.
    pub fn standard(n: usize) -> Arc<Self> {
        Self::new((1..=n).map(|i| format!("x{i}"))).expect("distinct names")
    }

    /// `a1, …, ag, b1, …, bg` with couples `(a_i, b_i)`.
    pub fn symplectic(genus: usize) -> Arc<Self> {
        let names: Vec<String> =
            (1..=genus).map(|i| format!("a{i}")).chain((1..=genus).map(|i| format!("b{i}"))).collect();
        Self::with_pairing(names, (0..genus).map(|i| (i, genus + i)).collect()).expect("valid pairing")
    }

    fn validate_names(names: &[String]) -> Result<()> {
        if names.is_empty() {
            return Err(Error::InvalidAlphabet("empty alphabet".into()));
        }
        if names.len() > 256 {
            return Err(Error::InvalidAlphabet("at most 256 symbols are supported".into()));
        }
        let mut seen = HashSet::new();
        for n in names {
            if !seen.insert(n.as_str()) {
                return Err(Error::InvalidAlphabet(format!("duplicate symbol `{n}`")));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: u8) -> &str {
        &self.names[i as usize]
    }

    pub fn index_of(&self, name: &str) -> Result<u8> {
        self.names.iter().position(|n| n == name).map(|i| i as u8).ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    pub fn pairing(&self) -> Option<&[(usize, usize)]> {
        self.pairing.as_deref()
    }

    /// Number of couples, if paired.
    pub fn genus(&self) -> Option<usize> {
        self.pairing.as_ref().map(Vec::len)
    }

    /// The intersection form on basis letters: `omega(a_i, b_i) = 1 = -omega(b_i, a_i)`.
    pub fn omega(&self, x: u8, y: u8) -> Result<i64> {
        let pairs = self.pairing.as_ref().ok_or_else(|| Error::InvalidAlphabet("alphabet has no pairing".into()))?;
        let (x, y) = (x as usize, y as usize);
        Ok(pairs
            .iter()
            .map(|&(a, b)| {
                if (x, y) == (a, b) {
                    1
                } else if (x, y) == (b, a) {
                    -1
                } else {
                    0
                }
            })
            .sum())
    }

    pub fn parse_word<T: AsRef<str>>(&self, symbols: &[T]) -> Result<Word> {
        let mut w = Word::empty();
        for s in symbols {
            w.push(self.index_of(s.as_ref())?);
        }
        Ok(w)
    }

    pub fn render(&self, w: &Word) -> Vec<String> {
        w.letters().iter().map(|&i| self.name(i).to_string()).collect()
    }
}
