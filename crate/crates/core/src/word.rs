//! Words over an alphabet of at most 256 letters.

use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

/// A word, ordered by length and then lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(SmallVec<[u8; 16]>);

impl Word {
    pub fn empty() -> Self {
        Word(SmallVec::new())
    }

    pub fn letter(i: u8) -> Self {
        let mut w = SmallVec::new();
        w.push(i);
        Word(w)
    }

    pub fn from_slice(letters: &[u8]) -> Self {
        Word(SmallVec::from_slice(letters))
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<u8> {
        self.0.first().copied()
    }

    pub fn push(&mut self, letter: u8) {
        self.0.push(letter);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut w = SmallVec::with_capacity(self.len() + other.len());
        w.extend_from_slice(&self.0);
        w.extend_from_slice(&other.0);
        Word(w)
    }

    /// The word with its first letter removed.
    pub fn tail(&self) -> Word {
        Word::from_slice(&self.0[1.min(self.len())..])
    }

    pub fn slice(&self, start: usize, end: usize) -> Word {
        Word::from_slice(&self.0[start..end])
    }

    /// Strictly smaller than each of its proper suffixes.
    pub fn is_lyndon(&self) -> bool {
        !self.is_empty() && (1..self.len()).all(|i| self.0[..] < self.0[i..])
    }

    /// Lexicographically least rotation (the necklace representative).
    pub fn least_rotation(&self) -> Word {
        let n = self.len();
        let mut best = self.clone();
        for r in 1..n {
            let mut rot: SmallVec<[u8; 16]> = SmallVec::with_capacity(n);
            rot.extend_from_slice(&self.0[r..]);
            rot.extend_from_slice(&self.0[..r]);
            if rot < best.0 {
                best = Word(rot);
            }
        }
        best
    }

    pub fn sorted(&self) -> Word {
        let mut w = self.0.clone();
        w.sort_unstable();
        Word(w)
    }

    pub fn is_sorted(&self) -> bool {
        self.0.windows(2).all(|p| p[0] <= p[1])
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &self.0[..])
    }
}

/// All words of length `k` over `n` letters, in lexicographic order.
pub fn all_words(n: usize, k: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    for _ in 0..k {
        out = out
            .iter()
            .flat_map(|w| {
                (0..n as u8).map(move |x| {
                    let mut v = w.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    out
}

/// Lyndon words of length `k` over `n` letters in lexicographic order (Duval's algorithm).
pub fn lyndon_words(n: usize, k: usize) -> Vec<Word> {
    let mut out = Vec::new();
    if k == 0 || n == 0 {
        return out;
    }
    let top = (n - 1) as u8;
    let mut w: Vec<u8> = vec![0];
    loop {
        if w.len() == k {
            out.push(Word::from_slice(&w));
        }
        let m = w.len();
        while w.len() < k {
            let c = w[w.len() - m];
            w.push(c);
        }
        while w.last() == Some(&top) {
            w.pop();
        }
        match w.last_mut() {
            Some(last) => *last += 1,
            None => break,
        }
    }
    out
}

/// Least-rotation representatives of all necklaces of length `k` over `n` letters.
pub fn necklaces(n: usize, k: usize) -> Vec<Word> {
    if k == 0 {
        return vec![Word::empty()];
    }
    let mut out: Vec<Word> = all_words(n, k).into_iter().filter(|w| w.least_rotation() == *w).collect();
    out.sort();
    out
}
