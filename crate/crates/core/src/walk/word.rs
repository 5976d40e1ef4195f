//! Reduced words in the free group `F_k`.
//!
//! Letter `2i` is the `i`-th generator (written `a`, `b`, …) and `2i + 1` its
//! inverse (written `A`, `B`, …), so inversion is `x ^ 1`.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

pub type Letter = u8;

/// Largest supported rank.
pub const MAX_RANK: usize = 26;

#[inline]
pub fn inverse_letter(x: Letter) -> Letter {
    x ^ 1
}

pub fn letter_char(x: Letter) -> char {
    let base = if x & 1 == 0 { b'a' } else { b'A' };
    (base + x / 2) as char
}

/// Parses a letter of `F_k`.
pub fn parse_letter(k: usize, c: char) -> Result<Letter> {
    let (i, inv) = match c {
        'a'..='z' => (c as usize - 'a' as usize, 0),
        'A'..='Z' => (c as usize - 'A' as usize, 1),
        _ => return Err(Error::InvalidWord(alloc::format!("`{c}` is not a letter"))),
    };
    if i >= k {
        return Err(Error::InvalidWord(alloc::format!("`{c}` is not a letter of F_{k}")));
    }
    Ok((2 * i + inv) as Letter)
}

/// A freely reduced word; the empty word is the identity.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn letter(x: Letter) -> Self {
        Word(alloc::vec![x])
    }

    /// Reduces an arbitrary letter sequence.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut w = Word::identity();
        for x in letters {
            w.push(x);
        }
        w
    }

    /// Parses `e` or a string of letters, reducing it.
    pub fn parse(k: usize, s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "e" || s.is_empty() {
            return Ok(Word::identity());
        }
        let mut letters = Vec::with_capacity(s.len());
        for c in s.chars() {
            letters.push(parse_letter(k, c)?);
        }
        Ok(Self::from_letters(letters))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    /// Right-multiplies by one letter, cancelling if needed.
    pub fn push(&mut self, x: Letter) {
        if self.0.last() == Some(&inverse_letter(x)) {
            self.0.pop();
        } else {
            self.0.push(x);
        }
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|&x| inverse_letter(x)).collect())
    }

    /// Group product `self · other`.
    pub fn mul(&self, other: &Word) -> Word {
        let cancel = self.cancellation(other);
        let mut out = Vec::with_capacity(self.len() + other.len() - 2 * cancel);
        out.extend_from_slice(&self.0[..self.len() - cancel]);
        out.extend_from_slice(&other.0[cancel..]);
        Word(out)
    }

    /// Number of letters cancelled in `self · other`.
    pub fn cancellation(&self, other: &Word) -> usize {
        self.0
            .iter()
            .rev()
            .zip(&other.0)
            .take_while(|(&x, &y)| y == inverse_letter(x))
            .count()
    }

    pub fn common_prefix_len(&self, other: &[Letter]) -> usize {
        self.0.iter().zip(other).take_while(|(x, y)| x == y).count()
    }

    pub fn prefix(&self, n: usize) -> Word {
        Word(self.0[..n.min(self.len())].to_vec())
    }

    pub fn to_text(&self) -> String {
        alloc::format!("{self}")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("e");
        }
        for &x in &self.0 {
            fmt::Write::write_char(f, letter_char(x))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Every reduced word of length exactly `n` in `F_k`, in the order used for
/// cylinder indices: `2k` choices for the first letter, then the `2k − 1`
/// letters other than the inverse of the previous one, each in increasing
/// letter order.
pub fn reduced_words(k: usize, n: usize) -> Vec<Word> {
    let mut out = alloc::vec![Word::identity()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(out.len() * (2 * k - 1).max(1));
        for w in &out {
            for x in 0..(2 * k) as Letter {
                if w.last() != Some(inverse_letter(x)) {
                    let mut v = w.clone();
                    v.0.push(x);
                    next.push(v);
                }
            }
        }
        out = next;
    }
    out
}

/// Number of reduced words of length `n >= 1`: `2k (2k − 1)^(n − 1)`.
pub fn count_reduced(k: usize, n: usize) -> usize {
    if n == 0 {
        return 1;
    }
    2 * k * (2 * k - 1).pow((n - 1) as u32)
}

/// Index of a reduced word of length `n` in [`reduced_words`]`(k, n)`.
pub fn word_index(k: usize, letters: &[Letter]) -> usize {
    let mut idx = 0;
    let mut prev: Option<Letter> = None;
    for &x in letters {
        match prev {
            None => idx = x as usize,
            Some(p) => {
                let skip = inverse_letter(p);
                let digit = if x > skip { x - 1 } else { x } as usize;
                idx = idx * (2 * k - 1) + digit;
            }
        }
        prev = Some(x);
    }
    idx
}
