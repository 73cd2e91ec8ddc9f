//! Reduced words in a free group of fixed rank.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// A generator or its inverse: `+k` is `x_k`, `-k` is `x_k^-1` (1-based).
pub type Letter = i32;

/// A freely reduced word in `F_rank`.
///
/// The letter vector is always reduced; every constructor reduces or checks.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Word {
    rank: usize,
    letters: Vec<Letter>,
}

impl Word {
    /// Builds a word from arbitrary letters, checking the range and reducing.
    pub fn new(rank: usize, letters: impl IntoIterator<Item = Letter>) -> Result<Word> {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            check_letter(l, rank)?;
            push_reduced(&mut out, l);
        }
        Ok(Word { rank, letters: out })
    }

    pub fn empty(rank: usize) -> Word {
        Word { rank, letters: Vec::new() }
    }

    /// The generator `x_index` (1-based).
    pub fn generator(rank: usize, index: usize) -> Result<Word> {
        Word::new(rank, [index as Letter])
    }

    pub(crate) fn from_reduced(rank: usize, letters: Vec<Letter>) -> Word {
        debug_assert!(letters.windows(2).all(|w| w[0] != -w[1]));
        Word { rank, letters }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn multiply(&self, other: &Word) -> Result<Word> {
        same_rank(self.rank, other.rank)?;
        let mut out = self.letters.clone();
        for &l in &other.letters {
            push_reduced(&mut out, l);
        }
        Ok(Word { rank: self.rank, letters: out })
    }

    pub fn inverse(&self) -> Word {
        Word {
            rank: self.rank,
            letters: self.letters.iter().rev().map(|l| -l).collect(),
        }
    }

    pub fn power(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::empty(self.rank);
        for _ in 0..k.unsigned_abs() {
            out = out.multiply(&base).expect("same rank");
        }
        out
    }

    /// `self * other * self^-1`.
    pub fn conjugate(&self, other: &Word) -> Result<Word> {
        self.multiply(other)?.multiply(&self.inverse())
    }

    /// Splits the word as `conjugator * core * conjugator^-1` with `core`
    /// cyclically reduced.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let l = &self.letters;
        let mut k = 0;
        while l.len() >= 2 * (k + 1) && l[k] == -l[l.len() - 1 - k] {
            k += 1;
        }
        let core = l[k..l.len() - k].to_vec();
        let conj = l[..k].to_vec();
        (
            Word::from_reduced(self.rank, core),
            Word::from_reduced(self.rank, conj),
        )
    }

    /// Exponent sum of generator `index` (1-based).
    pub fn exponent_sum(&self, index: usize) -> i64 {
        self.letters
            .iter()
            .map(|&l| match l.unsigned_abs() as usize == index {
                true if l > 0 => 1,
                true => -1,
                false => 0,
            })
            .sum()
    }

    /// Same letters, viewed in a different rank.
    pub fn with_rank(&self, rank: usize) -> Result<Word> {
        Word::new(rank, self.letters.iter().copied())
    }

    /// Parses `x1 x2^-1 x3^2`, or `e` / `1` for the empty word.
    pub fn parse(rank: usize, text: &str) -> Result<Word> {
        let t = text.trim();
        if t.is_empty() || t == "e" || t == "1" {
            return Ok(Word::empty(rank));
        }
        let bytes = t.as_bytes();
        let mut i = 0;
        let mut letters = Vec::new();
        let err = |msg: &str| Error::WordSyntax(format!("{msg} in {text:?}"));
        while i < bytes.len() {
            match bytes[i] {
                b' ' | b'\t' | b'*' | b'.' => {
                    i += 1;
                    continue;
                }
                b'x' => {}
                _ => return Err(err("expected generator")),
            }
            i += 1;
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let index: i64 = t[start..i].parse().map_err(|_| err("missing index"))?;
            let mut exp: i64 = 1;
            if i < bytes.len() && bytes[i] == b'^' {
                i += 1;
                let s = i;
                if i < bytes.len() && bytes[i] == b'-' {
                    i += 1;
                }
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                exp = t[s..i].parse().map_err(|_| err("bad exponent"))?;
            }
            if index < 1 || index as usize > rank {
                return Err(Error::GeneratorOutOfRange { index, rank });
            }
            let l = if exp < 0 { -(index as Letter) } else { index as Letter };
            letters.extend(std::iter::repeat_n(l, exp.unsigned_abs() as usize));
        }
        Word::new(rank, letters)
    }

    /// Shortlex comparison with `x1 < x1^-1 < x2 < ...`.
    pub fn shortlex_cmp(&self, other: &Word) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| {
            let a = self.letters.iter().map(|&l| letter_key(l));
            let b = other.letters.iter().map(|&l| letter_key(l));
            a.cmp(b)
        })
    }
}

fn letter_key(l: Letter) -> u32 {
    2 * (l.unsigned_abs() - 1) + u32::from(l < 0)
}

pub(crate) fn push_reduced(out: &mut Vec<Letter>, l: Letter) {
    if out.last() == Some(&-l) {
        out.pop();
    } else {
        out.push(l);
    }
}

fn check_letter(l: Letter, rank: usize) -> Result<()> {
    if l == 0 || l.unsigned_abs() as usize > rank {
        return Err(Error::GeneratorOutOfRange {
            index: i64::from(l),
            rank,
        });
    }
    Ok(())
}

pub(crate) fn same_rank(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::RankMismatch { left: a, right: b });
    }
    Ok(())
}

impl fmt::Display for Word {
    /// Runs of one letter print as powers: `x2^2 x1^-1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "e");
        }
        let mut i = 0;
        let mut first = true;
        while i < self.letters.len() {
            let l = self.letters[i];
            let mut j = i;
            while j < self.letters.len() && self.letters[j] == l {
                j += 1;
            }
            let run = (j - i) as i64;
            let exp = if l < 0 { -run } else { run };
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if exp == 1 {
                write!(f, "x{}", l.unsigned_abs())?;
            } else {
                write!(f, "x{}^{}", l.unsigned_abs(), exp)?;
            }
            i = j;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(rank: usize, s: &str) -> Word {
        Word::parse(rank, s).unwrap()
    }

    #[test]
    fn reduces_on_construction() {
        let x = Word::new(3, [1, 2, -2, -1, 3]).unwrap();
        assert_eq!(x.letters(), &[3]);
    }

    #[test]
    fn multiply_cancels_across_boundary() {
        let a = w(3, "x1 x2 x3");
        let b = w(3, "x3^-1 x2^-1 x1");
        assert_eq!(a.multiply(&b).unwrap(), w(3, "x1^2"));
    }

    #[test]
    fn rank_mismatch_is_an_error() {
        let a = w(2, "x1");
        let b = w(3, "x1");
        assert_eq!(
            a.multiply(&b),
            Err(Error::RankMismatch { left: 2, right: 3 })
        );
    }

    #[test]
    fn out_of_range_generator() {
        assert!(matches!(
            Word::parse(2, "x3"),
            Err(Error::GeneratorOutOfRange { index: 3, rank: 2 })
        ));
    }

    #[test]
    fn cyclic_reduce_splits_conjugator() {
        let x = w(4, "x2 x3 x1 x4 x3^-1 x2^-1");
        let (core, conj) = x.cyclic_reduce();
        assert_eq!(core, w(4, "x1 x4"));
        assert_eq!(conj, w(4, "x2 x3"));
        assert_eq!(conj.conjugate(&core).unwrap(), x);
    }

    #[test]
    fn display_round_trips() {
        for s in ["e", "x1", "x2^2 x1^-1", "x3^-3 x1 x2^-1"] {
            let x = w(3, s);
            assert_eq!(x.to_string(), s);
            assert_eq!(w(3, &x.to_string()), x);
        }
    }

    #[test]
    fn exponent_sums() {
        let x = w(3, "x2 x1 x2^-3 x3");
        assert_eq!(x.exponent_sum(2), -2);
        assert_eq!(x.exponent_sum(1), 1);
    }
}
