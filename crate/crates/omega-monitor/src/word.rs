//! Finite words and lasso (ultimately periodic) words.
//!
//! A lasso `u v^ω` is the finitely representable fragment of the infinite
//! words over an alphabet; membership of lassos is decidable for every
//! automaton in this crate, which makes them the work horse of testing.

use crate::alphabet::{Alphabet, LetterId};
use crate::error::{Error, Result};

/// A finite word as a sequence of letter indices.
pub type Word = Vec<LetterId>;

/// An ultimately periodic infinite word `prefix · period^ω`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Lasso {
    prefix: Word,
    period: Word,
}

impl Lasso {
    pub fn new(prefix: Word, period: Word) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::EmptyPeriod);
        }
        Ok(Lasso { prefix, period })
    }

    pub fn prefix(&self) -> &[LetterId] {
        &self.prefix
    }

    pub fn period(&self) -> &[LetterId] {
        &self.period
    }

    /// Total number of distinct positions, `|u| + |v|`.
    pub fn len(&self) -> usize {
        self.prefix.len() + self.period.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Letter at position `i` of the infinite word.
    pub fn letter_at(&self, i: usize) -> LetterId {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.period[(i - self.prefix.len()) % self.period.len()]
        }
    }

    /// Successor position on the folded lasso graph: the last period position
    /// loops back to the start of the period.
    pub fn next_position(&self, pos: usize) -> usize {
        debug_assert!(pos < self.len());
        if pos + 1 < self.len() {
            pos + 1
        } else {
            self.prefix.len()
        }
    }

    pub fn display(&self, alphabet: &Alphabet) -> String {
        format!(
            "{}/{}",
            format_word(alphabet, &self.prefix),
            format_word(alphabet, &self.period)
        )
    }
}

/// Renders a word using the crate's textual convention: letters are
/// concatenated when the alphabet is single-character, dot-separated
/// otherwise.
pub fn format_word(alphabet: &Alphabet, word: &[LetterId]) -> String {
    if alphabet.single_char() {
        word.iter().map(|&l| alphabet.name(l)).collect()
    } else {
        word.iter()
            .map(|&l| alphabet.name(l))
            .collect::<Vec<_>>()
            .join(".")
    }
}

/// Parses a word in the same convention. The empty string is the empty word.
pub fn parse_word(alphabet: &Alphabet, text: &str) -> Result<Word> {
    if text.is_empty() {
        return Ok(Vec::new());
    }
    if text.contains('.') {
        return text
            .split('.')
            .map(|tok| {
                alphabet
                    .index_of(tok)
                    .ok_or_else(|| Error::UnknownLetter(tok.to_string()))
            })
            .collect();
    }
    if alphabet.single_char() {
        return text
            .chars()
            .map(|c| {
                alphabet
                    .index_of(&c.to_string())
                    .ok_or_else(|| Error::UnknownLetter(c.to_string()))
            })
            .collect();
    }
    // Multi-character letters without separators: accept only if the whole
    // text is a single letter.
    alphabet
        .index_of(text)
        .map(|id| vec![id])
        .ok_or_else(|| Error::UnknownLetter(text.to_string()))
}

/// Parses a lasso written `u/v`.
pub fn parse_lasso(alphabet: &Alphabet, text: &str) -> Result<Lasso> {
    let (u, v) = text.split_once('/').ok_or_else(|| Error::Parse {
        line: 0,
        message: format!("lasso `{text}` must be written as prefix/period"),
    })?;
    Lasso::new(parse_word(alphabet, u)?, parse_word(alphabet, v)?)
}

/// Enumerates all lassos with `|u| <= max_prefix` and `1 <= |v| <= max_period`
/// over an alphabet of `letters` symbols, in length-lexicographic order.
pub fn enumerate_lassos(letters: usize, max_prefix: usize, max_period: usize) -> Vec<Lasso> {
    fn words_up_to(letters: usize, min_len: usize, max_len: usize) -> Vec<Word> {
        let mut out = Vec::new();
        let mut frontier: Vec<Word> = vec![Vec::new()];
        for len in 0..=max_len {
            if len >= min_len {
                out.extend(frontier.iter().cloned());
            }
            if len == max_len {
                break;
            }
            let mut next = Vec::new();
            for w in &frontier {
                for l in 0..letters {
                    let mut w2 = w.clone();
                    w2.push(l);
                    next.push(w2);
                }
            }
            frontier = next;
        }
        out
    }

    let prefixes = words_up_to(letters, 0, max_prefix);
    let periods = words_up_to(letters, 1, max_period);
    let mut out = Vec::with_capacity(prefixes.len() * periods.len());
    for u in &prefixes {
        for v in &periods {
            out.push(Lasso::new(u.clone(), v.clone()).unwrap());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lasso_positions_fold_back() {
        let l = Lasso::new(vec![0], vec![1, 0]).unwrap();
        assert_eq!(l.letter_at(0), 0);
        assert_eq!(l.letter_at(1), 1);
        assert_eq!(l.letter_at(2), 0);
        assert_eq!(l.letter_at(3), 1);
        assert_eq!(l.next_position(2), 1);
    }

    #[test]
    fn word_round_trip() {
        let ab = Alphabet::from_chars("ab").unwrap();
        let w = parse_word(&ab, "abba").unwrap();
        assert_eq!(format_word(&ab, &w), "abba");
        assert_eq!(parse_word(&ab, "").unwrap(), Vec::<LetterId>::new());

        let named = Alphabet::new(["a0", "a1"]).unwrap();
        let w = parse_word(&named, "a1.a0").unwrap();
        assert_eq!(format_word(&named, &w), "a1.a0");
    }

    #[test]
    fn lasso_enumeration_counts() {
        // prefixes: eps, a, b (3); periods: a, b (2)
        assert_eq!(enumerate_lassos(2, 1, 1).len(), 6);
        assert!(parse_lasso(&Alphabet::from_chars("ab").unwrap(), "a/").is_err());
    }
}
