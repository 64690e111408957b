use crate::error::{Error, Result};

/// Index of a letter within an [`Alphabet`].
pub type LetterId = usize;

/// A finite, ordered alphabet of named symbols.
///
/// The declared order is significant: every deterministic iteration,
/// tie-break and emission in this crate follows it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    letters: Vec<String>,
}

impl Alphabet {
    /// Builds an alphabet from symbol names. Fails on emptiness, duplicates
    /// or whitespace-bearing names.
    pub fn new<I, S>(letters: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let letters: Vec<String> = letters.into_iter().map(Into::into).collect();
        if letters.is_empty() {
            return Err(Error::InvalidAutomaton("alphabet must be nonempty".into()));
        }
        for (i, l) in letters.iter().enumerate() {
            if l.is_empty() || l.chars().any(char::is_whitespace) {
                return Err(Error::InvalidAutomaton(format!("bad letter name `{l}`")));
            }
            if letters[..i].contains(l) {
                return Err(Error::InvalidAutomaton(format!("duplicate letter `{l}`")));
            }
        }
        Ok(Alphabet { letters })
    }

    /// Convenience constructor for single-character letters, e.g. `"ab"`.
    pub fn from_chars(chars: &str) -> Result<Self> {
        Alphabet::new(chars.chars().map(|c| c.to_string()))
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn name(&self, id: LetterId) -> &str {
        &self.letters[id]
    }

    pub fn index_of(&self, name: &str) -> Option<LetterId> {
        self.letters.iter().position(|l| l == name)
    }

    pub fn ids(&self) -> std::ops::Range<LetterId> {
        0..self.letters.len()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.letters.iter().map(String::as_str)
    }

    /// True when every letter is a single character, which allows words to be
    /// written without separators.
    pub fn single_char(&self) -> bool {
        self.letters.iter().all(|l| l.chars().count() == 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates_and_empty() {
        assert!(Alphabet::new(["a", "a"]).is_err());
        assert!(Alphabet::new(Vec::<String>::new()).is_err());
        assert!(Alphabet::new(["a b"]).is_err());
    }

    #[test]
    fn order_is_preserved() {
        let a = Alphabet::new(["b", "a"]).unwrap();
        assert_eq!(a.name(0), "b");
        assert_eq!(a.index_of("a"), Some(1));
    }
}
