//! Transition profiles and residual-language analysis.
//!
//! The profile of a finite word records, per state pair `(p, q)`, whether the
//! word can take `p` to `q` and whether some such path passes through an
//! accepting state. Profiles of nonempty words form a finite monoid under
//! composition. For an idempotent profile `h` and a profile `g` with
//! `g·h = g`, all words `u v^ω` with profiles `(g, h)` are either uniformly
//! inside or uniformly outside every residual language of the automaton, and
//! every infinite word factorizes this way. The table of such word classes
//! therefore decides emptiness, universality and equality of residual
//! languages by plain bitmask tests, one shared computation per automaton.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::nba::Nba;
use crate::word::{Lasso, Word};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Profile {
    /// Per source state, the mask of reachable targets.
    reach: Vec<u64>,
    /// Per source state, the mask of targets reachable through an accepting
    /// state (endpoints count). Always a subset of `reach`.
    acc: Vec<u64>,
}

impl Profile {
    fn compose(&self, other: &Profile) -> Profile {
        let n = self.reach.len();
        let mut reach = vec![0u64; n];
        let mut acc = vec![0u64; n];
        for p in 0..n {
            let mut r = 0u64;
            let mut ac = 0u64;
            let mut rest = self.reach[p];
            while rest != 0 {
                let q = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                r |= other.reach[q];
                ac |= other.acc[q];
            }
            let mut rest = self.acc[p];
            while rest != 0 {
                let q = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                ac |= other.reach[q];
            }
            reach[p] = r;
            acc[p] = ac;
        }
        Profile { reach, acc }
    }
}

/// A class of ultimately periodic words, represented by a witness lasso and
/// the mask of states from which the class is accepted.
struct WordClass {
    accepted_from: u64,
    witness: (Word, Word),
}

/// Residual-language analysis table for one automaton.
///
/// `subset` arguments are masks over the automaton's states; the residual in
/// question is the language accepted when starting from that subset.
pub(crate) struct ResidualTable {
    classes: Vec<WordClass>,
}

impl ResidualTable {
    /// Builds the table. The automaton must have at most
    /// `limits.complement_cap` states.
    pub fn build(nba: &Nba, limits: &Limits) -> Result<ResidualTable> {
        let n = nba.num_states();
        if n > limits.complement_cap || n > 64 {
            return Err(Error::ResourceLimit {
                what: "complementation state cap",
                limit: limits.complement_cap.min(64),
            });
        }

        let accepting_mask = nba.accepting_mask();
        let letter_profiles: Vec<Profile> = nba
            .alphabet()
            .ids()
            .map(|a| {
                let mut reach = vec![0u64; n];
                let mut acc = vec![0u64; n];
                for p in 0..n {
                    let mut mask = 0u64;
                    for &t in nba.successors(p, a) {
                        mask |= 1 << t;
                    }
                    reach[p] = mask;
                    acc[p] = if nba.is_accepting(p) {
                        mask
                    } else {
                        mask & accepting_mask
                    };
                }
                Profile { reach, acc }
            })
            .collect();

        // monoid of profiles of nonempty words, closed under right extension
        let mut elements: Vec<Profile> = Vec::new();
        let mut words: Vec<Word> = Vec::new();
        let mut index: HashMap<Profile, usize> = HashMap::new();
        let mut queue = std::collections::VecDeque::new();
        for (a, p) in letter_profiles.iter().enumerate() {
            if !index.contains_key(p) {
                index.insert(p.clone(), elements.len());
                queue.push_back(elements.len());
                elements.push(p.clone());
                words.push(vec![a]);
            }
        }
        while let Some(i) = queue.pop_front() {
            for (a, lp) in letter_profiles.iter().enumerate() {
                let next = elements[i].compose(lp);
                if !index.contains_key(&next) {
                    if elements.len() >= limits.profile_bound {
                        return Err(Error::ResourceLimit {
                            what: "transition profiles",
                            limit: limits.profile_bound,
                        });
                    }
                    index.insert(next.clone(), elements.len());
                    queue.push_back(elements.len());
                    let mut w = words[i].clone();
                    w.push(a);
                    elements.push(next);
                    words.push(w);
                }
            }
        }

        let idempotents: Vec<usize> = (0..elements.len())
            .filter(|&i| elements[i].compose(&elements[i]) == elements[i])
            .collect();

        let mut seen_masks: HashMap<u64, ()> = HashMap::new();
        let mut classes = Vec::new();
        for &hi in &idempotents {
            let h = &elements[hi];
            let mut loop_mask = 0u64;
            for p in 0..n {
                if h.acc[p] & (1 << p) != 0 {
                    loop_mask |= 1 << p;
                }
            }
            for gi in 0..elements.len() {
                let g = elements[gi].compose(h);
                let mut accepted_from = 0u64;
                for q in 0..n {
                    if g.reach[q] & loop_mask != 0 {
                        accepted_from |= 1 << q;
                    }
                }
                if seen_masks.insert(accepted_from, ()).is_none() {
                    let mut u = words[gi].clone();
                    u.extend_from_slice(&words[hi]);
                    classes.push(WordClass {
                        accepted_from,
                        witness: (u, words[hi].clone()),
                    });
                }
            }
        }
        Ok(ResidualTable { classes })
    }

    /// True iff the residual language of `subset` is all infinite words.
    pub fn is_universal(&self, subset: u64) -> bool {
        self.classes.iter().all(|c| c.accepted_from & subset != 0)
    }

    /// True iff the residual language of `subset` is empty.
    pub fn is_empty(&self, subset: u64) -> bool {
        self.classes.iter().all(|c| c.accepted_from & subset == 0)
    }

    /// Membership bits of all word classes for the residual of `subset`.
    /// Equal signatures mean equal residual languages.
    pub fn signature(&self, subset: u64) -> Vec<u64> {
        let mut sig = vec![0u64; (self.classes.len() + 63) / 64];
        for (i, c) in self.classes.iter().enumerate() {
            if c.accepted_from & subset != 0 {
                sig[i / 64] |= 1 << (i % 64);
            }
        }
        sig
    }

    /// A lasso outside the residual language of `subset`, if one exists.
    pub fn non_universal_witness(&self, subset: u64) -> Option<Lasso> {
        self.classes
            .iter()
            .find(|c| c.accepted_from & subset == 0)
            .map(|c| Lasso::new(c.witness.0.clone(), c.witness.1.clone()).expect("nonempty period"))
    }
}

impl Nba {
    /// Universality `L = Σ^ω`, decided through the residual-class table.
    pub fn is_universal_language(&self) -> Result<bool> {
        self.is_universal_language_with(&Limits::default())
    }

    pub fn is_universal_language_with(&self, limits: &Limits) -> Result<bool> {
        let table = ResidualTable::build(self, limits)?;
        Ok(table.is_universal(self.initial_mask()))
    }

    /// A rejected lasso, if the language is not universal.
    pub fn rejected_lasso_with(&self, limits: &Limits) -> Result<Option<Lasso>> {
        let table = ResidualTable::build(self, limits)?;
        Ok(table.non_universal_witness(self.initial_mask()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;
    use crate::nba::NbaBuilder;

    fn ab() -> Alphabet {
        Alphabet::from_chars("ab").unwrap()
    }

    #[test]
    fn universal_and_empty_subsets() {
        let u = Nba::universal(ab());
        assert!(u.is_universal_language().unwrap());
        let e = Nba::empty(ab());
        assert!(!e.is_universal_language().unwrap());
        let w = e.rejected_lasso_with(&Limits::default()).unwrap().unwrap();
        assert!(!e.accepts_lasso(&w));
    }

    #[test]
    fn inf_a_is_not_universal_and_witness_is_rejected() {
        let mut b = NbaBuilder::new(ab());
        b.initial("q0").accepting("q1");
        b.edge("q0", "b", "q0")
            .edge("q0", "a", "q1")
            .edge("q1", "a", "q1")
            .edge("q1", "b", "q0");
        let a = b.build();
        assert!(!a.is_universal_language().unwrap());
        let w = a.rejected_lasso_with(&Limits::default()).unwrap().unwrap();
        assert!(!a.accepts_lasso(&w));
    }

    #[test]
    fn missing_letter_breaks_universality() {
        let mut b = NbaBuilder::new(ab());
        b.initial("s").accepting("s");
        b.edge("s", "a", "s");
        assert!(!b.build().is_universal_language().unwrap());
    }

    #[test]
    fn table_emptiness_matches_graph_emptiness() {
        let mut b = NbaBuilder::new(ab());
        b.initial("s").accepting("f");
        b.edge("s", "a", "f");
        let a = b.build();
        let table = ResidualTable::build(&a, &Limits::default()).unwrap();
        assert_eq!(table.is_empty(a.initial_mask()), a.is_empty_language());
    }

    #[test]
    fn cap_is_enforced() {
        let a = Nba::universal(ab());
        let limits = Limits {
            complement_cap: 0,
            ..Limits::default()
        };
        assert!(matches!(
            a.is_universal_language_with(&limits),
            Err(Error::ResourceLimit { .. })
        ));
    }
}
