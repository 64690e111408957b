//! Deterministic Büchi automata with a possibly partial transition function.

use crate::alphabet::{Alphabet, LetterId};
use crate::error::{Error, Result};
use crate::graph::tarjan_sccs;
use crate::nba::{Nba, StateId};

/// A deterministic Büchi automaton. The transition function may be partial;
/// an undefined transition rejects immediately. The automaton with no states
/// (and hence no initial state) denotes the empty language.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dba {
    alphabet: Alphabet,
    names: Vec<String>,
    initial: Option<StateId>,
    accepting: Vec<bool>,
    next: Vec<Vec<Option<StateId>>>,
}

impl Dba {
    pub fn from_parts(
        alphabet: Alphabet,
        names: Vec<String>,
        initial: Option<StateId>,
        accepting: Vec<bool>,
        next: Vec<Vec<Option<StateId>>>,
    ) -> Result<Self> {
        let n = names.len();
        if accepting.len() != n || next.len() != n {
            return Err(Error::InvalidAutomaton(
                "state, acceptance and transition tables differ in length".into(),
            ));
        }
        match initial {
            Some(q) if q >= n => {
                return Err(Error::InvalidAutomaton("initial state out of range".into()))
            }
            None if n > 0 => {
                return Err(Error::InvalidAutomaton(
                    "nonempty automaton needs an initial state".into(),
                ))
            }
            _ => {}
        }
        for rows in &next {
            if rows.len() != alphabet.len() {
                return Err(Error::InvalidAutomaton(
                    "transition rows must cover the whole alphabet".into(),
                ));
            }
            if rows.iter().flatten().any(|&t| t >= n) {
                return Err(Error::InvalidAutomaton("transition target out of range".into()));
            }
        }
        Ok(Dba {
            alphabet,
            names,
            initial,
            accepting,
            next,
        })
    }

    pub fn empty(alphabet: Alphabet) -> Self {
        Dba {
            alphabet,
            names: Vec::new(),
            initial: None,
            accepting: Vec::new(),
            next: Vec::new(),
        }
    }

    /// Checked conversion from a deterministic [`Nba`].
    pub fn try_from_nba(nba: &Nba) -> Result<Self> {
        if nba.initial().len() > 1 {
            return Err(Error::NotDeterministic("several initial states".into()));
        }
        let mut next = Vec::with_capacity(nba.num_states());
        for q in 0..nba.num_states() {
            let mut rows = Vec::with_capacity(nba.alphabet().len());
            for a in nba.alphabet().ids() {
                let succ = nba.successors(q, a);
                if succ.len() > 1 {
                    return Err(Error::NotDeterministic(format!(
                        "state `{}` has several `{}`-successors",
                        nba.state_name(q),
                        nba.alphabet().name(a)
                    )));
                }
                rows.push(succ.first().copied());
            }
            next.push(rows);
        }
        Dba::from_parts(
            nba.alphabet().clone(),
            nba.state_names().to_vec(),
            nba.initial().first().copied(),
            (0..nba.num_states()).map(|q| nba.is_accepting(q)).collect(),
            next,
        )
    }

    pub fn to_nba(&self) -> Nba {
        let transitions = self
            .next
            .iter()
            .map(|rows| {
                rows.iter()
                    .map(|t| t.map(|t| vec![t]).unwrap_or_default())
                    .collect()
            })
            .collect();
        Nba::from_parts(
            self.alphabet.clone(),
            self.names.clone(),
            self.initial.into_iter().collect(),
            self.accepting.clone(),
            transitions,
        )
        .expect("deterministic automaton is a well-formed NBA")
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.names[q]
    }

    pub fn state_names(&self) -> &[String] {
        &self.names
    }

    pub fn state_by_name(&self, name: &str) -> Option<StateId> {
        self.names.iter().position(|n| n == name)
    }

    pub fn initial(&self) -> Option<StateId> {
        self.initial
    }

    pub fn is_accepting(&self, q: StateId) -> bool {
        self.accepting[q]
    }

    pub fn step(&self, q: StateId, letter: LetterId) -> Option<StateId> {
        self.next[q][letter]
    }

    /// Runs a finite word from a state, stopping at the first undefined
    /// transition.
    pub fn run(&self, from: StateId, word: &[LetterId]) -> Option<StateId> {
        word.iter().try_fold(from, |q, &a| self.step(q, a))
    }

    /// True when every transition is defined.
    pub fn is_total(&self) -> bool {
        self.next.iter().all(|rows| rows.iter().all(Option::is_some))
    }

    /// True when every state is final.
    pub fn all_accepting(&self) -> bool {
        self.accepting.iter().all(|&f| f)
    }

    fn graph_successors(&self, q: StateId) -> Vec<StateId> {
        let mut out: Vec<StateId> = self.next[q].iter().flatten().copied().collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// The residual language of `q` is empty: no accepting cycle is reachable.
    pub fn state_empty(&self, q: StateId) -> Result<bool> {
        if q >= self.num_states() {
            return Err(Error::UnknownState(format!("#{q}")));
        }
        Ok(!self.to_nba().live_states()[q])
    }

    /// The residual language of `q` is all infinite words: the part reachable
    /// from `q` is total and every cycle in it contains an accepting state.
    pub fn state_universal(&self, q: StateId) -> Result<bool> {
        if q >= self.num_states() {
            return Err(Error::UnknownState(format!("#{q}")));
        }
        let n = self.num_states();
        let mut reach = vec![false; n];
        let mut queue = std::collections::VecDeque::from([q]);
        reach[q] = true;
        while let Some(p) = queue.pop_front() {
            for a in self.alphabet.ids() {
                match self.next[p][a] {
                    None => return Ok(false),
                    Some(t) => {
                        if !reach[t] {
                            reach[t] = true;
                            queue.push_back(t);
                        }
                    }
                }
            }
        }
        // a cycle avoiding accepting states would witness a rejected word
        let sccs = tarjan_sccs(n, |p| {
            if reach[p] && !self.accepting[p] {
                self.graph_successors(p)
                    .into_iter()
                    .filter(|&t| reach[t] && !self.accepting[t])
                    .collect()
            } else {
                Vec::new()
            }
        });
        for (ci, comp) in sccs.comps.iter().enumerate() {
            if !reach[comp[0]] || self.accepting[comp[0]] {
                continue;
            }
            let internal = comp.iter().any(|&p| {
                reach[p]
                    && !self.accepting[p]
                    && self.next[p].iter().flatten().any(|&t| {
                        reach[t] && !self.accepting[t] && sccs.comp_of[t] == ci
                    })
            });
            if internal {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Restriction to the states reachable from the initial one, renumbered
    /// in BFS discovery order.
    pub fn reachable_part(&self) -> Dba {
        let Some(q0) = self.initial else {
            return Dba::empty(self.alphabet.clone());
        };
        let mut order = vec![q0];
        let mut remap = vec![usize::MAX; self.num_states()];
        remap[q0] = 0;
        let mut queue = std::collections::VecDeque::from([q0]);
        while let Some(q) = queue.pop_front() {
            for a in self.alphabet.ids() {
                if let Some(t) = self.next[q][a] {
                    if remap[t] == usize::MAX {
                        remap[t] = order.len();
                        order.push(t);
                        queue.push_back(t);
                    }
                }
            }
        }
        Dba {
            alphabet: self.alphabet.clone(),
            names: order.iter().map(|&q| self.names[q].clone()).collect(),
            initial: Some(0),
            accepting: order.iter().map(|&q| self.accepting[q]).collect(),
            next: order
                .iter()
                .map(|&q| {
                    self.alphabet
                        .ids()
                        .map(|a| self.next[q][a].map(|t| remap[t]))
                        .collect()
                })
                .collect(),
        }
    }

    /// Strongly connected components of the transition graph.
    pub(crate) fn sccs(&self) -> crate::graph::Sccs {
        tarjan_sccs(self.num_states(), |q| self.graph_successors(q))
    }

    /// Checks that every component is homogeneously final or non-final.
    pub fn check_weak(&self) -> Result<()> {
        let sccs = self.sccs();
        for comp in &sccs.comps {
            let first = self.accepting[comp[0]];
            if let Some(&bad) = comp.iter().find(|&&q| self.accepting[q] != first) {
                return Err(Error::NotWeak(self.names[bad].clone()));
            }
        }
        Ok(())
    }

    /// Checks totality, reporting the first missing transition.
    pub fn check_total(&self) -> Result<()> {
        for q in 0..self.num_states() {
            for a in self.alphabet.ids() {
                if self.next[q][a].is_none() {
                    return Err(Error::NotTotal {
                        state: self.names[q].clone(),
                        letter: self.alphabet.name(a).to_string(),
                    });
                }
            }
        }
        Ok(())
    }

    /// Merges language-equivalent states of a partial all-final automaton.
    ///
    /// Two states are equivalent iff the same finite words keep the run
    /// alive from them, which for all-final automata characterizes equal
    /// residual languages. States of the result are renamed canonically in
    /// BFS order and keep the name of their first member.
    pub(crate) fn minimize_all_final(&self) -> Dba {
        debug_assert!(self.all_accepting());
        let reachable = self.reachable_part();
        let n = reachable.num_states();
        if n == 0 {
            return reachable;
        }
        // Moore refinement over the completion with a dead class
        let dead = usize::MAX;
        let mut class = vec![0usize; n];
        loop {
            let mut key_to_class: std::collections::HashMap<Vec<usize>, usize> =
                std::collections::HashMap::new();
            let mut next_class = vec![0usize; n];
            let mut changed = false;
            for q in 0..n {
                let mut key = vec![class[q]];
                for a in reachable.alphabet.ids() {
                    key.push(match reachable.next[q][a] {
                        Some(t) => class[t],
                        None => dead,
                    });
                }
                let fresh = key_to_class.len();
                let id = *key_to_class.entry(key).or_insert(fresh);
                next_class[q] = id;
            }
            for q in 0..n {
                if next_class[q] != class[q] {
                    changed = true;
                }
            }
            class = next_class;
            if !changed {
                break;
            }
        }

        // quotient, then canonical BFS order
        let num_classes = class.iter().max().unwrap() + 1;
        let mut rep = vec![usize::MAX; num_classes];
        for q in 0..n {
            if rep[class[q]] == usize::MAX {
                rep[class[q]] = q;
            }
        }
        let quotient = Dba {
            alphabet: reachable.alphabet.clone(),
            names: (0..num_classes)
                .map(|c| reachable.names[rep[c]].clone())
                .collect(),
            initial: Some(class[0]),
            accepting: vec![true; num_classes],
            next: (0..num_classes)
                .map(|c| {
                    reachable
                        .alphabet
                        .ids()
                        .map(|a| reachable.next[rep[c]][a].map(|t| class[t]))
                        .collect()
                })
                .collect(),
        };
        quotient.reachable_part()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nba::NbaBuilder;

    fn ab() -> Alphabet {
        Alphabet::from_chars("ab").unwrap()
    }

    #[test]
    fn residual_classification() {
        // s0 --a--> s1(final, total loop); s0 --b--> dead sink
        let alphabet = ab();
        let dba = Dba::from_parts(
            alphabet,
            vec!["s0".into(), "s1".into(), "dead".into()],
            Some(0),
            vec![false, true, false],
            vec![
                vec![Some(1), Some(2)],
                vec![Some(1), Some(1)],
                vec![Some(2), Some(2)],
            ],
        )
        .unwrap();
        assert!(dba.state_empty(2).unwrap());
        assert!(!dba.state_empty(0).unwrap());
        assert!(dba.state_universal(1).unwrap());
        assert!(!dba.state_universal(0).unwrap());
        assert!(!dba.state_universal(2).unwrap());
        assert!(dba.state_empty(99).is_err());
    }

    #[test]
    fn weakness_detects_mixed_cycle() {
        let mut b = NbaBuilder::new(ab());
        b.initial("x").accepting("y");
        b.edge("x", "a", "y")
            .edge("y", "a", "x")
            .edge("x", "b", "x")
            .edge("y", "b", "y");
        let dba = Dba::try_from_nba(&b.build()).unwrap();
        assert!(matches!(dba.check_weak(), Err(Error::NotWeak(_))));
    }

    #[test]
    fn minimize_merges_equal_residuals() {
        // two states with identical alive-word sets collapse
        let alphabet = ab();
        let dba = Dba::from_parts(
            alphabet,
            vec!["p".into(), "q".into()],
            Some(0),
            vec![true, true],
            vec![vec![Some(1), None], vec![Some(0), None]],
        )
        .unwrap();
        let min = dba.minimize_all_final();
        assert_eq!(min.num_states(), 1);
    }
}
