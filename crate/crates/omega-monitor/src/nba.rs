//! Nondeterministic Büchi automata and their language oracles.
//!
//! An [`Nba`] accepts the infinite words labelling a path that starts in an
//! initial state and visits an accepting state infinitely often. The empty
//! state set is a legal automaton denoting the empty language; every oracle
//! handles it.

use std::collections::HashMap;

use crate::alphabet::{Alphabet, LetterId};
use crate::error::{Error, Result};
use crate::graph::tarjan_sccs;
use crate::word::Lasso;

/// Index of a state within an automaton.
pub type StateId = usize;

/// A nondeterministic Büchi automaton.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nba {
    alphabet: Alphabet,
    names: Vec<String>,
    initial: Vec<StateId>,
    accepting: Vec<bool>,
    /// `transitions[state][letter]` is the sorted list of successors.
    transitions: Vec<Vec<Vec<StateId>>>,
}

impl Nba {
    /// Builds an automaton from explicit parts, validating all indices.
    pub fn from_parts(
        alphabet: Alphabet,
        names: Vec<String>,
        mut initial: Vec<StateId>,
        accepting: Vec<bool>,
        mut transitions: Vec<Vec<Vec<StateId>>>,
    ) -> Result<Self> {
        let n = names.len();
        if accepting.len() != n || transitions.len() != n {
            return Err(Error::InvalidAutomaton(
                "state, acceptance and transition tables differ in length".into(),
            ));
        }
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() || name.chars().any(char::is_whitespace) {
                return Err(Error::InvalidAutomaton(format!("bad state name `{name}`")));
            }
            if names[..i].contains(name) {
                return Err(Error::InvalidAutomaton(format!(
                    "duplicate state name `{name}`"
                )));
            }
        }
        initial.sort_unstable();
        initial.dedup();
        if initial.iter().any(|&q| q >= n) {
            return Err(Error::InvalidAutomaton("initial state out of range".into()));
        }
        for rows in &mut transitions {
            if rows.len() != alphabet.len() {
                return Err(Error::InvalidAutomaton(
                    "transition rows must cover the whole alphabet".into(),
                ));
            }
            for row in rows.iter_mut() {
                row.sort_unstable();
                row.dedup();
                if row.iter().any(|&q| q >= n) {
                    return Err(Error::InvalidAutomaton("transition target out of range".into()));
                }
            }
        }
        Ok(Nba {
            alphabet,
            names,
            initial,
            accepting,
            transitions,
        })
    }

    /// The automaton with no states; its language is empty.
    pub fn empty(alphabet: Alphabet) -> Self {
        Nba {
            alphabet,
            names: Vec::new(),
            initial: Vec::new(),
            accepting: Vec::new(),
            transitions: Vec::new(),
        }
    }

    /// A one-state automaton accepting every word.
    pub fn universal(alphabet: Alphabet) -> Self {
        let k = alphabet.len();
        Nba {
            alphabet,
            names: vec!["u0".into()],
            initial: vec![0],
            accepting: vec![true],
            transitions: vec![vec![vec![0]; k]],
        }
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

    pub fn initial(&self) -> &[StateId] {
        &self.initial
    }

    pub fn is_accepting(&self, q: StateId) -> bool {
        self.accepting[q]
    }

    pub fn accepting_states(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.num_states()).filter(|&q| self.accepting[q])
    }

    pub fn successors(&self, q: StateId, letter: LetterId) -> &[StateId] {
        &self.transitions[q][letter]
    }

    pub fn transitions(&self) -> impl Iterator<Item = (StateId, LetterId, StateId)> + '_ {
        (0..self.num_states()).flat_map(move |q| {
            self.alphabet.ids().flat_map(move |a| {
                self.transitions[q][a].iter().map(move |&t| (q, a, t))
            })
        })
    }

    /// True when the automaton has at most one initial state and at most one
    /// successor per state and letter.
    pub fn is_deterministic(&self) -> bool {
        self.initial.len() <= 1
            && self
                .transitions
                .iter()
                .all(|rows| rows.iter().all(|row| row.len() <= 1))
    }

    fn graph_successors(&self, q: StateId) -> Vec<StateId> {
        let mut out: Vec<StateId> = self
            .alphabet
            .ids()
            .flat_map(|a| self.transitions[q][a].iter().copied())
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Forward reachability from the initial states, in BFS discovery order.
    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.num_states()];
        let mut queue: std::collections::VecDeque<StateId> = self.initial.iter().copied().collect();
        for &q in &self.initial {
            seen[q] = true;
        }
        while let Some(q) = queue.pop_front() {
            for a in self.alphabet.ids() {
                for &t in self.successors(q, a) {
                    if !seen[t] {
                        seen[t] = true;
                        queue.push_back(t);
                    }
                }
            }
        }
        seen
    }

    /// States from which some accepting lasso is reachable.
    pub fn live_states(&self) -> Vec<bool> {
        let n = self.num_states();
        let sccs = tarjan_sccs(n, |q| self.graph_successors(q));
        let mut comp_live = vec![false; sccs.comps.len()];
        // components arrive sinks-first, so a single pass resolves liveness
        for (ci, comp) in sccs.comps.iter().enumerate() {
            let has_internal_edge = comp.iter().any(|&q| {
                self.alphabet
                    .ids()
                    .any(|a| self.transitions[q][a].iter().any(|t| sccs.comp_of[*t] == ci))
            });
            let has_accepting = comp.iter().any(|&q| self.accepting[q]);
            if has_internal_edge && has_accepting {
                comp_live[ci] = true;
                continue;
            }
            comp_live[ci] = comp.iter().any(|&q| {
                self.graph_successors(q)
                    .iter()
                    .any(|&t| sccs.comp_of[t] != ci && comp_live[sccs.comp_of[t]])
            });
        }
        (0..n).map(|q| comp_live[sccs.comp_of[q]]).collect()
    }

    /// Restricts the automaton to states from which some accepting lasso is
    /// reachable. The accepted language is unchanged; the result may have no
    /// states at all when the language is empty.
    pub fn trim_live(&self) -> Nba {
        let live = self.live_states();
        let mut remap = vec![usize::MAX; self.num_states()];
        let mut names = Vec::new();
        for q in 0..self.num_states() {
            if live[q] {
                remap[q] = names.len();
                names.push(self.names[q].clone());
            }
        }
        let initial = self
            .initial
            .iter()
            .filter(|&&q| live[q])
            .map(|&q| remap[q])
            .collect();
        let accepting = (0..self.num_states())
            .filter(|&q| live[q])
            .map(|q| self.accepting[q])
            .collect();
        let transitions = (0..self.num_states())
            .filter(|&q| live[q])
            .map(|q| {
                self.alphabet
                    .ids()
                    .map(|a| {
                        self.transitions[q][a]
                            .iter()
                            .filter(|&&t| live[t])
                            .map(|&t| remap[t])
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Nba {
            alphabet: self.alphabet.clone(),
            names,
            initial,
            accepting,
            transitions,
        }
    }

    /// Emptiness: true iff no reachable accepting state lies on a cycle.
    pub fn is_empty_language(&self) -> bool {
        let live = self.live_states();
        !self.initial.iter().any(|&q| live[q])
    }

    /// Produces a witness `u v^ω` in the language, if the language is
    /// nonempty. The witness uses the shortest BFS path to the first live
    /// accepting state and the shortest cycle through it.
    pub fn accepting_lasso(&self) -> Option<Lasso> {
        let n = self.num_states();
        let sccs = tarjan_sccs(n, |q| self.graph_successors(q));
        let mut comp_accepting = vec![false; sccs.comps.len()];
        for (ci, comp) in sccs.comps.iter().enumerate() {
            let internal = comp.iter().any(|&q| {
                self.alphabet
                    .ids()
                    .any(|a| self.transitions[q][a].iter().any(|t| sccs.comp_of[*t] == ci))
            });
            comp_accepting[ci] = internal && comp.iter().any(|&q| self.accepting[q]);
        }

        // BFS from the initial set for the shortest path to a target state:
        // accepting and inside an accepting component.
        let mut parent: Vec<Option<(StateId, LetterId)>> = vec![None; n];
        let mut seen = vec![false; n];
        let mut queue: std::collections::VecDeque<StateId> = Default::default();
        for &q in &self.initial {
            seen[q] = true;
            queue.push_back(q);
        }
        let mut target = None;
        'bfs: while let Some(q) = queue.pop_front() {
            if self.accepting[q] && comp_accepting[sccs.comp_of[q]] {
                target = Some(q);
                break 'bfs;
            }
            for a in self.alphabet.ids() {
                for &t in self.successors(q, a) {
                    if !seen[t] {
                        seen[t] = true;
                        parent[t] = Some((q, a));
                        queue.push_back(t);
                    }
                }
            }
        }
        let target = target?;

        let mut prefix = Vec::new();
        let mut cur = target;
        while let Some((p, a)) = parent[cur] {
            prefix.push(a);
            cur = p;
        }
        prefix.reverse();

        // shortest cycle target -> target inside its component
        let ci = sccs.comp_of[target];
        let mut cyc_parent: Vec<Option<(StateId, LetterId)>> = vec![None; n];
        let mut cyc_seen = vec![false; n];
        let mut queue = std::collections::VecDeque::new();
        let mut closing: Option<(StateId, LetterId)> = None;
        cyc_seen[target] = true;
        queue.push_back(target);
        'cyc: while let Some(q) = queue.pop_front() {
            for a in self.alphabet.ids() {
                for &t in self.successors(q, a) {
                    if sccs.comp_of[t] != ci {
                        continue;
                    }
                    if t == target {
                        closing = Some((q, a));
                        break 'cyc;
                    }
                    if !cyc_seen[t] {
                        cyc_seen[t] = true;
                        cyc_parent[t] = Some((q, a));
                        queue.push_back(t);
                    }
                }
            }
        }
        let (last, last_letter) = closing.expect("accepting component has an internal cycle");
        let mut period = vec![last_letter];
        let mut cur = last;
        while let Some((p, a)) = cyc_parent[cur] {
            period.push(a);
            cur = p;
        }
        period.reverse();
        Some(Lasso::new(prefix, period).expect("cycle is nonempty"))
    }

    /// Büchi intersection via the usual two-phase product.
    pub fn intersect(&self, other: &Nba) -> Result<Nba> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch);
        }
        let mut index: HashMap<(StateId, StateId, u8), StateId> = HashMap::new();
        let mut nodes: Vec<(StateId, StateId, u8)> = Vec::new();
        let mut queue = std::collections::VecDeque::new();
        for &p in &self.initial {
            for &q in &other.initial {
                let key = (p, q, 0u8);
                if !index.contains_key(&key) {
                    index.insert(key, nodes.len());
                    nodes.push(key);
                    queue.push_back(key);
                }
            }
        }
        let initial_count = nodes.len();
        let mut transitions: Vec<Vec<Vec<StateId>>> = Vec::new();
        let mut order: Vec<(StateId, StateId, u8)> = Vec::new();
        while let Some((p, q, phase)) = queue.pop_front() {
            order.push((p, q, phase));
            let next_phase = if phase == 0 && self.accepting[p] {
                1
            } else if phase == 1 && other.accepting[q] {
                0
            } else {
                phase
            };
            let mut rows = Vec::with_capacity(self.alphabet.len());
            for a in self.alphabet.ids() {
                let mut row = Vec::new();
                for &p2 in self.successors(p, a) {
                    for &q2 in other.successors(q, a) {
                        let key = (p2, q2, next_phase);
                        let id = *index.entry(key).or_insert_with(|| {
                            nodes.push(key);
                            queue.push_back(key);
                            nodes.len() - 1
                        });
                        row.push(id);
                    }
                }
                row.sort_unstable();
                row.dedup();
                rows.push(row);
            }
            transitions.push(rows);
        }
        let names = order
            .iter()
            .map(|&(p, q, phase)| format!("{}|{}|{}", self.names[p], other.names[q], phase))
            .collect();
        let accepting = order
            .iter()
            .map(|&(_, q, phase)| phase == 1 && other.accepting[q])
            .collect();
        let initial = (0..initial_count).collect();
        Ok(Nba {
            alphabet: self.alphabet.clone(),
            names,
            initial,
            accepting,
            transitions,
        })
    }

    /// Membership of an ultimately periodic word: searches the product of the
    /// automaton with the folded lasso graph for a reachable accepting cycle.
    pub fn accepts_lasso(&self, w: &Lasso) -> bool {
        let n = self.num_states();
        if n == 0 || self.initial.is_empty() {
            return false;
        }
        debug_assert!(w
            .prefix()
            .iter()
            .chain(w.period())
            .all(|&l| l < self.alphabet.len()));
        let positions = w.len();
        let node = |q: StateId, pos: usize| q * positions + pos;
        let succ = |id: usize| -> Vec<usize> {
            let (q, pos) = (id / positions, id % positions);
            let letter = w.letter_at(pos);
            let next = w.next_position(pos);
            self.successors(q, letter)
                .iter()
                .map(|&t| node(t, next))
                .collect()
        };

        // reachability from (initial, position 0)
        let mut seen = vec![false; n * positions];
        let mut queue = std::collections::VecDeque::new();
        for &q in &self.initial {
            seen[node(q, 0)] = true;
            queue.push_back(node(q, 0));
        }
        while let Some(id) = queue.pop_front() {
            for t in succ(id) {
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }

        let sccs = tarjan_sccs(n * positions, succ);
        for (ci, comp) in sccs.comps.iter().enumerate() {
            if !comp.iter().any(|&id| seen[id]) {
                continue;
            }
            let internal = comp
                .iter()
                .any(|&id| succ(id).iter().any(|&t| sccs.comp_of[t] == ci));
            if !internal {
                continue;
            }
            if comp.iter().any(|&id| self.accepting[id / positions]) {
                return true;
            }
        }
        false
    }

    /// Subset image under one letter; states must number at most 64.
    pub(crate) fn subset_step(&self, mask: u64, letter: LetterId) -> u64 {
        let mut out = 0u64;
        let mut rest = mask;
        while rest != 0 {
            let q = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            for &t in self.successors(q, letter) {
                out |= 1 << t;
            }
        }
        out
    }

    pub(crate) fn initial_mask(&self) -> u64 {
        self.initial.iter().fold(0u64, |m, &q| m | 1 << q)
    }

    pub(crate) fn accepting_mask(&self) -> u64 {
        (0..self.num_states()).fold(0u64, |m, q| if self.accepting[q] { m | 1 << q } else { m })
    }
}

/// Convenience builder with name-based state handling, used by fixtures,
/// parsers and tests.
pub struct NbaBuilder {
    alphabet: Alphabet,
    names: Vec<String>,
    index: HashMap<String, StateId>,
    initial: Vec<StateId>,
    accepting: Vec<bool>,
    transitions: Vec<Vec<Vec<StateId>>>,
}

impl NbaBuilder {
    pub fn new(alphabet: Alphabet) -> Self {
        NbaBuilder {
            alphabet,
            names: Vec::new(),
            index: HashMap::new(),
            initial: Vec::new(),
            accepting: Vec::new(),
            transitions: Vec::new(),
        }
    }

    /// Adds the state if it is new and returns its id.
    pub fn state(&mut self, name: &str) -> StateId {
        if let Some(&id) = self.index.get(name) {
            return id;
        }
        let id = self.names.len();
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), id);
        self.accepting.push(false);
        self.transitions.push(vec![Vec::new(); self.alphabet.len()]);
        id
    }

    pub fn initial(&mut self, name: &str) -> &mut Self {
        let id = self.state(name);
        self.initial.push(id);
        self
    }

    pub fn accepting(&mut self, name: &str) -> &mut Self {
        let id = self.state(name);
        self.accepting[id] = true;
        self
    }

    pub fn edge(&mut self, src: &str, letter: &str, dst: &str) -> &mut Self {
        let a = self
            .alphabet
            .index_of(letter)
            .unwrap_or_else(|| panic!("unknown letter `{letter}`"));
        let s = self.state(src);
        let d = self.state(dst);
        self.transitions[s][a].push(d);
        self
    }

    /// Adds `src --letter--> dst` for every letter of the alphabet.
    pub fn edges_all_letters(&mut self, src: &str, dst: &str) -> &mut Self {
        let s = self.state(src);
        let d = self.state(dst);
        for a in 0..self.alphabet.len() {
            self.transitions[s][a].push(d);
        }
        self
    }

    pub fn build(self) -> Nba {
        Nba::from_parts(
            self.alphabet,
            self.names,
            self.initial,
            self.accepting,
            self.transitions,
        )
        .expect("builder constructs well-formed automata")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::from_chars("ab").unwrap()
    }

    /// Two-state deterministic automaton for "infinitely many a".
    pub(crate) fn inf_a() -> Nba {
        let mut b = NbaBuilder::new(ab());
        b.initial("q0").accepting("q1");
        b.edge("q0", "b", "q0")
            .edge("q0", "a", "q1")
            .edge("q1", "a", "q1")
            .edge("q1", "b", "q0");
        b.build()
    }

    #[test]
    fn emptiness_basics() {
        // no accepting states
        let mut b = NbaBuilder::new(ab());
        b.initial("s");
        b.edge("s", "a", "s").edge("s", "b", "s");
        assert!(b.build().is_empty_language());

        // initial accepting self-loop
        let mut b = NbaBuilder::new(ab());
        b.initial("s").accepting("s");
        b.edge("s", "a", "s");
        assert!(!b.build().is_empty_language());

        // accepting state reachable but acyclic
        let mut b = NbaBuilder::new(ab());
        b.initial("s").accepting("f");
        b.edge("s", "a", "f");
        assert!(b.build().is_empty_language());

        assert!(Nba::empty(ab()).is_empty_language());
        assert!(!Nba::universal(ab()).is_empty_language());
    }

    #[test]
    fn trim_removes_dead_accepting_state() {
        let mut b = NbaBuilder::new(ab());
        b.initial("s").accepting("s").accepting("f");
        b.edge("s", "a", "s").edge("s", "b", "f");
        let trimmed = b.build().trim_live();
        assert_eq!(trimmed.num_states(), 1);
        assert_eq!(trimmed.state_name(0), "s");
    }

    #[test]
    fn trim_is_identity_on_tight_loop() {
        let mut b = NbaBuilder::new(ab());
        b.initial("s").accepting("s");
        b.edge("s", "a", "s").edge("s", "b", "s");
        let a = b.build();
        assert_eq!(a.trim_live(), a);
    }

    #[test]
    fn lasso_membership_inf_a() {
        let a = inf_a();
        // b^ω is out, (ab)^ω is in
        assert!(!a.accepts_lasso(&Lasso::new(vec![1], vec![1]).unwrap()));
        assert!(a.accepts_lasso(&Lasso::new(vec![], vec![0, 1]).unwrap()));
        assert!(Nba::universal(ab()).accepts_lasso(&Lasso::new(vec![], vec![1]).unwrap()));
    }

    #[test]
    fn accepting_lasso_witness_is_accepted() {
        let a = inf_a();
        let w = a.accepting_lasso().unwrap();
        assert!(a.accepts_lasso(&w));
        assert!(Nba::empty(ab()).accepting_lasso().is_none());
    }

    #[test]
    fn intersection_of_inf_a_and_inf_b() {
        let infa = inf_a();
        // "infinitely many b" by swapping roles
        let mut b = NbaBuilder::new(ab());
        b.initial("q0").accepting("q1");
        b.edge("q0", "a", "q0")
            .edge("q0", "b", "q1")
            .edge("q1", "b", "q1")
            .edge("q1", "a", "q0");
        let infb = b.build();
        let both = infa.intersect(&infb).unwrap();
        assert!(both.accepts_lasso(&Lasso::new(vec![], vec![0, 1]).unwrap()));
        assert!(!both.accepts_lasso(&Lasso::new(vec![], vec![0]).unwrap()));
    }
}
