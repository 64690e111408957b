//! Monitors: total deterministic transition systems with absorbing verdict
//! states.
//!
//! A monitor for a language `L` answers, after each finite prefix `u`,
//! whether every extension of `u` lies in `L` (verdict ⊤), no extension does
//! (verdict ⊥), or neither conclusion holds yet. At least one verdict state
//! exists, both are absorbing, and from every reachable state some verdict
//! stays reachable — otherwise the device could get permanently stuck
//! undecided and would monitor nothing.

use crate::alphabet::{Alphabet, LetterId};
use crate::dba::Dba;
use crate::error::{Error, Result};
use crate::nba::{Nba, StateId};

/// Outcome of running a monitor on a finite word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// The bottom state was entered: no extension satisfies the property.
    Bottom,
    /// The top state was entered: every extension satisfies the property.
    Top,
    /// No verdict yet.
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Bottom => write!(f, "bottom"),
            Verdict::Top => write!(f, "top"),
            Verdict::Inconclusive => write!(f, "inconclusive"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monitor {
    alphabet: Alphabet,
    names: Vec<String>,
    initial: StateId,
    bottom: Option<StateId>,
    top: Option<StateId>,
    next: Vec<Vec<StateId>>,
}

impl Monitor {
    /// Builds a monitor and validates all structural invariants: totality,
    /// at least one verdict state, absorbing verdicts, and verdict
    /// reachability from every reachable state.
    pub fn from_parts(
        alphabet: Alphabet,
        names: Vec<String>,
        initial: StateId,
        bottom: Option<StateId>,
        top: Option<StateId>,
        next: Vec<Vec<StateId>>,
    ) -> Result<Self> {
        let n = names.len();
        if initial >= n {
            return Err(Error::InvalidAutomaton("initial state out of range".into()));
        }
        if bottom.is_none() && top.is_none() {
            return Err(Error::InvalidAutomaton(
                "monitor needs a bottom or a top state".into(),
            ));
        }
        if bottom.is_some() && bottom == top {
            return Err(Error::InvalidAutomaton(
                "bottom and top must be distinct states".into(),
            ));
        }
        for (q, rows) in next.iter().enumerate() {
            if rows.len() != alphabet.len() {
                return Err(Error::InvalidAutomaton(
                    "monitor transition function must be total".into(),
                ));
            }
            if rows.iter().any(|&t| t >= n) {
                return Err(Error::InvalidAutomaton("transition target out of range".into()));
            }
            for verdict in [bottom, top].into_iter().flatten() {
                if q == verdict && rows.iter().any(|&t| t != verdict) {
                    return Err(Error::InvalidAutomaton(format!(
                        "verdict state `{}` must be absorbing",
                        names[q]
                    )));
                }
            }
        }
        let monitor = Monitor {
            alphabet,
            names,
            initial,
            bottom,
            top,
            next,
        };
        monitor.check_verdict_reachability()?;
        Ok(monitor)
    }

    /// The one-state monitor whose initial state is already a verdict.
    pub fn single_verdict(alphabet: Alphabet, verdict: Verdict) -> Monitor {
        let (name, bottom, top) = match verdict {
            Verdict::Bottom => ("bot", Some(0), None),
            Verdict::Top => ("top", None, Some(0)),
            Verdict::Inconclusive => panic!("single-state monitor needs a verdict"),
        };
        let k = alphabet.len();
        Monitor {
            alphabet,
            names: vec![name.into()],
            initial: 0,
            bottom,
            top,
            next: vec![vec![0; k]],
        }
    }

    fn check_verdict_reachability(&self) -> Result<()> {
        let n = self.num_states();
        // backward closure from the verdict states
        let mut can_reach = vec![false; n];
        for v in [self.bottom, self.top].into_iter().flatten() {
            can_reach[v] = true;
        }
        let mut changed = true;
        while changed {
            changed = false;
            for q in 0..n {
                if !can_reach[q] && self.next[q].iter().any(|&t| can_reach[t]) {
                    can_reach[q] = true;
                    changed = true;
                }
            }
        }
        let mut queue = std::collections::VecDeque::from([self.initial]);
        let mut seen = vec![false; n];
        seen[self.initial] = true;
        while let Some(q) = queue.pop_front() {
            if !can_reach[q] {
                return Err(Error::InvalidAutomaton(format!(
                    "state `{}` can reach no verdict",
                    self.names[q]
                )));
            }
            for &t in &self.next[q] {
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
        Ok(())
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

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn bottom(&self) -> Option<StateId> {
        self.bottom
    }

    pub fn top(&self) -> Option<StateId> {
        self.top
    }

    pub fn step(&self, q: StateId, letter: LetterId) -> StateId {
        self.next[q][letter]
    }

    pub fn run_from(&self, from: StateId, word: &[LetterId]) -> StateId {
        word.iter().fold(from, |q, &a| self.step(q, a))
    }

    pub fn verdict_of(&self, q: StateId) -> Verdict {
        if Some(q) == self.bottom {
            Verdict::Bottom
        } else if Some(q) == self.top {
            Verdict::Top
        } else {
            Verdict::Inconclusive
        }
    }

    /// Feeds a finite word from the initial state. Verdict states are
    /// terminal: processing stops as soon as one is entered. Returns the
    /// verdict, the visited states (including the start state), and the
    /// number of letters consumed.
    pub fn run(&self, word: &[LetterId]) -> Result<MonitorRun> {
        let mut trace = vec![self.initial];
        let mut q = self.initial;
        let mut consumed = 0;
        if self.verdict_of(q) == Verdict::Inconclusive {
            for &a in word {
                if a >= self.alphabet.len() {
                    return Err(Error::UnknownLetter(format!("#{a}")));
                }
                q = self.step(q, a);
                trace.push(q);
                consumed += 1;
                if self.verdict_of(q) != Verdict::Inconclusive {
                    break;
                }
            }
        }
        Ok(MonitorRun {
            verdict: self.verdict_of(q),
            trace,
            consumed,
        })
    }

    /// The states reachable from the initial one, in BFS order.
    pub fn reachable_order(&self) -> Vec<StateId> {
        let mut order = vec![self.initial];
        let mut seen = vec![false; self.num_states()];
        seen[self.initial] = true;
        let mut i = 0;
        while i < order.len() {
            let q = order[i];
            i += 1;
            for &t in &self.next[q] {
                if !seen[t] {
                    seen[t] = true;
                    order.push(t);
                }
            }
        }
        order
    }

    /// Restriction to reachable states, renumbered in BFS order.
    pub fn reachable_part(&self) -> Monitor {
        let order = self.reachable_order();
        let mut remap = vec![usize::MAX; self.num_states()];
        for (i, &q) in order.iter().enumerate() {
            remap[q] = i;
        }
        Monitor {
            alphabet: self.alphabet.clone(),
            names: order.iter().map(|&q| self.names[q].clone()).collect(),
            initial: 0,
            bottom: self.bottom.and_then(|b| (remap[b] != usize::MAX).then(|| remap[b])),
            top: self.top.and_then(|t| (remap[t] != usize::MAX).then(|| remap[t])),
            next: order
                .iter()
                .map(|&q| self.next[q].iter().map(|&t| remap[t]).collect())
                .collect(),
        }
    }

    /// The monitor graph as a Büchi automaton accepting all words that ever
    /// enter the given verdict state.
    pub(crate) fn verdict_reached_nba(&self, verdict: StateId) -> Nba {
        let transitions = self
            .next
            .iter()
            .map(|rows| rows.iter().map(|&t| vec![t]).collect())
            .collect();
        let accepting = (0..self.num_states()).map(|q| q == verdict).collect();
        Nba::from_parts(
            self.alphabet.clone(),
            self.names.clone(),
            vec![self.initial],
            accepting,
            transitions,
        )
        .expect("monitor graph is a well-formed NBA")
    }
}

/// Result of feeding a finite word to a monitor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonitorRun {
    pub verdict: Verdict,
    pub trace: Vec<StateId>,
    pub consumed: usize,
}

/// A deterministic Büchi monitor: one automaton that simultaneously accepts
/// a language and monitors it. The transition function is total, the bottom
/// state is non-final, the top state is final.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dbm {
    dba: Dba,
    bottom: Option<StateId>,
    top: Option<StateId>,
}

impl Dbm {
    pub fn from_parts(dba: Dba, bottom: Option<StateId>, top: Option<StateId>) -> Result<Self> {
        dba.check_total()?;
        if dba.initial().is_none() {
            return Err(Error::InvalidAutomaton("monitor needs an initial state".into()));
        }
        if let Some(b) = bottom {
            if dba.is_accepting(b) {
                return Err(Error::InvalidAutomaton("bottom state must be non-final".into()));
            }
        }
        if let Some(t) = top {
            if !dba.is_accepting(t) {
                return Err(Error::InvalidAutomaton("top state must be final".into()));
            }
        }
        // monitor invariants via the monitor view
        Monitor::from_parts(
            dba.alphabet().clone(),
            dba.state_names().to_vec(),
            dba.initial().unwrap(),
            bottom,
            top,
            (0..dba.num_states())
                .map(|q| {
                    dba.alphabet()
                        .ids()
                        .map(|a| dba.step(q, a).expect("total"))
                        .collect()
                })
                .collect(),
        )?;
        Ok(Dbm { dba, bottom, top })
    }

    pub fn as_dba(&self) -> &Dba {
        &self.dba
    }

    pub fn bottom(&self) -> Option<StateId> {
        self.bottom
    }

    pub fn top(&self) -> Option<StateId> {
        self.top
    }

    pub fn num_states(&self) -> usize {
        self.dba.num_states()
    }

    pub fn to_monitor(&self) -> Monitor {
        Monitor::from_parts(
            self.dba.alphabet().clone(),
            self.dba.state_names().to_vec(),
            self.dba.initial().unwrap(),
            self.bottom,
            self.top,
            (0..self.dba.num_states())
                .map(|q| {
                    self.dba
                        .alphabet()
                        .ids()
                        .map(|a| self.dba.step(q, a).expect("total"))
                        .collect()
                })
                .collect(),
        )
        .expect("validated at construction")
    }

    pub fn to_nba(&self) -> Nba {
        self.dba.to_nba()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;

    fn ab() -> Alphabet {
        Alphabet::from_chars("ab").unwrap()
    }

    /// Watches for the factor `bb` and rejects on it: p0 --b--> p1 --b--> bot.
    pub(crate) fn bb_watcher() -> Monitor {
        Monitor::from_parts(
            ab(),
            vec!["p0".into(), "p1".into(), "bot".into()],
            0,
            Some(2),
            None,
            vec![vec![0, 1], vec![0, 2], vec![2, 2]],
        )
        .unwrap()
    }

    #[test]
    fn verdicts_are_terminal() {
        let m = bb_watcher();
        // abab: no bb
        let run = m.run(&[0, 1, 0, 1]).unwrap();
        assert_eq!(run.verdict, Verdict::Inconclusive);
        assert_eq!(run.trace, vec![0, 0, 1, 0, 1]);
        // abba: bottom after three letters, fourth unread
        let run = m.run(&[0, 1, 1, 0]).unwrap();
        assert_eq!(run.verdict, Verdict::Bottom);
        assert_eq!(run.consumed, 3);
        assert_eq!(run.trace, vec![0, 0, 1, 2]);
    }

    #[test]
    fn single_top_on_empty_word() {
        let m = Monitor::single_verdict(ab(), Verdict::Top);
        let run = m.run(&[]).unwrap();
        assert_eq!(run.verdict, Verdict::Top);
        assert_eq!(run.consumed, 0);
    }

    #[test]
    fn rejects_unresolvable_states() {
        // q loops on itself and never reaches the verdict
        let result = Monitor::from_parts(
            ab(),
            vec!["q".into(), "bot".into()],
            0,
            Some(1),
            None,
            vec![vec![0, 0], vec![1, 1]],
        );
        assert!(result.is_err());
    }

    #[test]
    fn rejects_non_absorbing_verdict() {
        let result = Monitor::from_parts(
            ab(),
            vec!["q".into(), "bot".into()],
            0,
            Some(1),
            None,
            vec![vec![1, 1], vec![0, 1]],
        );
        assert!(result.is_err());
    }
}
