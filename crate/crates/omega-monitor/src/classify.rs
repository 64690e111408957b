//! Language classification and reset words.
//!
//! Safety and cosafety are decided through the complementation oracle;
//! liveness reads totality off the closure automaton directly and needs no
//! complementation. Monitorability is decided on the closure product: the
//! language is monitorable iff every reachable product state can still
//! reach a verdict. An independent decider — nowhere-density of the
//! boundary automaton — is exposed through the closure module and the two
//! are cross-checked in the test suites.

use crate::closure::{closure_dba, complement_closure_with_table};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::monitor::Monitor;
use crate::nba::{Nba, StateId};
use crate::profiles::ResidualTable;
use crate::synth::{congruential_monitor_with, standard_monitor_with};
use crate::word::Word;

/// Aggregated classification of a language, as reported by the command-line
/// interface. Monitor sizes are present only when the language is
/// monitorable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub safety: bool,
    pub cosafety: bool,
    pub live: bool,
    pub monitorable: bool,
    pub standard_states: Option<usize>,
    pub congruential_states: Option<usize>,
}

/// Safety: the closure of the language is included in the language, checked
/// as emptiness of `closure ∩ complement`.
pub fn is_safety(nba: &Nba) -> Result<bool> {
    is_safety_with(nba, &Limits::default())
}

pub fn is_safety_with(nba: &Nba, limits: &Limits) -> Result<bool> {
    let closure = closure_dba(nba)?.to_nba();
    let complement = nba.complement_with(limits)?;
    Ok(closure.intersect(&complement)?.is_empty_language())
}

/// Cosafety: the complement is a safety language. Equivalently the closure
/// of the complement misses the language, which avoids complementing twice.
pub fn is_cosafety(nba: &Nba) -> Result<bool> {
    is_cosafety_with(nba, &Limits::default())
}

pub fn is_cosafety_with(nba: &Nba, limits: &Limits) -> Result<bool> {
    let table = ResidualTable::build(nba, limits)?;
    let cc = complement_closure_with_table(nba, &table)?.to_nba();
    Ok(cc.intersect(nba)?.is_empty_language())
}

/// Liveness: the closure is all of Σ^ω, i.e. the closure automaton is
/// nonempty and total on its reachable part.
pub fn is_live(nba: &Nba) -> Result<bool> {
    let closure = closure_dba(nba)?;
    Ok(closure.num_states() > 0 && closure.is_total())
}

/// Monitorability on the closure product: every reachable state of the
/// standard-monitor product must reach a verdict.
pub fn is_monitorable(nba: &Nba) -> Result<bool> {
    is_monitorable_with(nba, &Limits::default())
}

pub fn is_monitorable_with(nba: &Nba, limits: &Limits) -> Result<bool> {
    let table = ResidualTable::build(nba, limits)?;
    let start = nba.initial_mask();
    if table.is_empty(start) || table.is_universal(start) {
        return Ok(true);
    }
    let closure = closure_dba(nba)?.into_dba();
    let cc = complement_closure_with_table(nba, &table)?.into_dba();
    match crate::synth::product_monitor(&closure, &cc, nba.alphabet()) {
        Ok(_) => Ok(true),
        Err(Error::NotMonitorable) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Runs all four deciders and, for monitorable languages, reports the sizes
/// of the synthesized monitors.
pub fn classify_all(nba: &Nba) -> Result<Classification> {
    classify_all_with(nba, &Limits::default())
}

pub fn classify_all_with(nba: &Nba, limits: &Limits) -> Result<Classification> {
    let monitorable = is_monitorable_with(nba, limits)?;
    let (standard_states, congruential_states) = if monitorable {
        let standard = standard_monitor_with(nba, limits)?;
        let (congruential, _) = congruential_monitor_with(nba, limits)?;
        (Some(standard.num_states()), Some(congruential.num_states()))
    } else {
        (None, None)
    };
    Ok(Classification {
        safety: is_safety_with(nba, limits)?,
        cosafety: is_cosafety_with(nba, limits)?,
        live: is_live(nba)?,
        monitorable,
        standard_states,
        congruential_states,
    })
}

/// Computes a reset word: merging the verdict states into one target, the
/// returned word drives every state of the monitor into that target. Its
/// length is at most `(n-1)²` for an `n`-state monitor.
///
/// States are resolved in declared order; each appended segment is the
/// shortest (then lexicographically least) word from the current state to a
/// verdict, so the result is deterministic.
pub fn reset_word(monitor: &Monitor) -> Word {
    let n = monitor.num_states();
    let is_verdict =
        |q: StateId| Some(q) == monitor.bottom() || Some(q) == monitor.top();

    // BFS from the verdict set backwards would lose lexicographic order, so
    // compute per-state shortest words forward instead: distance layers with
    // letters tried in alphabet order.
    let shortest_to_verdict = |from: StateId| -> Word {
        if is_verdict(from) {
            return Vec::new();
        }
        let mut parent: Vec<Option<(StateId, usize)>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[from] = true;
        let mut queue = std::collections::VecDeque::from([from]);
        while let Some(q) = queue.pop_front() {
            for a in monitor.alphabet().ids() {
                let t = monitor.step(q, a);
                if seen[t] {
                    continue;
                }
                seen[t] = true;
                parent[t] = Some((q, a));
                if is_verdict(t) {
                    let mut word = Vec::new();
                    let mut cur = t;
                    while let Some((p, letter)) = parent[cur] {
                        word.push(letter);
                        cur = p;
                    }
                    word.reverse();
                    return word;
                }
                queue.push_back(t);
            }
        }
        unreachable!("monitor invariant guarantees a path to a verdict");
    };

    let mut word: Word = Vec::new();
    for q in 0..n {
        let landed = monitor.run_from(q, &word);
        if !is_verdict(landed) {
            word.extend(shortest_to_verdict(landed));
        }
    }
    debug_assert!(word.len() <= (n.max(1) - 1) * (n.max(1) - 1));
    word
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;
    use crate::monitor::Verdict;
    use crate::nba::NbaBuilder;
    use crate::synth::{factor_monitor, Polarity};
    use crate::word::parse_word;

    fn ab() -> Alphabet {
        Alphabet::from_chars("ab").unwrap()
    }

    fn inf_a() -> Nba {
        let mut b = NbaBuilder::new(ab());
        b.initial("q0").accepting("q1");
        b.edge("q0", "b", "q0")
            .edge("q0", "a", "q1")
            .edge("q1", "a", "q1")
            .edge("q1", "b", "q0");
        b.build()
    }

    /// Nondeterministic automaton for Σ*bbΣ^ω.
    fn contains_bb() -> Nba {
        let mut b = NbaBuilder::new(ab());
        b.initial("g0").accepting("g2");
        b.edge("g0", "a", "g0")
            .edge("g0", "b", "g0")
            .edge("g0", "b", "g1")
            .edge("g1", "b", "g2")
            .edge("g2", "a", "g2")
            .edge("g2", "b", "g2");
        b.build()
    }

    /// Deterministic safety automaton for "never bb".
    fn never_bb() -> Nba {
        let mut b = NbaBuilder::new(ab());
        b.initial("s0").accepting("s0").accepting("s1");
        b.edge("s0", "a", "s0")
            .edge("s0", "b", "s1")
            .edge("s1", "a", "s0");
        b.build()
    }

    #[test]
    fn safety_decider() {
        assert!(is_safety(&never_bb()).unwrap());
        assert!(is_safety(&Nba::universal(ab())).unwrap());
        assert!(!is_safety(&inf_a()).unwrap());
    }

    #[test]
    fn cosafety_decider() {
        // wΣ^ω is open
        let mut b = NbaBuilder::new(ab());
        b.initial("s0").accepting("f");
        b.edge("s0", "a", "s1").edge("s1", "b", "f");
        b.edge("f", "a", "f").edge("f", "b", "f");
        b.accepting("f");
        assert!(is_cosafety(&b.build()).unwrap());
        assert!(is_cosafety(&Nba::empty(ab())).unwrap());
        assert!(!is_cosafety(&never_bb()).unwrap());
        // cross-check against the literal definition on a small input
        let complement = never_bb().complement().unwrap();
        assert!(!is_safety(&complement).unwrap());
    }

    #[test]
    fn liveness_decider() {
        assert!(is_live(&contains_bb()).unwrap());
        assert!(!is_live(&Nba::empty(ab())).unwrap());
        // bΣ^ω misses aΣ^ω entirely
        let mut b = NbaBuilder::new(ab());
        b.initial("s").accepting("f");
        b.edge("s", "b", "f").edge("f", "a", "f").edge("f", "b", "f");
        b.accepting("f");
        assert!(!is_live(&b.build()).unwrap());
    }

    #[test]
    fn monitorability_decider() {
        assert!(!is_monitorable(&inf_a()).unwrap());
        assert!(is_monitorable(&never_bb()).unwrap());
        assert!(is_monitorable(&Nba::universal(ab())).unwrap());
        assert!(is_monitorable(&Nba::empty(ab())).unwrap());
    }

    #[test]
    fn embedding_into_a_larger_alphabet_makes_monitorable() {
        // "infinitely many a" over {a,b} embedded into {a,b,c}
        let abc = Alphabet::from_chars("abc").unwrap();
        let mut b = NbaBuilder::new(abc);
        b.initial("q0").accepting("q1");
        b.edge("q0", "b", "q0")
            .edge("q0", "a", "q1")
            .edge("q1", "a", "q1")
            .edge("q1", "b", "q0");
        let embedded = b.build();
        assert!(is_monitorable(&embedded).unwrap());
        assert!(!is_live(&embedded).unwrap());
    }

    #[test]
    fn classify_degenerate_and_live_only() {
        let c = classify_all(&Nba::universal(ab())).unwrap();
        assert!(c.safety && c.cosafety && c.live && c.monitorable);
        assert_eq!(c.standard_states, Some(1));

        let c = classify_all(&inf_a()).unwrap();
        assert!(!c.safety && !c.cosafety && c.live && !c.monitorable);
        assert_eq!(c.standard_states, None);
        assert_eq!(c.congruential_states, None);
    }

    #[test]
    fn reset_word_on_bb_watcher() {
        let bb = parse_word(&ab(), "bb").unwrap();
        let m = factor_monitor(&ab(), &bb, Polarity::Forbidden).unwrap();
        let w = reset_word(&m);
        assert_eq!(w, parse_word(&ab(), "bb").unwrap());
        assert!(w.len() <= 4);
        for q in 0..m.num_states() {
            assert_eq!(m.verdict_of(m.run_from(q, &w)), Verdict::Bottom);
        }
    }

    #[test]
    fn reset_word_of_single_verdict_monitor_is_empty() {
        let m = Monitor::single_verdict(ab(), Verdict::Top);
        assert!(reset_word(&m).is_empty());
    }
}
