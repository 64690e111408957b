//! Monitor constructions.
//!
//! Three general constructions are provided, plus two specialized ones:
//!
//! * [`standard_monitor`] — the product of a safety automaton for the
//!   closure of the language with one for the closure of its complement;
//!   falling off the first component resolves to ⊥, falling off the second
//!   to ⊤. Both closure automata are reduced to their coarsest form first,
//!   so the result is the smallest monitor of this shape.
//! * [`congruential_monitor`] — states are the classes of the canonical
//!   right congruence: two prefixes are identified when their residual
//!   languages coincide. The class with empty residual is ⊥, the class with
//!   universal residual is ⊤.
//! * [`dbm_from_dba`] — completes a deterministic Büchi automaton with a ⊥
//!   sink and merges all states with empty (resp. universal) residuals into
//!   ⊥ (resp. ⊤), yielding one automaton that both accepts and monitors the
//!   language.
//! * [`factor_monitor`] — the failure-function watcher for a single
//!   forbidden or guaranteed factor.
//! * [`dwa_to_monitor`] — collapses the sink components of a weak
//!   deterministic automaton into verdicts.

use std::collections::HashMap;

use crate::alphabet::{Alphabet, LetterId};
use crate::closure::{closure_dba, complement_closure_with_table};
use crate::dba::Dba;
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::monitor::{Dbm, Monitor, Verdict};
use crate::nba::{Nba, StateId};
use crate::profiles::ResidualTable;
use crate::word::Word;

/// Whether a factor witnesses rejection or acceptance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    /// Occurrence of the factor resolves to ⊥.
    Forbidden,
    /// Occurrence of the factor resolves to ⊤.
    Guaranteed,
}

/// The right-congruence bookkeeping behind a congruential monitor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientTable {
    /// Reachable subsets in BFS discovery order, as sorted source-state names.
    pub subsets: Vec<Vec<String>>,
    /// Class of each subset, aligned with `subsets`.
    pub class_of: Vec<usize>,
    /// Per class, the shortest (then lexicographically least) witness word.
    pub representatives: Vec<Word>,
    pub bottom_class: Option<usize>,
    pub top_class: Option<usize>,
}

impl QuotientTable {
    pub fn num_classes(&self) -> usize {
        self.representatives.len()
    }
}

fn fresh_name(taken: &[String], base: &str) -> String {
    let mut name = base.to_string();
    while taken.contains(&name) {
        name.push('_');
    }
    name
}

/// Builds the standard monitor for the language of `nba`.
///
/// Degenerate languages produce the one-state verdict monitors. Fails with
/// [`Error::NotMonitorable`] when some reachable product state can reach
/// neither verdict.
pub fn standard_monitor(nba: &Nba) -> Result<Monitor> {
    standard_monitor_with(nba, &Limits::default())
}

pub fn standard_monitor_with(nba: &Nba, limits: &Limits) -> Result<Monitor> {
    let table = ResidualTable::build(nba, limits)?;
    let start = nba.initial_mask();
    if table.is_empty(start) {
        return Ok(Monitor::single_verdict(nba.alphabet().clone(), Verdict::Bottom));
    }
    if table.is_universal(start) {
        return Ok(Monitor::single_verdict(nba.alphabet().clone(), Verdict::Top));
    }

    let closure = closure_dba(nba)?.into_dba().minimize_all_final();
    let cc = complement_closure_with_table(nba, &table)?
        .into_dba()
        .minimize_all_final();
    product_monitor(&closure, &cc, nba.alphabet())
}

/// The raw closure product used both by the standard construction and by
/// the monitorability decider. `left` rejects into ⊥, `right` into ⊤.
pub(crate) fn product_monitor(left: &Dba, right: &Dba, alphabet: &Alphabet) -> Result<Monitor> {
    let (Some(l0), Some(r0)) = (left.initial(), right.initial()) else {
        // one closure empty means the language was degenerate
        return Err(Error::NotMonitorable);
    };
    let mut index: HashMap<(StateId, StateId), usize> = HashMap::new();
    let mut pairs = vec![(l0, r0)];
    index.insert((l0, r0), 0);
    let mut queue = std::collections::VecDeque::from([0usize]);
    // verdicts are materialized lazily at the end of the state list
    let mut rows: Vec<Vec<isize>> = Vec::new();
    const BOT: isize = -1;
    const TOP: isize = -2;
    while let Some(i) = queue.pop_front() {
        let (l, r) = pairs[i];
        let mut row = Vec::with_capacity(alphabet.len());
        for a in alphabet.ids() {
            match (left.step(l, a), right.step(r, a)) {
                (None, other) => {
                    debug_assert!(other.is_some(), "both closure components undefined");
                    row.push(BOT);
                }
                (Some(_), None) => row.push(TOP),
                (Some(l2), Some(r2)) => {
                    let id = *index.entry((l2, r2)).or_insert_with(|| {
                        pairs.push((l2, r2));
                        queue.push_back(pairs.len() - 1);
                        pairs.len() - 1
                    });
                    row.push(id as isize);
                }
            }
        }
        rows.push(row);
    }

    let uses_bot = rows.iter().flatten().any(|&t| t == BOT);
    let uses_top = rows.iter().flatten().any(|&t| t == TOP);
    if !uses_bot && !uses_top {
        return Err(Error::NotMonitorable);
    }
    let n = pairs.len();
    let bottom = uses_bot.then_some(n);
    let top = uses_top.then_some(if uses_bot { n + 1 } else { n });
    let total = n + usize::from(uses_bot) + usize::from(uses_top);
    let mut next: Vec<Vec<StateId>> = rows
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|t| match t {
                    BOT => bottom.unwrap(),
                    TOP => top.unwrap(),
                    id => id as usize,
                })
                .collect()
        })
        .collect();
    for verdict in [bottom, top].into_iter().flatten() {
        next.push(vec![verdict; alphabet.len()]);
    }
    debug_assert_eq!(next.len(), total);
    let mut names: Vec<String> = (0..n).map(|i| format!("m{i}")).collect();
    if uses_bot {
        names.push("bot".into());
    }
    if uses_top {
        names.push("top".into());
    }
    Monitor::from_parts(alphabet.clone(), names, 0, bottom, top, next)
        .map_err(|_| Error::NotMonitorable)
}

/// Builds the right-congruential monitor together with its quotient table.
pub fn congruential_monitor(nba: &Nba) -> Result<(Monitor, QuotientTable)> {
    congruential_monitor_with(nba, &Limits::default())
}

pub fn congruential_monitor_with(nba: &Nba, limits: &Limits) -> Result<(Monitor, QuotientTable)> {
    if nba.num_states() > 64 {
        return Err(Error::ResourceLimit {
            what: "subset construction",
            limit: 64,
        });
    }
    let table = ResidualTable::build(nba, limits)?;
    let alphabet = nba.alphabet().clone();

    // BFS over reachable subsets; discovery order yields shortest-lex words
    let start = nba.initial_mask();
    let mut masks = vec![start];
    let mut index: HashMap<u64, usize> = HashMap::new();
    index.insert(start, 0);
    let mut words: Vec<Word> = vec![Vec::new()];
    let mut subset_next: Vec<Vec<usize>> = Vec::new();
    let mut i = 0;
    while i < masks.len() {
        let mask = masks[i];
        let mut row = Vec::with_capacity(alphabet.len());
        for a in alphabet.ids() {
            let image = nba.subset_step(mask, a);
            let id = *index.entry(image).or_insert_with(|| {
                masks.push(image);
                let mut w = words[i].clone();
                w.push(a);
                words.push(w);
                masks.len() - 1
            });
            row.push(id);
        }
        subset_next.push(row);
        i += 1;
    }

    // group subsets by residual signature
    let mut class_index: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut class_of = Vec::with_capacity(masks.len());
    let mut class_rep_subset: Vec<usize> = Vec::new();
    let mut representatives: Vec<Word> = Vec::new();
    for (si, &mask) in masks.iter().enumerate() {
        let sig = table.signature(mask);
        let fresh = class_rep_subset.len();
        let cid = *class_index.entry(sig).or_insert(fresh);
        if cid == class_rep_subset.len() {
            class_rep_subset.push(si);
            representatives.push(words[si].clone());
        }
        class_of.push(cid);
    }

    let num_classes = class_rep_subset.len();
    let bottom_class = (0..num_classes)
        .find(|&c| table.is_empty(masks[class_rep_subset[c]]));
    let top_class = (0..num_classes)
        .find(|&c| table.is_universal(masks[class_rep_subset[c]]));

    let next: Vec<Vec<StateId>> = (0..num_classes)
        .map(|c| {
            let si = class_rep_subset[c];
            alphabet
                .ids()
                .map(|a| class_of[subset_next[si][a]])
                .collect()
        })
        .collect();

    let mut names: Vec<String> = (0..num_classes).map(|c| format!("m{c}")).collect();
    if let Some(b) = bottom_class {
        names[b] = "bot".into();
    }
    if let Some(t) = top_class {
        names[t] = "top".into();
    }

    let monitor = Monitor::from_parts(alphabet, names, 0, bottom_class, top_class, next)
        .map_err(|_| Error::NotMonitorable)?;

    let quotient = QuotientTable {
        subsets: masks
            .iter()
            .map(|&m| {
                let mut names = Vec::new();
                let mut rest = m;
                while rest != 0 {
                    let q = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    names.push(nba.state_name(q).to_string());
                }
                names
            })
            .collect(),
        class_of,
        representatives,
        bottom_class,
        top_class,
    };
    Ok((monitor, quotient))
}

/// Turns a deterministic Büchi automaton into a deterministic Büchi monitor
/// accepting the same language: completes the transition function with a ⊥
/// sink, merges empty-residual states into ⊥ and universal-residual states
/// into ⊤.
pub fn dbm_from_dba(dba: &Dba) -> Result<Dbm> {
    let dba = dba.reachable_part();
    let n = dba.num_states();
    let alphabet = dba.alphabet().clone();
    if n == 0 {
        let bot = Dba::from_parts(
            alphabet.clone(),
            vec!["bot".into()],
            Some(0),
            vec![false],
            vec![vec![Some(0); alphabet.len()]],
        )?;
        return Dbm::from_parts(bot, Some(0), None);
    }

    let empty: Vec<bool> = (0..n).map(|q| dba.state_empty(q)).collect::<Result<_>>()?;
    let universal: Vec<bool> = (0..n)
        .map(|q| dba.state_universal(q))
        .collect::<Result<_>>()?;

    let survivors: Vec<StateId> = (0..n).filter(|&q| !empty[q] && !universal[q]).collect();
    let mut remap = vec![usize::MAX; n];
    let mut names: Vec<String> = Vec::new();
    for &q in &survivors {
        remap[q] = names.len();
        names.push(dba.state_name(q).to_string());
    }

    let partial = (0..n).any(|q| alphabet.ids().any(|a| dba.step(q, a).is_none()));
    let needs_bottom = partial || empty.iter().any(|&e| e);
    let empty_states: Vec<StateId> = (0..n).filter(|&q| empty[q]).collect();
    let universal_states: Vec<StateId> = (0..n).filter(|&q| universal[q]).collect();

    let bottom = needs_bottom.then(|| {
        let name = if empty_states.len() == 1 {
            dba.state_name(empty_states[0]).to_string()
        } else {
            fresh_name(&names, "bot")
        };
        names.push(name);
        names.len() - 1
    });
    let top = (!universal_states.is_empty()).then(|| {
        let name = if universal_states.len() == 1 {
            dba.state_name(universal_states[0]).to_string()
        } else {
            fresh_name(&names, "top")
        };
        names.push(name);
        names.len() - 1
    });

    let target = |q: Option<StateId>| -> StateId {
        match q {
            None => bottom.expect("undefined transitions imply a bottom sink"),
            Some(t) if empty[t] => bottom.expect("empty states imply a bottom sink"),
            Some(t) if universal[t] => top.expect("universal states imply a top sink"),
            Some(t) => remap[t],
        }
    };

    let mut next: Vec<Vec<Option<StateId>>> = survivors
        .iter()
        .map(|&q| {
            alphabet
                .ids()
                .map(|a| Some(target(dba.step(q, a))))
                .collect()
        })
        .collect();
    let mut accepting: Vec<bool> = survivors.iter().map(|&q| dba.is_accepting(q)).collect();
    if let Some(b) = bottom {
        next.push(vec![Some(b); alphabet.len()]);
        accepting.push(false);
    }
    if let Some(t) = top {
        next.push(vec![Some(t); alphabet.len()]);
        accepting.push(true);
    }

    let initial = target(dba.initial());
    let monitor_dba = Dba::from_parts(alphabet, names, Some(initial), accepting, next)?;
    Dbm::from_parts(monitor_dba, bottom, top).map_err(|e| match e {
        Error::InvalidAutomaton(_) => Error::NotMonitorable,
        other => other,
    })
}

/// The failure-function watcher for a factor: progress states count the
/// longest prefix of the factor matching a suffix of the input; completing
/// the factor enters the absorbing verdict.
pub fn factor_monitor(alphabet: &Alphabet, factor: &[LetterId], polarity: Polarity) -> Result<Monitor> {
    if factor.is_empty() {
        return Err(Error::InvalidAutomaton("factor must be nonempty".into()));
    }
    if let Some(&bad) = factor.iter().find(|&&l| l >= alphabet.len()) {
        return Err(Error::LetterOutsideAlphabet(format!("#{bad}")));
    }
    let k = factor.len();
    let s = alphabet.len();
    // table[i][a]: progress after reading `a` with i letters matched
    let mut table = vec![vec![0usize; s]; k];
    table[0][factor[0]] = 1;
    let mut border = 0usize;
    for i in 1..k {
        for a in 0..s {
            table[i][a] = table[border][a];
        }
        table[i][factor[i]] = i + 1;
        border = table[border][factor[i]];
    }
    let verdict = k;
    let mut next: Vec<Vec<StateId>> = table;
    next.push(vec![verdict; s]);
    let mut names: Vec<String> = (0..k).map(|i| format!("p{i}")).collect();
    let (bottom, top) = match polarity {
        Polarity::Forbidden => {
            names.push("bot".into());
            (Some(verdict), None)
        }
        Polarity::Guaranteed => {
            names.push("top".into());
            (None, Some(verdict))
        }
    };
    Monitor::from_parts(alphabet.clone(), names, 0, bottom, top, next)
}

/// Collapses the sink components of a total weak deterministic automaton:
/// final sinks become ⊤, non-final sinks become ⊥, everything else is
/// copied. The result monitors the language of the input.
pub fn dwa_to_monitor(dba: &Dba) -> Result<Monitor> {
    dba.check_total()?;
    if dba.initial().is_none() {
        return Ok(Monitor::single_verdict(dba.alphabet().clone(), Verdict::Bottom));
    }
    let dba = dba.reachable_part();
    dba.check_weak()?;
    let alphabet = dba.alphabet().clone();
    let n = dba.num_states();
    let sccs = dba.sccs();
    let mut comp_sink = vec![true; sccs.comps.len()];
    for q in 0..n {
        for a in alphabet.ids() {
            let t = dba.step(q, a).expect("total");
            if sccs.comp_of[t] != sccs.comp_of[q] {
                comp_sink[sccs.comp_of[q]] = false;
            }
        }
    }

    enum Target {
        Keep(usize),
        Bottom,
        Top,
    }
    let mut kept: Vec<StateId> = Vec::new();
    let mut role: Vec<Target> = Vec::with_capacity(n);
    for q in 0..n {
        if comp_sink[sccs.comp_of[q]] {
            if dba.is_accepting(q) {
                role.push(Target::Top);
            } else {
                role.push(Target::Bottom);
            }
        } else {
            role.push(Target::Keep(kept.len()));
            kept.push(q);
        }
    }
    let uses_bot = role.iter().any(|r| matches!(r, Target::Bottom));
    let uses_top = role.iter().any(|r| matches!(r, Target::Top));
    let m = kept.len();
    let bottom = uses_bot.then_some(m);
    let top = uses_top.then_some(if uses_bot { m + 1 } else { m });
    let resolve = |q: StateId| -> StateId {
        match role[q] {
            Target::Keep(i) => i,
            Target::Bottom => bottom.unwrap(),
            Target::Top => top.unwrap(),
        }
    };

    let mut names: Vec<String> = kept.iter().map(|&q| dba.state_name(q).to_string()).collect();
    let mut next: Vec<Vec<StateId>> = kept
        .iter()
        .map(|&q| {
            alphabet
                .ids()
                .map(|a| resolve(dba.step(q, a).expect("total")))
                .collect()
        })
        .collect();
    if let Some(b) = bottom {
        names.push(fresh_name(&names, "bot"));
        next.push(vec![b; alphabet.len()]);
    }
    if let Some(t) = top {
        names.push(fresh_name(&names, "top"));
        next.push(vec![t; alphabet.len()]);
    }
    let initial = resolve(dba.initial().unwrap());
    Monitor::from_parts(alphabet, names, initial, bottom, top, next)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nba::NbaBuilder;
    use crate::word::{enumerate_lassos, parse_word};

    fn ab() -> Alphabet {
        Alphabet::from_chars("ab").unwrap()
    }

    #[test]
    fn degenerate_languages_collapse_to_verdicts() {
        let m = standard_monitor(&Nba::universal(ab())).unwrap();
        assert_eq!(m.num_states(), 1);
        assert_eq!(m.verdict_of(m.initial()), Verdict::Top);

        let m = standard_monitor(&Nba::empty(ab())).unwrap();
        assert_eq!(m.num_states(), 1);
        assert_eq!(m.verdict_of(m.initial()), Verdict::Bottom);

        let (m, q) = congruential_monitor(&Nba::universal(ab())).unwrap();
        assert_eq!(m.num_states(), 1);
        assert_eq!(q.top_class, Some(0));
    }

    #[test]
    fn non_monitorable_input_is_rejected() {
        let mut b = NbaBuilder::new(ab());
        b.initial("q0").accepting("q1");
        b.edge("q0", "b", "q0")
            .edge("q0", "a", "q1")
            .edge("q1", "a", "q1")
            .edge("q1", "b", "q0");
        let inf_a = b.build();
        assert_eq!(standard_monitor(&inf_a), Err(Error::NotMonitorable));
        assert!(matches!(
            congruential_monitor(&inf_a),
            Err(Error::NotMonitorable)
        ));
    }

    #[test]
    fn factor_watcher_shape() {
        let bb = parse_word(&ab(), "bb").unwrap();
        let m = factor_monitor(&ab(), &bb, Polarity::Forbidden).unwrap();
        assert_eq!(m.num_states(), 3);
        assert_eq!(m.bottom(), Some(2));
        assert_eq!(m.top(), None);
        // a resets, b advances
        assert_eq!(m.step(0, 0), 0);
        assert_eq!(m.step(0, 1), 1);
        assert_eq!(m.step(1, 0), 0);
        assert_eq!(m.step(1, 1), 2);

        let a = parse_word(&ab(), "a").unwrap();
        let m = factor_monitor(&ab(), &a, Polarity::Guaranteed).unwrap();
        assert_eq!(m.num_states(), 2);
        assert_eq!(m.top(), Some(1));
    }

    #[test]
    fn factor_watcher_tracks_borders() {
        // after reading abab, the matcher for aba sits on a border of length 3→ verdict
        let aba = parse_word(&ab(), "aba").unwrap();
        let m = factor_monitor(&ab(), &aba, Polarity::Forbidden).unwrap();
        assert_eq!(m.num_states(), 4);
        let run = m.run(&parse_word(&ab(), "abab").unwrap()).unwrap();
        assert_eq!(run.verdict, Verdict::Bottom);
        assert_eq!(run.consumed, 3);
        // ab then ba: border keeps two letters of progress
        let q = m.run_from(0, &parse_word(&ab(), "ab").unwrap());
        assert_eq!(m.state_name(q), "p2");
    }

    #[test]
    fn dwa_collapse() {
        // all-final one-letter loop collapses to ⊤
        let one = Alphabet::from_chars("a").unwrap();
        let d = Dba::from_parts(
            one.clone(),
            vec!["s".into()],
            Some(0),
            vec![true],
            vec![vec![Some(0)]],
        )
        .unwrap();
        let m = dwa_to_monitor(&d).unwrap();
        assert_eq!(m.num_states(), 1);
        assert_eq!(m.verdict_of(m.initial()), Verdict::Top);

        // transient state into a final sink
        let d = Dba::from_parts(
            one.clone(),
            vec!["t".into(), "f".into()],
            Some(0),
            vec![false, true],
            vec![vec![Some(1)], vec![Some(1)]],
        )
        .unwrap();
        let m = dwa_to_monitor(&d).unwrap();
        assert_eq!(m.num_states(), 2);
        assert!(m.top().is_some());
        assert!(m.bottom().is_none());
    }

    #[test]
    fn dwa_errors() {
        let d = Dba::from_parts(
            ab(),
            vec!["x".into(), "y".into()],
            Some(0),
            vec![false, true],
            vec![
                vec![Some(1), Some(0)],
                vec![Some(0), Some(1)],
            ],
        )
        .unwrap();
        assert!(matches!(dwa_to_monitor(&d), Err(Error::NotWeak(_))));

        let partial = Dba::from_parts(
            ab(),
            vec!["x".into()],
            Some(0),
            vec![true],
            vec![vec![Some(0), None]],
        )
        .unwrap();
        assert!(matches!(dwa_to_monitor(&partial), Err(Error::NotTotal { .. })));
    }

    #[test]
    fn dbm_of_total_all_final_is_single_top() {
        let d = Dba::from_parts(
            ab(),
            vec!["x".into(), "y".into()],
            Some(0),
            vec![true, true],
            vec![
                vec![Some(1), Some(0)],
                vec![Some(0), Some(1)],
            ],
        )
        .unwrap();
        let dbm = dbm_from_dba(&d).unwrap();
        assert_eq!(dbm.num_states(), 1);
        assert!(dbm.top().is_some());
    }

    #[test]
    fn dbm_preserves_language_on_lassos() {
        // aΣ^ω as a partial DBA
        let d = Dba::from_parts(
            ab(),
            vec!["s".into(), "f".into()],
            Some(0),
            vec![true, true],
            vec![
                vec![Some(1), None],
                vec![Some(1), Some(1)],
            ],
        )
        .unwrap();
        let dbm = dbm_from_dba(&d).unwrap();
        let original = d.to_nba();
        let monitored = dbm.to_nba();
        for w in enumerate_lassos(2, 3, 3) {
            assert_eq!(original.accepts_lasso(&w), monitored.accepts_lasso(&w));
        }
        // f is universal here, so the DBM collapses it into ⊤
        assert!(dbm.top().is_some());
        assert!(dbm.bottom().is_some());
        assert_eq!(dbm.num_states(), 3);
    }
}
