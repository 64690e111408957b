//! Monitor morphisms, monitor verification and minimal-monitor search.
//!
//! A morphism maps states of one monitor to another, fixing the initial
//! state and both verdicts and commuting with every transition. Because
//! monitors are deterministic and all source states are reachable, a
//! morphism is uniquely determined by following transitions from the pair
//! of initial states; searching is never needed.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::monitor::Monitor;
use crate::nba::{Nba, StateId};

/// A candidate state map between two monitors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonitorMorphism {
    pub source: Monitor,
    pub target: Monitor,
    /// Image of every source state, indexed by source state id.
    pub map: Vec<StateId>,
}

/// Outcome of validating a [`MonitorMorphism`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MorphismCheck {
    /// Initial, verdict and commutation conditions all hold.
    pub valid: bool,
    /// The map hits every target state.
    pub surjective: bool,
}

impl MorphismCheck {
    pub fn is_epimorphism(&self) -> bool {
        self.valid && self.surjective
    }
}

/// Validates a morphism candidate. Fails if the map is not total on the
/// source states or the alphabets differ.
pub fn check_morphism(m: &MonitorMorphism) -> Result<MorphismCheck> {
    if m.source.alphabet() != m.target.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    if m.map.len() != m.source.num_states() {
        return Err(Error::InvalidAutomaton(
            "morphism map must cover every source state".into(),
        ));
    }
    if m.map.iter().any(|&t| t >= m.target.num_states()) {
        return Err(Error::UnknownState("morphism image out of range".into()));
    }

    let mut valid = m.map[m.source.initial()] == m.target.initial();
    match (m.source.bottom(), m.target.bottom()) {
        (Some(sb), Some(tb)) => valid &= m.map[sb] == tb,
        (Some(_), None) => valid = false,
        (None, _) => {}
    }
    match (m.source.top(), m.target.top()) {
        (Some(st), Some(tt)) => valid &= m.map[st] == tt,
        (Some(_), None) => valid = false,
        (None, _) => {}
    }
    if valid {
        'commute: for q in 0..m.source.num_states() {
            for a in m.source.alphabet().ids() {
                if m.map[m.source.step(q, a)] != m.target.step(m.map[q], a) {
                    valid = false;
                    break 'commute;
                }
            }
        }
    }

    let mut hit = vec![false; m.target.num_states()];
    for &t in &m.map {
        hit[t] = true;
    }
    Ok(MorphismCheck {
        valid,
        surjective: hit.iter().all(|&h| h),
    })
}

/// The unique morphism candidate from `source` onto `target`, if it
/// validates and is surjective. Unreachable source states would make the
/// map ambiguous, so the source is restricted to its reachable part first.
pub fn find_epimorphism(source: &Monitor, target: &Monitor) -> Result<Option<MonitorMorphism>> {
    if source.alphabet() != target.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    let source = source.reachable_part();
    let n = source.num_states();
    let mut map = vec![usize::MAX; n];
    map[source.initial()] = target.initial();
    let mut queue = std::collections::VecDeque::from([source.initial()]);
    while let Some(q) = queue.pop_front() {
        for a in source.alphabet().ids() {
            let s2 = source.step(q, a);
            let t2 = target.step(map[q], a);
            if map[s2] == usize::MAX {
                map[s2] = t2;
                queue.push_back(s2);
            } else if map[s2] != t2 {
                return Ok(None);
            }
        }
    }
    let candidate = MonitorMorphism {
        source,
        target: target.clone(),
        map,
    };
    let check = check_morphism(&candidate)?;
    Ok(check.is_epimorphism().then_some(candidate))
}

/// Isomorphism: the forced map validates in both directions and is a
/// bijection.
pub fn monitors_isomorphic(left: &Monitor, right: &Monitor) -> Result<bool> {
    if left.alphabet() != right.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    if left.num_states() != right.num_states() {
        return Ok(false);
    }
    let forward = find_epimorphism(left, right)?;
    let backward = find_epimorphism(right, left)?;
    match (forward, backward) {
        (Some(f), Some(_)) => {
            let mut hit = vec![false; right.num_states()];
            for &t in &f.map {
                hit[t] = true;
            }
            Ok(hit.iter().all(|&h| h) && f.map.len() == right.num_states())
        }
        _ => Ok(false),
    }
}

/// Checks that a monitor is a monitor *for* the given language:
/// every word that drives it to ⊥ has no extension in the language, and
/// every word that drives it to ⊤ has all extensions in the language.
pub fn verify_monitor(monitor: &Monitor, nba: &Nba) -> Result<bool> {
    verify_monitor_with(monitor, nba, &Limits::default())
}

pub fn verify_monitor_with(monitor: &Monitor, nba: &Nba, limits: &Limits) -> Result<bool> {
    if monitor.alphabet() != nba.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    if let Some(bot) = monitor.bottom() {
        let reaches_bottom = monitor.verdict_reached_nba(bot);
        if !reaches_bottom.intersect(nba)?.is_empty_language() {
            return Ok(false);
        }
    }
    if let Some(top) = monitor.top() {
        let reaches_top = monitor.verdict_reached_nba(top);
        if !reaches_top.included_in_with(nba, limits)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Canonical form of a monitor: states renamed in BFS order, written as the
/// transition table plus verdict positions. Equal canonical forms mean
/// isomorphic monitors (for monitors whose states are all reachable).
fn canonical_key(monitor: &Monitor) -> Vec<usize> {
    let m = monitor.reachable_part();
    let mut key = Vec::with_capacity(m.num_states() * m.alphabet().len() + 3);
    key.push(m.num_states());
    key.push(m.bottom().map(|b| b + 1).unwrap_or(0));
    key.push(m.top().map(|t| t + 1).unwrap_or(0));
    for q in 0..m.num_states() {
        for a in m.alphabet().ids() {
            key.push(m.step(q, a));
        }
    }
    key
}

/// Exhaustively enumerates all monitors for the language of `nba` with the
/// minimum number of states, up to isomorphism, as long as that minimum is
/// at most `max_states`. Returns the empty list when no monitor with at
/// most `max_states` states verifies.
///
/// The search is exponential and restricted to alphabets of at most three
/// letters and `max_states` at most five.
pub fn minimal_monitors(nba: &Nba, max_states: usize) -> Result<Vec<Monitor>> {
    minimal_monitors_with(nba, max_states, &Limits::default())
}

pub fn minimal_monitors_with(
    nba: &Nba,
    max_states: usize,
    limits: &Limits,
) -> Result<Vec<Monitor>> {
    if nba.alphabet().len() > 3 {
        return Err(Error::SearchBound(
            "exhaustive search supports alphabets of at most 3 letters".into(),
        ));
    }
    if max_states > 5 {
        return Err(Error::SearchBound(
            "exhaustive search supports at most 5 states".into(),
        ));
    }
    let complement = nba.complement_with(limits)?;
    for k in 1..=max_states {
        let found = monitors_of_size(nba, &complement, k)?;
        if !found.is_empty() {
            return Ok(found);
        }
    }
    Ok(Vec::new())
}

/// All verifying monitors with exactly `k` states (all reachable), up to
/// isomorphism. Enumeration order: ⊥-only, then ⊤-only, then both verdicts,
/// each in lexicographic transition-table order.
fn monitors_of_size(nba: &Nba, complement: &Nba, k: usize) -> Result<Vec<Monitor>> {
    let alphabet = nba.alphabet().clone();
    let s = alphabet.len();
    let mut seen: HashMap<Vec<usize>, ()> = HashMap::new();
    let mut found = Vec::new();

    // verdict placements at the tail of the state list
    let placements: Vec<(Option<StateId>, Option<StateId>)> = vec![
        (Some(k - 1), None),
        (None, Some(k - 1)),
        (if k >= 2 { Some(k - 2) } else { None }, if k >= 2 { Some(k - 1) } else { None }),
    ];

    for (pi, &(bottom, top)) in placements.iter().enumerate() {
        if pi == 2 && (k < 2 || bottom.is_none()) {
            continue;
        }
        let verdicts = usize::from(bottom.is_some()) + usize::from(top.is_some());
        let free = k - verdicts;
        let cells = free * s;
        let mut table = vec![0usize; cells];
        loop {
            if let Some(monitor) =
                build_candidate(&alphabet, k, free, bottom, top, &table)
            {
                let key = canonical_key(&monitor);
                if !seen.contains_key(&key) && verify_candidate(&monitor, nba, complement)? {
                    seen.insert(key, ());
                    found.push(monitor);
                }
            }
            // lexicographic increment over base-k digits
            let mut pos = cells;
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                table[pos] += 1;
                if table[pos] < k {
                    break;
                }
                table[pos] = 0;
            }
            if table.iter().all(|&d| d == 0) {
                break;
            }
            if cells == 0 {
                break;
            }
        }
    }
    Ok(found)
}

fn build_candidate(
    alphabet: &crate::alphabet::Alphabet,
    k: usize,
    free: usize,
    bottom: Option<StateId>,
    top: Option<StateId>,
    table: &[usize],
) -> Option<Monitor> {
    let s = alphabet.len();
    let mut next: Vec<Vec<StateId>> = Vec::with_capacity(k);
    for q in 0..free {
        next.push(table[q * s..(q + 1) * s].to_vec());
    }
    for verdict in [bottom, top].into_iter().flatten() {
        next.push(vec![verdict; s]);
    }

    // all states reachable from 0
    let mut seen = vec![false; k];
    seen[0] = true;
    let mut stack = vec![0usize];
    let mut count = 1;
    while let Some(q) = stack.pop() {
        for &t in &next[q] {
            if !seen[t] {
                seen[t] = true;
                count += 1;
                stack.push(t);
            }
        }
    }
    if count != k {
        return None;
    }

    let mut names: Vec<String> = (0..free).map(|i| format!("s{i}")).collect();
    if bottom.is_some() {
        names.push("bot".into());
    }
    if top.is_some() {
        names.push("top".into());
    }
    Monitor::from_parts(alphabet.clone(), names, 0, bottom, top, next).ok()
}

fn verify_candidate(monitor: &Monitor, nba: &Nba, complement: &Nba) -> Result<bool> {
    if let Some(bot) = monitor.bottom() {
        let reaches_bottom = monitor.verdict_reached_nba(bot);
        if !reaches_bottom.intersect(nba)?.is_empty_language() {
            return Ok(false);
        }
    }
    if let Some(top) = monitor.top() {
        let reaches_top = monitor.verdict_reached_nba(top);
        if !reaches_top.intersect(complement)?.is_empty_language() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;
    use crate::monitor::Verdict;
    use crate::synth::{factor_monitor, Polarity};
    use crate::word::parse_word;

    fn ab() -> Alphabet {
        Alphabet::from_chars("ab").unwrap()
    }

    fn bb_watcher() -> Monitor {
        factor_monitor(&ab(), &parse_word(&ab(), "bb").unwrap(), Polarity::Forbidden).unwrap()
    }

    #[test]
    fn identity_is_an_epimorphism() {
        let m = bb_watcher();
        let id = MonitorMorphism {
            source: m.clone(),
            target: m.clone(),
            map: (0..m.num_states()).collect(),
        };
        let check = check_morphism(&id).unwrap();
        assert!(check.valid && check.surjective);

        let found = find_epimorphism(&m, &m).unwrap().unwrap();
        assert_eq!(found.map, (0..m.num_states()).collect::<Vec<_>>());
    }

    #[test]
    fn collapsing_map_fails_validation() {
        let m = bb_watcher();
        // send everything to bottom
        let bad = MonitorMorphism {
            source: m.clone(),
            target: m.clone(),
            map: vec![2, 2, 2],
        };
        let check = check_morphism(&bad).unwrap();
        assert!(!check.valid);
    }

    #[test]
    fn isomorphism_needs_matching_verdicts() {
        let m = bb_watcher();
        assert!(monitors_isomorphic(&m, &m).unwrap());
        let top_version =
            factor_monitor(&ab(), &parse_word(&ab(), "bb").unwrap(), Polarity::Guaranteed)
                .unwrap();
        assert!(!monitors_isomorphic(&m, &top_version).unwrap());
        let single = Monitor::single_verdict(ab(), Verdict::Bottom);
        assert!(!monitors_isomorphic(&m, &single).unwrap());
    }

    #[test]
    fn verify_single_verdict_monitors_against_universal() {
        let universal = Nba::universal(ab());
        let top = Monitor::single_verdict(ab(), Verdict::Top);
        assert!(verify_monitor(&top, &universal).unwrap());
        let bottom = Monitor::single_verdict(ab(), Verdict::Bottom);
        assert!(!verify_monitor(&bottom, &universal).unwrap());
    }

    #[test]
    fn minimal_monitor_for_universal_language() {
        let found = minimal_monitors(&Nba::universal(ab()), 2).unwrap();
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].num_states(), 1);
        assert_eq!(found[0].verdict_of(found[0].initial()), Verdict::Top);
    }

    #[test]
    fn search_bounds_are_enforcedered() {
        assert!(matches!(
            minimal_monitors(&Nba::universal(ab()), 6),
            Err(Error::SearchBound(_))
        ));
    }
}
