//! Büchi complementation.
//!
//! Nondeterministic inputs go through the rank-based construction restricted
//! to tight level rankings: the complement tracks the exact reachable subset
//! and nondeterministically switches to ranked mode, where every state
//! carries a rank that never increases along transitions, accepting states
//! carry even ranks, and a breakpoint set certifies that every run gets
//! stuck on an odd rank. Deterministic inputs take the cheaper two-copy
//! route: guess the last visit to an accepting state and stay accepting-free
//! afterwards, with a universal sink for runs that die.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::nba::{Nba, StateId};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum CKey {
    /// Waiting phase: the exact subset reachable on the input read so far.
    Subset(u64),
    /// Ranked phase: per-state ranks (-1 for absent) plus the breakpoint set
    /// of even-ranked states still owing an odd visit.
    Ranked { ranks: Box<[i8]>, owing: u64 },
}

impl Nba {
    /// The complement automaton: accepts exactly the words this automaton
    /// rejects.
    pub fn complement(&self) -> Result<Nba> {
        self.complement_with(&Limits::default())
    }

    pub fn complement_with(&self, limits: &Limits) -> Result<Nba> {
        let n = self.num_states();
        if n > limits.complement_cap || n > 64 {
            return Err(Error::ResourceLimit {
                what: "complementation state cap",
                limit: limits.complement_cap.min(64),
            });
        }
        if self.is_deterministic() {
            Ok(self.complement_deterministic())
        } else {
            self.complement_ranked(limits)
        }
    }

    /// Language inclusion `L(self) ⊆ L(other)`.
    pub fn included_in(&self, other: &Nba) -> Result<bool> {
        self.included_in_with(other, &Limits::default())
    }

    pub fn included_in_with(&self, other: &Nba, limits: &Limits) -> Result<bool> {
        if self.alphabet() != other.alphabet() {
            return Err(Error::AlphabetMismatch);
        }
        let complement = other.complement_with(limits)?;
        Ok(self.intersect(&complement)?.is_empty_language())
    }

    fn complement_deterministic(&self) -> Nba {
        let n = self.num_states();
        let alphabet = self.alphabet().clone();
        if self.initial().is_empty() {
            return Nba::universal(alphabet);
        }
        // layout: 0..n wait copies, n..2n accepting-free copies, 2n sink
        let wait = |q: StateId| q;
        let free = |q: StateId| n + q;
        let sink = 2 * n;
        let mut transitions: Vec<Vec<Vec<StateId>>> = vec![vec![Vec::new(); alphabet.len()]; 2 * n + 1];
        for q in 0..n {
            for a in alphabet.ids() {
                match self.successors(q, a).first() {
                    Some(&t) => {
                        transitions[wait(q)][a].push(wait(t));
                        if !self.is_accepting(t) {
                            transitions[wait(q)][a].push(free(t));
                            transitions[free(q)][a].push(free(t));
                        }
                    }
                    None => {
                        transitions[wait(q)][a].push(sink);
                        transitions[free(q)][a].push(sink);
                    }
                }
            }
        }
        for a in alphabet.ids() {
            transitions[sink][a].push(sink);
        }
        let mut names: Vec<String> = Vec::with_capacity(2 * n + 1);
        for q in 0..n {
            names.push(format!("w.{}", self.state_name(q)));
        }
        for q in 0..n {
            names.push(format!("f.{}", self.state_name(q)));
        }
        names.push("sink".into());
        let mut accepting = vec![false; 2 * n + 1];
        for q in 0..n {
            accepting[free(q)] = true;
        }
        accepting[sink] = true;
        let full = Nba::from_parts(
            alphabet,
            names,
            vec![wait(self.initial()[0])],
            accepting,
            transitions,
        )
        .expect("two-copy complement is well-formed");
        full.reachable_part()
    }

    fn complement_ranked(&self, limits: &Limits) -> Result<Nba> {
        let n = self.num_states();
        let alphabet = self.alphabet().clone();
        let mut index: HashMap<CKey, StateId> = HashMap::new();
        let mut keys: Vec<CKey> = Vec::new();
        let mut queue = std::collections::VecDeque::new();
        let mut intern = |key: CKey,
                          keys: &mut Vec<CKey>,
                          queue: &mut std::collections::VecDeque<StateId>|
         -> Result<StateId> {
            if let Some(&id) = index.get(&key) {
                return Ok(id);
            }
            if keys.len() >= limits.complement_state_bound {
                return Err(Error::ResourceLimit {
                    what: "complement states",
                    limit: limits.complement_state_bound,
                });
            }
            let id = keys.len();
            index.insert(key.clone(), id);
            keys.push(key);
            queue.push_back(id);
            Ok(id)
        };

        let initial = intern(CKey::Subset(self.initial_mask()), &mut keys, &mut queue)?;
        let mut transitions: Vec<Vec<Vec<StateId>>> = Vec::new();

        // tight rankings per target subset are reused across jump sources
        let mut jump_cache: HashMap<u64, Vec<Box<[i8]>>> = HashMap::new();

        while let Some(id) = queue.pop_front() {
            debug_assert_eq!(id, transitions.len());
            let key = keys[id].clone();
            let mut rows: Vec<Vec<StateId>> = Vec::with_capacity(alphabet.len());
            match key {
                CKey::Subset(mask) => {
                    for a in alphabet.ids() {
                        let next = self.subset_step(mask, a);
                        let mut row = vec![intern(CKey::Subset(next), &mut keys, &mut queue)?];
                        let rankings = jump_cache.entry(next).or_insert_with(|| {
                            let mut out = Vec::new();
                            let dom: Vec<StateId> = mask_states(next);
                            let cap = if dom.is_empty() { 0 } else { 2 * dom.len() - 1 };
                            let bounds = vec![cap as i8; dom.len()];
                            for_each_tight_ranking(self, &dom, &bounds, &mut |ranks| {
                                out.push(ranks.to_vec().into_boxed_slice());
                            });
                            out
                        });
                        for ranking in rankings.clone() {
                            let mut ranks = vec![-1i8; n];
                            for (i, &q) in mask_states(next).iter().enumerate() {
                                ranks[q] = ranking[i];
                            }
                            row.push(intern(
                                CKey::Ranked {
                                    ranks: ranks.into_boxed_slice(),
                                    owing: 0,
                                },
                                &mut keys,
                                &mut queue,
                            )?);
                        }
                        row.sort_unstable();
                        row.dedup();
                        rows.push(row);
                    }
                }
                CKey::Ranked { ref ranks, owing } => {
                    let dom_mask = ranks
                        .iter()
                        .enumerate()
                        .fold(0u64, |m, (q, &r)| if r >= 0 { m | 1 << q } else { m });
                    for a in alphabet.ids() {
                        let next_mask = self.subset_step(dom_mask, a);
                        let dom: Vec<StateId> = mask_states(next_mask);
                        // covering: every rank at most the minimum over predecessors
                        let mut bounds = vec![i8::MAX; dom.len()];
                        for q in mask_states(dom_mask) {
                            let r = ranks[q];
                            for &t in self.successors(q, a) {
                                let pos = dom.binary_search(&t).expect("successor is in the image");
                                bounds[pos] = bounds[pos].min(r);
                            }
                        }
                        let cap = if dom.is_empty() { 0 } else { (2 * dom.len() - 1) as i8 };
                        for b in bounds.iter_mut() {
                            *b = (*b).min(cap);
                        }
                        let owing_step = self.subset_step(owing, a);
                        let mut row = Vec::new();
                        for_each_tight_ranking(self, &dom, &bounds, &mut |ranking| {
                            let mut next_ranks = vec![-1i8; n];
                            let mut evens = 0u64;
                            for (i, &q) in dom.iter().enumerate() {
                                next_ranks[q] = ranking[i];
                                if ranking[i] % 2 == 0 {
                                    evens |= 1 << q;
                                }
                            }
                            let next_owing = if owing == 0 { evens } else { owing_step & evens };
                            row.push(CKey::Ranked {
                                ranks: next_ranks.into_boxed_slice(),
                                owing: next_owing,
                            });
                        });
                        let mut ids = Vec::with_capacity(row.len());
                        for key in row {
                            ids.push(intern(key, &mut keys, &mut queue)?);
                        }
                        ids.sort_unstable();
                        ids.dedup();
                        rows.push(ids);
                    }
                }
            }
            transitions.push(rows);
        }

        let accepting: Vec<bool> = keys
            .iter()
            .map(|k| matches!(k, CKey::Ranked { owing: 0, .. }))
            .collect();
        let names = (0..keys.len()).map(|i| format!("c{i}")).collect();
        Nba::from_parts(alphabet, names, vec![initial], accepting, transitions)
    }

    /// Restriction to the states reachable from the initial set, renumbered
    /// in BFS discovery order.
    pub fn reachable_part(&self) -> Nba {
        let mut order: Vec<StateId> = Vec::new();
        let mut remap = vec![usize::MAX; self.num_states()];
        let mut queue = std::collections::VecDeque::new();
        for &q in self.initial() {
            if remap[q] == usize::MAX {
                remap[q] = order.len();
                order.push(q);
                queue.push_back(q);
            }
        }
        while let Some(q) = queue.pop_front() {
            for a in self.alphabet().ids() {
                for &t in self.successors(q, a) {
                    if remap[t] == usize::MAX {
                        remap[t] = order.len();
                        order.push(t);
                        queue.push_back(t);
                    }
                }
            }
        }
        let names = order.iter().map(|&q| self.state_name(q).to_string()).collect();
        let accepting = order.iter().map(|&q| self.is_accepting(q)).collect();
        let transitions = order
            .iter()
            .map(|&q| {
                self.alphabet()
                    .ids()
                    .map(|a| self.successors(q, a).iter().map(|&t| remap[t]).collect())
                    .collect()
            })
            .collect();
        let initial = self.initial().iter().map(|&q| remap[q]).collect();
        Nba::from_parts(self.alphabet().clone(), names, initial, accepting, transitions)
            .expect("reachable part preserves well-formedness")
    }
}

fn mask_states(mask: u64) -> Vec<StateId> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    let mut rest = mask;
    while rest != 0 {
        out.push(rest.trailing_zeros() as usize);
        rest &= rest - 1;
    }
    out
}

/// Enumerates the tight level rankings over `dom` with per-position upper
/// bounds: accepting states take even ranks, the maximum rank is odd, and
/// every odd rank below the maximum occurs. The empty domain yields the
/// empty ranking, which is tight by convention. Rankings are produced in
/// lexicographic order.
fn for_each_tight_ranking(
    nba: &Nba,
    dom: &[StateId],
    bounds: &[i8],
    f: &mut impl FnMut(&[i8]),
) {
    let m = dom.len();
    if m == 0 {
        f(&[]);
        return;
    }
    let mut ranks = vec![0i8; m];

    fn recurse(
        nba: &Nba,
        dom: &[StateId],
        bounds: &[i8],
        ranks: &mut Vec<i8>,
        pos: usize,
        max_so_far: i8,
        odds_present: u32,
        f: &mut impl FnMut(&[i8]),
    ) {
        let m = dom.len();
        if pos == m {
            if max_so_far >= 0 && max_so_far % 2 == 1 {
                let needed = (max_so_far as u32 + 1) / 2;
                if odds_present == (1u32 << needed) - 1 {
                    f(ranks);
                }
            }
            return;
        }
        // odd ranks below the current maximum that are still missing cannot
        // outnumber the remaining positions
        let missing = ((max_so_far.max(0) as u32 + 1) / 2)
            .saturating_sub(odds_present.count_ones());
        if missing > (m - pos) as u32 {
            return;
        }
        let q = dom[pos];
        let accepting = nba.is_accepting(q);
        let bound = bounds[pos];
        if bound < 0 {
            return;
        }
        for r in 0..=bound {
            if accepting && r % 2 == 1 {
                continue;
            }
            ranks[pos] = r;
            let odds = if r % 2 == 1 {
                odds_present | (1u32 << (r / 2))
            } else {
                odds_present
            };
            recurse(nba, dom, bounds, ranks, pos + 1, max_so_far.max(r), odds, f);
        }
    }

    recurse(nba, dom, bounds, &mut ranks, 0, -1, 0, f);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;
    use crate::nba::NbaBuilder;
    use crate::word::{enumerate_lassos, Lasso};

    fn ab() -> Alphabet {
        Alphabet::from_chars("ab").unwrap()
    }

    #[test]
    fn complement_of_universal_is_empty() {
        let c = Nba::universal(ab()).complement().unwrap();
        assert!(c.is_empty_language());
    }

    #[test]
    fn complement_of_empty_is_universal() {
        let c = Nba::empty(ab()).complement().unwrap();
        assert!(c.is_universal_language().unwrap());
    }

    #[test]
    fn complement_of_inf_a_is_fin_a() {
        let mut b = NbaBuilder::new(ab());
        b.initial("q0").accepting("q1");
        b.edge("q0", "b", "q0")
            .edge("q0", "a", "q1")
            .edge("q1", "a", "q1")
            .edge("q1", "b", "q0");
        let a = b.build();
        let c = a.complement().unwrap();
        for w in enumerate_lassos(2, 3, 3) {
            let infinitely_many_a = w.period().contains(&0);
            assert_eq!(a.accepts_lasso(&w), infinitely_many_a, "{}", w.display(&ab()));
            assert_eq!(c.accepts_lasso(&w), !infinitely_many_a, "{}", w.display(&ab()));
        }
    }

    #[test]
    fn ranked_complement_on_nondeterministic_guesser() {
        // Σ*bbΣ^ω via a nondeterministic guess of the bb factor
        let mut b = NbaBuilder::new(ab());
        b.initial("g0").accepting("g2");
        b.edge("g0", "a", "g0")
            .edge("g0", "b", "g0")
            .edge("g0", "b", "g1")
            .edge("g1", "b", "g2")
            .edge("g2", "a", "g2")
            .edge("g2", "b", "g2");
        let a = b.build();
        assert!(!a.is_deterministic());
        let c = a.complement().unwrap();
        for w in enumerate_lassos(2, 3, 3) {
            assert_eq!(
                c.accepts_lasso(&w),
                !a.accepts_lasso(&w),
                "{}",
                w.display(&ab())
            );
        }
        // bb-free words form the complement
        assert!(c.accepts_lasso(&Lasso::new(vec![], vec![0, 1]).unwrap()));
        assert!(!c.accepts_lasso(&Lasso::new(vec![1, 1], vec![0]).unwrap()));
    }

    #[test]
    fn inclusion_basics() {
        let mut b = NbaBuilder::new(ab());
        b.initial("f").accepting("f");
        b.edge("f", "a", "f");
        let only_a = b.build();

        let mut b = NbaBuilder::new(ab());
        b.initial("q0").accepting("q1");
        b.edge("q0", "b", "q0")
            .edge("q0", "a", "q1")
            .edge("q1", "a", "q1")
            .edge("q1", "b", "q0");
        let inf_a = b.build();

        assert!(only_a.included_in(&inf_a).unwrap());
        assert!(!inf_a.included_in(&only_a).unwrap());
        assert!(only_a.included_in(&only_a).unwrap());
        assert!(Nba::empty(ab()).included_in(&only_a).unwrap());
    }

    #[test]
    fn cap_error_surfaces() {
        let limits = Limits::with_cap(1);
        let mut b = NbaBuilder::new(ab());
        b.initial("x").accepting("y");
        b.edge("x", "a", "y").edge("y", "a", "x");
        assert!(matches!(
            b.build().complement_with(&limits),
            Err(Error::ResourceLimit { .. })
        ));
    }
}
