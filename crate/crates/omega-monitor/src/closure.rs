//! Topological closure automata and the boundary decider.
//!
//! The closure of an ω-language is the smallest safety language containing
//! it; safety languages are exactly those accepted by a deterministic
//! automaton in which every state is final and rejection happens only
//! through undefined transitions. The boundary — closure of the language
//! intersected with closure of its complement — is the safety language of
//! the forever-undecided prefixes; a language is monitorable iff that
//! boundary is nowhere dense.

use std::collections::HashMap;

use crate::dba::Dba;
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::nba::Nba;
use crate::profiles::ResidualTable;

/// Which language a [`ClosureDba`] represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosureKind {
    /// Closure of the language itself.
    Closure,
    /// Closure of the complement language.
    ComplementClosure,
    /// Intersection of the two closures.
    Boundary,
}

/// An all-final partial deterministic automaton representing a safety
/// language, tagged with its provenance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureDba {
    dba: Dba,
    kind: ClosureKind,
}

impl ClosureDba {
    fn new(dba: Dba, kind: ClosureKind) -> Self {
        debug_assert!(dba.all_accepting());
        ClosureDba { dba, kind }
    }

    pub fn kind(&self) -> ClosureKind {
        self.kind
    }

    pub fn dba(&self) -> &Dba {
        &self.dba
    }

    pub fn into_dba(self) -> Dba {
        self.dba
    }

    pub fn to_nba(&self) -> Nba {
        self.dba.to_nba()
    }

    pub fn num_states(&self) -> usize {
        self.dba.num_states()
    }

    /// Total on its reachable part, i.e. the safety language is all of Σ^ω
    /// when the automaton is also nonempty.
    pub fn is_total(&self) -> bool {
        self.dba.is_total()
    }
}

fn mask_name(nba: &Nba, mask: u64) -> String {
    if mask == 0 {
        return "∅".into();
    }
    let mut parts = Vec::new();
    let mut rest = mask;
    while rest != 0 {
        let q = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        parts.push(nba.state_name(q));
    }
    parts.join("+")
}

/// Deterministic subset construction restricted to subsets satisfying
/// `keep`; transitions into dropped subsets are left undefined. All states
/// are final. Returns the empty automaton when the initial subset is
/// dropped.
fn subset_safety_dba(nba: &Nba, start: u64, keep: impl Fn(u64) -> bool) -> Result<Dba> {
    if nba.num_states() > 64 {
        return Err(Error::ResourceLimit {
            what: "subset construction",
            limit: 64,
        });
    }
    if !keep(start) {
        return Ok(Dba::empty(nba.alphabet().clone()));
    }
    let mut index: HashMap<u64, usize> = HashMap::new();
    let mut masks = vec![start];
    index.insert(start, 0);
    let mut queue = std::collections::VecDeque::from([0usize]);
    let mut next: Vec<Vec<Option<usize>>> = Vec::new();
    while let Some(i) = queue.pop_front() {
        debug_assert_eq!(i, next.len());
        let mask = masks[i];
        let mut rows = Vec::with_capacity(nba.alphabet().len());
        for a in nba.alphabet().ids() {
            let image = nba.subset_step(mask, a);
            if !keep(image) {
                rows.push(None);
                continue;
            }
            let id = *index.entry(image).or_insert_with(|| {
                masks.push(image);
                queue.push_back(masks.len() - 1);
                masks.len() - 1
            });
            rows.push(Some(id));
        }
        next.push(rows);
    }
    let names = masks.iter().map(|&m| mask_name(nba, m)).collect();
    let n = masks.len();
    Dba::from_parts(nba.alphabet().clone(), names, Some(0), vec![true; n], next)
}

/// Safety automaton for the closure of `L(nba)`.
///
/// The automaton is the subset construction over the live part of the
/// input: a prefix keeps the subset nonempty exactly when it extends to a
/// word of the language, so the all-final subset automaton accepts the
/// closure. Transitions to the empty subset are undefined.
pub fn closure_dba(nba: &Nba) -> Result<ClosureDba> {
    let trimmed = nba.trim_live();
    let dba = subset_safety_dba(&trimmed, trimmed.initial_mask(), |m| m != 0)?;
    Ok(ClosureDba::new(dba, ClosureKind::Closure))
}

/// Safety automaton for the closure of the complement of `L(nba)`.
///
/// Subsets over the untrimmed input; subsets with a universal residual are
/// removed, because a prefix reaching one of them has no extension outside
/// the language. Needs the complementation cap.
pub fn complement_closure_dba(nba: &Nba, limits: &Limits) -> Result<ClosureDba> {
    let table = ResidualTable::build(nba, limits)?;
    complement_closure_with_table(nba, &table)
}

pub(crate) fn complement_closure_with_table(
    nba: &Nba,
    table: &ResidualTable,
) -> Result<ClosureDba> {
    let dba = subset_safety_dba(nba, nba.initial_mask(), |m| !table.is_universal(m))?;
    Ok(ClosureDba::new(dba, ClosureKind::ComplementClosure))
}

/// Safety automaton for the boundary: the product of the two closures,
/// restricted to pairs where both components are defined.
pub fn boundary_dba(nba: &Nba, limits: &Limits) -> Result<ClosureDba> {
    let closure = closure_dba(nba)?;
    let cc = complement_closure_dba(nba, limits)?;
    let left = closure.dba();
    let right = cc.dba();
    let alphabet = nba.alphabet().clone();
    let (Some(l0), Some(r0)) = (left.initial(), right.initial()) else {
        return Ok(ClosureDba::new(Dba::empty(alphabet), ClosureKind::Boundary));
    };

    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut pairs = vec![(l0, r0)];
    index.insert((l0, r0), 0);
    let mut queue = std::collections::VecDeque::from([0usize]);
    let mut next: Vec<Vec<Option<usize>>> = Vec::new();
    while let Some(i) = queue.pop_front() {
        let (l, r) = pairs[i];
        let mut rows = Vec::with_capacity(alphabet.len());
        for a in alphabet.ids() {
            match (left.step(l, a), right.step(r, a)) {
                (Some(l2), Some(r2)) => {
                    let id = *index.entry((l2, r2)).or_insert_with(|| {
                        pairs.push((l2, r2));
                        queue.push_back(pairs.len() - 1);
                        pairs.len() - 1
                    });
                    rows.push(Some(id));
                }
                _ => rows.push(None),
            }
        }
        next.push(rows);
    }
    let names = pairs
        .iter()
        .map(|&(l, r)| format!("{}|{}", left.state_name(l), right.state_name(r)))
        .collect();
    let n = pairs.len();
    let dba = Dba::from_parts(alphabet, names, Some(0), vec![true; n], next)?;
    Ok(ClosureDba::new(dba, ClosureKind::Boundary))
}

/// Nowhere-density of a safety language: the language contains no set
/// `uΣ^ω`, i.e. from every reachable state some word leads to an undefined
/// transition. The empty automaton is nowhere dense.
pub fn safety_nowhere_dense(c: &ClosureDba) -> bool {
    let dba = c.dba();
    let n = dba.num_states();
    let mut escapes = vec![false; n];
    for q in 0..n {
        if dba.alphabet().ids().any(|a| dba.step(q, a).is_none()) {
            escapes[q] = true;
        }
    }
    let mut changed = true;
    while changed {
        changed = false;
        for q in 0..n {
            if !escapes[q]
                && dba
                    .alphabet()
                    .ids()
                    .any(|a| dba.step(q, a).map(|t| escapes[t]).unwrap_or(false))
            {
                escapes[q] = true;
                changed = true;
            }
        }
    }
    escapes.iter().all(|&e| e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;
    use crate::nba::NbaBuilder;
    use crate::word::enumerate_lassos;

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

    #[test]
    fn closure_of_universal_is_total_singleton() {
        let c = closure_dba(&Nba::universal(ab())).unwrap();
        assert_eq!(c.num_states(), 1);
        assert!(c.is_total());
    }

    #[test]
    fn closure_of_inf_a_is_everything() {
        let c = closure_dba(&inf_a()).unwrap();
        assert!(c.is_total());
        assert!(c.num_states() > 0);
        for w in enumerate_lassos(2, 2, 2) {
            assert!(c.to_nba().accepts_lasso(&w));
        }
    }

    #[test]
    fn complement_closure_degenerate_cases() {
        // empty language: closure of the complement is everything
        let cc = complement_closure_dba(&Nba::empty(ab()), &Limits::default()).unwrap();
        assert!(cc.is_total());
        assert!(cc.num_states() > 0);
        // universal language: no prefix leaves the language
        let cc = complement_closure_dba(&Nba::universal(ab()), &Limits::default()).unwrap();
        assert_eq!(cc.num_states(), 0);
    }

    #[test]
    fn boundary_of_clopen_prefix_set_is_empty() {
        // L = abΣ^ω: decided after two letters
        let mut b = NbaBuilder::new(ab());
        b.initial("s0").accepting("f");
        b.edge("s0", "a", "s1").edge("s1", "b", "f");
        b.edge("f", "a", "f").edge("f", "b", "f");
        b.accepting("f");
        let l = b.build();
        let boundary = boundary_dba(&l, &Limits::default()).unwrap();
        // prefix states may linger, but no infinite word survives in them
        assert!(boundary.to_nba().is_empty_language());
        assert!(safety_nowhere_dense(&boundary));
    }

    #[test]
    fn boundary_of_universal_is_empty() {
        let boundary = boundary_dba(&Nba::universal(ab()), &Limits::default()).unwrap();
        assert_eq!(boundary.num_states(), 0);
        assert!(safety_nowhere_dense(&boundary));
    }

    #[test]
    fn boundary_of_inf_a_is_everything() {
        let boundary = boundary_dba(&inf_a(), &Limits::default()).unwrap();
        assert!(boundary.num_states() > 0);
        assert!(boundary.is_total());
        assert!(!safety_nowhere_dense(&boundary));
        // cross-check through the two closures on small lassos
        let closure = closure_dba(&inf_a()).unwrap();
        let cc = complement_closure_dba(&inf_a(), &Limits::default()).unwrap();
        for w in enumerate_lassos(2, 3, 3) {
            let in_boundary = boundary.to_nba().accepts_lasso(&w);
            let in_both =
                closure.to_nba().accepts_lasso(&w) && cc.to_nba().accepts_lasso(&w);
            assert_eq!(in_boundary, in_both);
        }
    }
}
