//! Linear temporal logic over an explicit alphabet, with next-until as the
//! sole temporal primitive.
//!
//! Atoms are the letters of the alphabet: at every position of a word
//! exactly one atom holds. The core constructors are ⊤, a letter, negation,
//! disjunction and next-until; everything else (including ⊥, conjunction,
//! implication, next, until, finally and globally) is stored desugared.
//!
//! `φ XU ψ` holds at position `x` when some strictly later position `z`
//! satisfies `ψ` and every position strictly between `x` and `z` satisfies
//! `φ`. In particular `ff XU ψ` forces `z = x + 1`, which is how plain
//! "next" arises.

mod parse;
mod translate;

pub use parse::parse_ltl;
pub use translate::ltl_to_nba;

use crate::alphabet::LetterId;
use crate::word::Lasso;

/// Formula in core form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Top,
    Letter(LetterId),
    Not(Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    NextUntil(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn top() -> Formula {
        Formula::Top
    }

    pub fn letter(a: LetterId) -> Formula {
        Formula::Letter(a)
    }

    pub fn not(phi: Formula) -> Formula {
        Formula::Not(Box::new(phi))
    }

    pub fn or(phi: Formula, psi: Formula) -> Formula {
        Formula::Or(Box::new(phi), Box::new(psi))
    }

    pub fn next_until(phi: Formula, psi: Formula) -> Formula {
        Formula::NextUntil(Box::new(phi), Box::new(psi))
    }

    // derived constructors, stored desugared

    pub fn bottom() -> Formula {
        Formula::not(Formula::Top)
    }

    pub fn and(phi: Formula, psi: Formula) -> Formula {
        Formula::not(Formula::or(Formula::not(phi), Formula::not(psi)))
    }

    pub fn implies(phi: Formula, psi: Formula) -> Formula {
        Formula::or(Formula::not(phi), psi)
    }

    /// `X ψ`: the next position satisfies ψ.
    pub fn next(psi: Formula) -> Formula {
        Formula::next_until(Formula::bottom(), psi)
    }

    /// `φ U ψ`: non-strict until, `ψ ∨ (φ ∧ (φ XU ψ))`.
    pub fn until(phi: Formula, psi: Formula) -> Formula {
        Formula::or(
            psi.clone(),
            Formula::and(phi.clone(), Formula::next_until(phi, psi)),
        )
    }

    /// `F ψ`: eventually.
    pub fn finally(psi: Formula) -> Formula {
        Formula::until(Formula::Top, psi)
    }

    /// `G φ`: always.
    pub fn globally(phi: Formula) -> Formula {
        Formula::not(Formula::finally(Formula::not(phi)))
    }

    /// Number of core constructors in the tree.
    pub fn size(&self) -> usize {
        match self {
            Formula::Top | Formula::Letter(_) => 1,
            Formula::Not(p) => 1 + p.size(),
            Formula::Or(p, q) | Formula::NextUntil(p, q) => 1 + p.size() + q.size(),
        }
    }

    /// The distinct next-until subformulas, in first-occurrence order.
    pub(crate) fn next_until_subformulas(&self) -> Vec<&Formula> {
        fn walk<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) {
            match f {
                Formula::Top | Formula::Letter(_) => {}
                Formula::Not(p) => walk(p, out),
                Formula::Or(p, q) => {
                    walk(p, out);
                    walk(q, out);
                }
                Formula::NextUntil(p, q) => {
                    walk(p, out);
                    walk(q, out);
                    if !out.iter().any(|g| *g == f) {
                        out.push(f);
                    }
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }
}

/// Truth of a formula at position 0 of an ultimately periodic word.
///
/// Every subformula is evaluated at every position of the folded lasso.
/// Next-until is an eventuality: its value on the loop is the least
/// fixpoint of the one-step unfolding, computed by iterating from all-false
/// until stabilization.
pub fn eval_lasso(phi: &Formula, w: &Lasso) -> bool {
    eval_positions(phi, w)[0]
}

fn eval_positions(phi: &Formula, w: &Lasso) -> Vec<bool> {
    let n = w.len();
    match phi {
        Formula::Top => vec![true; n],
        Formula::Letter(a) => (0..n).map(|i| w.letter_at(i) == *a).collect(),
        Formula::Not(p) => eval_positions(p, w).into_iter().map(|b| !b).collect(),
        Formula::Or(p, q) => {
            let pv = eval_positions(p, w);
            let qv = eval_positions(q, w);
            pv.into_iter().zip(qv).map(|(a, b)| a || b).collect()
        }
        Formula::NextUntil(p, q) => {
            let pv = eval_positions(p, w);
            let qv = eval_positions(q, w);
            let mut val = vec![false; n];
            loop {
                let mut changed = false;
                // iterate backwards so prefix positions settle quickly
                for i in (0..n).rev() {
                    let z = w.next_position(i);
                    let next = qv[z] || (pv[z] && val[z]);
                    if next && !val[i] {
                        val[i] = true;
                        changed = true;
                    }
                }
                if !changed {
                    return val;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;
    use crate::word::parse_lasso;

    fn ab() -> Alphabet {
        Alphabet::from_chars("ab").unwrap()
    }

    #[test]
    fn top_everywhere() {
        let w = parse_lasso(&ab(), "ab/ba").unwrap();
        assert!(eval_lasso(&Formula::Top, &w));
        assert!(!eval_lasso(&Formula::bottom(), &w));
    }

    #[test]
    fn next_until_witnesses_strictly_later() {
        // a XU b on a/b: position 1 carries b
        let w = parse_lasso(&ab(), "a/b").unwrap();
        let phi = Formula::next_until(Formula::letter(0), Formula::letter(1));
        assert!(eval_lasso(&phi, &w));
        // a XU b on /a: b never comes
        let w = parse_lasso(&ab(), "/a").unwrap();
        assert!(!eval_lasso(&phi, &w));
    }

    #[test]
    fn next_is_position_one() {
        // X b ⟺ position 1 is b
        let phi = Formula::next(Formula::letter(1));
        assert!(eval_lasso(&phi, &parse_lasso(&ab(), "ab/a").unwrap()));
        assert!(!eval_lasso(&phi, &parse_lasso(&ab(), "aa/b").unwrap()));
        assert!(eval_lasso(&phi, &parse_lasso(&ab(), "/b").unwrap()));
    }

    #[test]
    fn globally_on_period() {
        let abc = Alphabet::from_chars("abc").unwrap();
        let a_or_b = Formula::or(Formula::letter(0), Formula::letter(1));
        let phi = Formula::globally(a_or_b);
        assert!(eval_lasso(&phi, &parse_lasso(&abc, "ab/ab").unwrap()));
        assert!(!eval_lasso(&phi, &parse_lasso(&abc, "a/c").unwrap()));
    }

    #[test]
    fn least_fixpoint_rejects_pure_cycles() {
        // a XU b on a^ω must be false even though a holds forever
        let phi = Formula::next_until(Formula::letter(0), Formula::letter(1));
        assert!(!eval_lasso(&phi, &parse_lasso(&ab(), "/a").unwrap()));
        // G F a on (ab)^ω
        let gfa = Formula::globally(Formula::finally(Formula::letter(0)));
        assert!(eval_lasso(&gfa, &parse_lasso(&ab(), "/ab").unwrap()));
        assert!(!eval_lasso(&gfa, &parse_lasso(&ab(), "a/b").unwrap()));
    }
}
