/// Resource limits for the expensive language oracles.
///
/// Complementation-backed checks refuse inputs larger than `complement_cap`
/// states and abort with an explicit error instead of degrading silently;
/// the remaining bounds guard the intermediate structures those checks build.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Limits {
    /// Maximum input states for complementation, universality, inclusion and
    /// the closure constructions that prune by universality.
    pub complement_cap: usize,
    /// Maximum states materialized while building a complement automaton.
    pub complement_state_bound: usize,
    /// Maximum transition profiles materialized per residual analysis.
    pub profile_bound: usize,
    /// Maximum tableau states for the formula-to-automaton translation.
    pub tableau_cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            complement_cap: 12,
            complement_state_bound: 1 << 18,
            profile_bound: 1 << 16,
            tableau_cap: 1 << 14,
        }
    }
}

impl Limits {
    /// Default limits with a different complementation cap. Subset-based
    /// constructions index state sets by machine words, so the cap tops out
    /// at 64.
    pub fn with_cap(cap: usize) -> Self {
        Limits {
            complement_cap: cap.min(64),
            ..Limits::default()
        }
    }
}
