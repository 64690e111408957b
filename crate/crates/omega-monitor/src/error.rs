use thiserror::Error;

/// Errors shared by all analyses and constructions in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Two automata (or a formula and a word) were combined over different alphabets.
    #[error("alphabet mismatch between operands")]
    AlphabetMismatch,

    #[error("unknown state `{0}`")]
    UnknownState(String),

    #[error("unknown letter `{0}`")]
    UnknownLetter(String),

    /// A lasso word was built with an empty period.
    #[error("lasso period must be nonempty")]
    EmptyPeriod,

    /// An operation requiring a deterministic automaton was given a
    /// nondeterministic one.
    #[error("automaton is not deterministic: {0}")]
    NotDeterministic(String),

    /// A weak-automaton operation found a strongly connected component mixing
    /// final and non-final states.
    #[error("automaton is not weak: component containing `{0}` mixes final and non-final states")]
    NotWeak(String),

    /// A totality-requiring operation found a missing transition.
    #[error("transition function is not total: no `{letter}`-successor of `{state}`")]
    NotTotal { state: String, letter: String },

    /// The language admits no monitor: some reachable configuration can never
    /// be resolved to a verdict.
    #[error("language is not monitorable")]
    NotMonitorable,

    /// A factor or word used a letter outside the target alphabet.
    #[error("letter `{0}` is outside the alphabet")]
    LetterOutsideAlphabet(String),

    /// Gadget construction was asked to inject a fresh letter that already
    /// exists in the input alphabet.
    #[error("fresh letter `{0}` collides with the input alphabet")]
    FreshLetterCollision(String),

    /// Exhaustive search was invoked beyond its supported bounds.
    #[error("search bound exceeded: {0}")]
    SearchBound(String),

    /// A construction exceeded a configured resource limit.
    #[error("resource limit exceeded: {what} (limit {limit})")]
    ResourceLimit { what: &'static str, limit: usize },

    /// A textual automaton or word failed to parse.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A structural invariant of an automaton type was violated.
    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),
}

pub type Result<T> = std::result::Result<T, Error>;
