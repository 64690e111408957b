//! Monitorability analysis and runtime-monitor synthesis for ω-regular
//! languages.

pub mod alphabet;
pub mod closure;
pub mod complement;
pub mod dba;
pub mod error;
mod graph;
pub mod limits;
pub mod monitor;
pub mod nba;
mod profiles;
pub mod synth;
pub mod word;

pub use alphabet::{Alphabet, LetterId};
pub use dba::Dba;
pub use error::{Error, Result};
pub use limits::Limits;
pub use monitor::{Dbm, Monitor, MonitorRun, Verdict};
pub use nba::{Nba, NbaBuilder, StateId};
pub use word::{Lasso, Word};
