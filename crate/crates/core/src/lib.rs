//! Gapped subshifts with non-uniform specification.
//!
//! The crate builds the subshift `X` obtained from a base subshift `Z` by
//! adding a fresh gap symbol `0` and requiring every run of `s` base symbols
//! to be followed by at least `ceil(tau * s)` zeros before the next base
//! symbol. On top of that it provides
//!
//! * language membership and exact counting ([`gapped`], [`counting`]),
//! * constructive gluing of orbit segments with the explicit gap function,
//! * periodic-orbit censuses and growth profiles,
//! * empirical measures, Birkhoff averages, Wasserstein bounds and
//!   ergodic optimization over periodic orbits ([`measures`]),
//! * brute-force reference implementations ([`oracle`]) and the
//!   end-to-end verification suite ([`suite`]).
//!
//! Base subshifts are pluggable: every base variant implements
//! [`BaseLanguage`] and is registered by name in a [`BaseRegistry`], which
//! is how configuration files select them.

pub mod counting;
pub mod error;
pub mod gapped;
pub mod limits;
pub mod measures;
pub mod oracle;
pub mod rational;
pub mod suite;
pub mod symbolic;

pub use error::{Error, Result};
pub use gapped::{GappedSubshiftSpec, Tau};
pub use limits::Limits;
pub use symbolic::base::{BaseLanguage, BaseRegistry};
pub use symbolic::observable::{Observable, ObservableRegistry};
pub use symbolic::{Alphabet, CyclicWord, Symbol, Word, WordFormat};
