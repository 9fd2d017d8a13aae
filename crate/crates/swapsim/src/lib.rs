//! Fock-space simulator and certifier for coincidence-conditioned
//! photon-pair interference.
//!
//! Two pair sources feed four spatial paths; two of those paths interfere on
//! a balanced beam splitter and are monitored by polarization-resolving
//! detectors. Conditioning on a two-fold coincidence leaves a two-photon
//! state on the outer paths. This crate simulates that pipeline exactly in a
//! truncated Fock space ([`fock`], [`elements`], [`detect`]), quantifies the
//! entanglement of the conditioned states ([`entangle`]), and cross-checks
//! every number against an independent exact-arithmetic oracle ([`oracle`]).

mod error;

pub mod cli;
pub mod detect;
pub mod elements;
pub mod entangle;
pub mod fock;
pub mod oracle;
pub mod report;

pub use error::{Error, Result};
