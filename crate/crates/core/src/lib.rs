//! Maki–Thompson rumor spreading on regular trees and hub trees.
//!
//! The crate computes the critical spread probability, survival probability
//! and hub-density thresholds exactly where possible, and checks them with
//! two independent simulators: a Galton–Watson engine driven by the derived
//! offspring laws and an event-driven continuous-time simulation of the
//! rumor itself on lazily generated trees.

pub mod cli;
pub mod ctmc;
pub mod error;
pub mod laws;
pub mod specfun;
pub mod stats;
pub mod gw;
pub mod thresholds;
pub mod treegen;

pub use error::{Error, Result};
