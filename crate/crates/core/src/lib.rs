//! Exact arithmetic for q-adic expansions of rationals and for the
//! question of which points of a missing-digit Cantor set can be reached by
//! multiplying a rational by powers of a base.

pub mod cantor;
pub mod certificates;
pub mod enumeration;
pub mod error;
pub mod expansion;
mod natstr;
pub mod orders;
pub mod rational_core;

pub use cantor::{DigitCantorSet, Gap};
pub use certificates::{CongruenceWitness, ExclusionBound, ExclusionCertificate};
pub use enumeration::ExceptionalReport;
pub use error::{Error, Result};
pub use expansion::ExpansionQ;
pub use rational_core::{Natural, Rational};
