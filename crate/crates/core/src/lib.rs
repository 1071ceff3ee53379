//! Tripartite vacuum nonlocality extracted by three localized two-level
//! detectors coupled for a finite time to a free Klein–Gordon field.
//!
//! The pipeline runs window functions → smeared vacuum amplitudes →
//! Gaussian moment expansion → the detectors' reduced density matrix →
//! local filtering → Svetlichny and polytope certification of full
//! tripartite nonlocality. A truncated-Fock lattice field provides an exact
//! reference for the perturbative algebra.

pub mod battery;
mod bessel;
pub mod correlator;
pub mod error;
pub mod harness;
pub mod labels;
pub mod nonlocality;
pub mod oracle;
pub mod quadrature;
pub mod rho;
pub mod wick;
pub mod windows;

pub use error::{Error, Result};
