//! Gaussian continuous-variable quantum information and linearized
//! optomechanics.
//!
//! The crate is organized in layers:
//!
//! * [`numerics`]: eigenvalues, Lyapunov solver, adaptive quadrature and root finding.
//! * [`gaussian`]: Gaussian states, symplectic spectra, entanglement measures and channels.
//! * [`teleport`]: teleportation fidelities and optimal local maps.
//! * [`optomech`]: steady states, intracavity and output-mode entanglement of
//!   single- and dual-cavity optomechanical systems.

pub mod error;
pub mod gaussian;
pub mod numerics;
pub mod optomech;
pub mod teleport;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/gaussian-states.md")]
    mod gaussian_states {}
    #[doc = include_str!("../../../book/src/entanglement.md")]
    mod entanglement {}
    #[doc = include_str!("../../../book/src/teleportation.md")]
    mod teleportation {}
    #[doc = include_str!("../../../book/src/optomechanics.md")]
    mod optomechanics {}
    #[doc = include_str!("../../../book/src/output-modes.md")]
    mod output_modes {}
    #[doc = include_str!("../../../book/src/two-lasers.md")]
    mod two_lasers {}
    #[doc = include_str!("../../../book/src/command-line.md")]
    mod command_line {}
}
