//! Gaussian states on `N` modes: physicality, symplectic spectra, channels,
//! entanglement criteria and measures, phase-space functions.

pub mod channel;
pub mod io;
pub mod measures;
pub mod phase_space;
pub mod random;
pub mod state;
pub mod williamson;

pub use channel::{apply_gcp, apply_tgcp, cp_margin, vacuum_projection_limit, GcpChannel, TgcpChannel};
pub use io::{format_cm, parse_cm};
pub use measures::{
    duan_grid, duan_variances, eof_symmetric, log_negativity, nu_min_pt, pt_spectrum_blocks,
    schmidt_entropy, separability_report, Negativity, PtSpectrum, SeparabilityReport,
};
pub use phase_space::{characteristic, eval_phase_space, wigner, PhaseSpaceFunction};
pub use state::{
    is_physical, omega, plus_i_omega, psd_tolerance, pt_mask, require_physical, z2, Convention,
    GaussianState, PhysicalityReport, TwoModeBlocks,
};
pub use williamson::{symplectic_eigenvalues, symplectic_spectrum, williamson_transform, WilliamsonForm};
