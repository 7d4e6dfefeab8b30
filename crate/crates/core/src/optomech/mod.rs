//! Linearized cavity optomechanics: a mirror coupled by radiation pressure
//! to one or two driven cavity modes.
//!
//! Covariance matrices produced here are in the `VacuumHalf` convention and
//! ordered as `(δq, δp, δX₁, δY₁, …)`.

pub mod dual;
pub mod dynamics;
pub mod filters;
pub mod intracavity;
pub mod membrane;
pub mod output;
pub mod params;

pub use dual::{
    assess_stability_dual, drift_matrix_dual, output_cm_dual, steady_state_dual, uncoupled_eigenvalues,
    CharPolyCoeffs, DualConfig, DualStability, DualSteadyState, LaserSpec,
};
pub use dynamics::{
    assess_stability, drift_matrix, exact_kernel_cutoff, resolvent, steady_cm, DriftModel, MechanicalBath,
    StabilityReport, SteadyMethod, ThermalKernel,
};
pub use filters::{
    make_exp_filters, make_filters, overlap, transform_norm_quadrature, FilterSet, FilterShape, FilterSpec,
};
pub use intracavity::{
    intracavity_report, log_negativity_half, rwa_cm, rwa_log_negativity_bound, scattering_rates,
    IntracavityReport, RwaRegime,
};
pub use membrane::{membrane_residual, membrane_residual_exact, membrane_split, MembraneSplit, MembraneSpec};
pub use output::{
    output_cm, output_spectrum, projector_term_quadrature, tripartite_test, tripartite_test_half,
    OutputOptions,
};
pub use params::{
    bare_coupling, cavity_decay, derive_params, drive_amplitude, params_from_rates, thermal_occupation,
    DerivedParams, Detuning, OptomechConfig, BOLTZMANN, HBAR, SPEED_OF_LIGHT,
};
