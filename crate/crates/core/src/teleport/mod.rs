//! Continuous-variable teleportation: noise, fidelities, standard forms and
//! optimal local preprocessing maps.

mod fidelity;
mod forms;
mod optimal;

pub use fidelity::{
    fidelity_bounds, fidelity_coherent, noise_from_blocks, noise_matrix, swap_cm, teleport,
    FidelityBounds, TeleportOutcome,
};
pub use forms::{
    normal_form_eta, standard_form_entries, standard_form_i, standard_form_iii, EtaForm,
    EtaNormalForm, StandardFormI,
};
pub use optimal::{
    build_omega_theta, optimal_tgcp, AttenuationSide, Candidate, OmegaTheta, OptimalMapResult,
};
