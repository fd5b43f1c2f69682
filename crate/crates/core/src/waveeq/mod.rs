//! Dirac and Klein-Gordon equations: residual evaluators, slice Hamiltonians,
//! time integrators and the bundle-picture Dirac evolution.

mod bundle;
mod dirac;
mod evolution;
mod kg;

pub use bundle::{
    bundle_diracian, bundle_slashed_potential, conventional_diracian, conventional_slashed_potential,
    evolve_dirac_bundle, frame_weighted_norm,
};
pub use dirac::{
    dirac_hamiltonian, dirac_residual, evolve_dirac, evolve_dirac_field, free_dirac_energy, free_spinor,
    DiracHamiltonian,
};
pub use evolution::{
    ConstantHamiltonian, Evolved, Propagator, Scheme, SchrodingerHamiltonian, SliceHamiltonian,
};
pub use kg::{
    kg5_operator, kg5_residual, kg_charge, kg_gauge_charge, kg_leapfrog, kg_march, kg_operator, kg_reduce_5, kg_residual,
    kg_two_component_propagator, kg_two_component_state, kg_two_component_step, split_two_component, KgTwoComponent,
};
