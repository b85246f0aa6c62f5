//! Reference states with exact analytic oracles, and homodyne-data samplers.

mod ghz;
mod lo;
mod sample_set;
mod twin_beam;

pub use ghz::{fock_density, ghz_overlap_theory, BeamSetting, GhzExperiment};
pub use lo::{draw_lo, sample_lo_general};
pub use sample_set::{
    sample_ghz, sample_twin_beam, sidecar_path, SampleData, SampleSet, StateDescriptor, TwoModeRecord,
};
pub use twin_beam::{twin_beam_variance, TwinBeamState};
