//! Simulation engine for intense spatio-spectral twin beams generated by
//! parametric down-conversion in the pump-depletion regime.
//!
//! The beam is decomposed into independent mode triplets (one signal, one
//! idler and one pump mode). Each triplet follows a linearized quantum model
//! around the classical depletion solution, where a mixing weight `gamma`
//! switches on the terms that build coherent signal and idler components.
//! Whole-beam observables, spectral correlations and the interference
//! patterns of sum-frequency generation and of a Hong-Ou-Mandel
//! interferometer are assembled from the per-triplet Gaussian states.

pub mod constants;
pub mod dynamics;
pub mod error;
pub mod experiment;
pub mod features;
pub mod fock;
pub mod grid;
pub mod interference;
pub mod ode;
pub mod schmidt;
pub mod special;
pub mod statistics;
pub mod twinbeam;

pub use dynamics::{ClassicalTrajectory, EvolutionMatrices, QuadratureTransfer, TripletParams};
pub use error::{Error, Result};
pub use grid::{FrequencyGrid, TimeGrid};
pub use schmidt::{
    FrequencyGridConfig, PumpConfig, PumpModeSet, SchmidtBasis, SchmidtConfig, SchmidtSpectrum, SpectralModeSet,
    TransverseWeights,
};
pub use statistics::{Field, GaussianTripletState, Pair, TripletObservables};
pub use twinbeam::{BeamSummary, FieldSummary, TwinBeamState};
