//! Spontaneous emission of a two-level atom in front of a sinusoidally
//! oscillating mirror: excited-state dynamics, photon-mode populations and
//! the filtered emission spectrum.

pub mod emission;
pub mod error;
pub mod mirror_math;
pub mod populations;
pub mod runner;
pub mod scenario;
pub mod spectrum;

pub use error::{ConfigError, Error, Result};
pub use scenario::{AmplitudeTrace, FrequencyGrid, ScenarioParams, TimeGrid};
