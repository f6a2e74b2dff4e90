//! Exact computations with step graphons and kernels.
//!
//! Part sizes and kernel values are exact rationals throughout. The crate
//! evaluates homomorphism densities, perturbation expansions, spectra and
//! cut norms, builds the colorings and kernels used to study k-common
//! graphs, and samples finite graphs and colorings from step graphons.

pub mod battery;
pub mod cli;
pub mod constructions;
pub mod cutnorm;
pub mod error;
pub mod graph;
pub mod homcount;
pub mod homdensity;
pub mod independence;
pub mod kernel;
pub mod rational;
pub mod sampler;
pub mod spectral;

pub use error::{Error, Result};
pub use graph::SimpleGraph;
pub use homdensity::DeficitPolynomial;
pub use kernel::{ColoringTemplate, PartWeighting, StepKernel};
pub use rational::Q;
pub use spectral::SpectralDecomposition;
