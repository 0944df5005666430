//! Secrecy capacity of the Gaussian wiretap channel with a multi-antenna
//! transmitter, a single-antenna receiver and a multi-antenna eavesdropper.
//!
//! The numerical core ([`geig`], [`capacity`], the closed forms in
//! [`ensembles`] and the per-realization rates in [`fading`]) is generic over
//! [`Real`], so it runs in `f32` or `f64`. Monte Carlo drivers, file IO and
//! the CSV experiment runners are `f64` only. The aliases at the crate root
//! name the `f64` instantiations.

pub mod capacity;
pub mod ensembles;
pub mod error;
pub mod experiments;
pub mod fading;
pub mod geig;
pub mod io;
pub mod scalar;
pub mod stats;

pub use error::{Error, Result};
pub use scalar::{CMatrix, CVector, Real};

pub type HermitianMatrix = geig::HermitianMatrix<f64>;
pub type GeigResult = geig::GeigResult<f64>;
pub type ChannelRealization = capacity::ChannelRealization<f64>;
pub type CapacityReport = capacity::CapacityReport<f64>;
pub type NoiseCorrelation = capacity::NoiseCorrelation<f64>;
pub type AsymptoteReport = capacity::AsymptoteReport<f64>;
pub type ComplexVector = CVector<f64>;
pub type ComplexMatrix = CMatrix<f64>;

pub type HermitianMatrix32 = geig::HermitianMatrix<f32>;
pub type ChannelRealization32 = capacity::ChannelRealization<f32>;
