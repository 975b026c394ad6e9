//! Quantum Carnot engine built from a single particle in a one-dimensional infinite
//! square well.
//!
//! The working medium is a population vector over box eigenlevels. Adiabatic strokes
//! freeze the populations; isothermal strokes hold the expectation energy fixed by
//! moving weight up (or down) the level ladder. A sudden expansion redistributes the
//! populations over the wider well while conserving the expectation energy.
//!
//! Everything numerical is generic over [`Real`] (`f32` or `f64`); the `*64` and `*32`
//! aliases below fix the scalar type.

pub mod boxmodel;
pub mod cycle;
mod error;
pub mod processes;
pub mod quadrature;
mod real;
pub mod sudden;

pub use boxmodel::{eigenenergy, eigenfunction_value, entropy, expectation_energy, wall_force, MixedState, WellParams};
pub use cycle::{enclosed_work, CarnotSpec, Cycle, CycleReport, CycleSample};
pub use error::{Error, Result};
pub use processes::{isothermal_state_at, ProcessSample, Stroke, StrokeKind};
pub use quadrature::{integrate, QuadOptions, Quadrature};
pub use real::{CompensatedSum, Real};
pub use sudden::{
    cosine_series, overlap_coefficient, post_expansion_distribution, post_expansion_distribution_with_budget,
    post_expansion_weights, verify_energy_identity, verify_energy_identity_with_budget, ExpansionRatio, TruncationReport,
    DEFAULT_DISTRIBUTION_BUDGET, DEFAULT_TERM_BUDGET,
};

pub type WellParams64 = WellParams<f64>;
pub type MixedState64 = MixedState<f64>;
pub type Stroke64 = Stroke<f64>;
pub type ProcessSample64 = ProcessSample<f64>;
pub type CarnotSpec64 = CarnotSpec<f64>;
pub type Cycle64 = Cycle<f64>;
pub type CycleReport64 = CycleReport<f64>;
pub type CycleSample64 = CycleSample<f64>;
pub type ExpansionRatio64 = ExpansionRatio<f64>;
pub type TruncationReport64 = TruncationReport<f64>;

pub type WellParams32 = WellParams<f32>;
pub type MixedState32 = MixedState<f32>;
pub type Stroke32 = Stroke<f32>;
pub type CarnotSpec32 = CarnotSpec<f32>;
pub type Cycle32 = Cycle<f32>;
pub type CycleReport32 = CycleReport<f32>;
