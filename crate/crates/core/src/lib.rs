//! Simulation of multi-stage quantum walks, QAOA and a reference annealing
//! integrator on Sherrington-Kirkpatrick spin-glass ground-state problems.

pub mod error;
pub mod experiment;
pub mod io;
pub mod model;
pub mod num;
pub mod propagate;
pub mod protocol;
pub mod state;

pub use error::{Error, Result};

pub use num_rational::BigRational;

pub type State = state::StateVector<f64>;
pub type State32 = state::StateVector<f32>;
pub type Unitary = state::DenseUnitary<f64>;
pub type Diagonal = model::DiagonalEnergies<f64>;
pub type Diagonal32 = model::DiagonalEnergies<f32>;
pub type GroundState = model::GroundStateRecord<f64>;
pub type Problem64 = experiment::Problem<f64>;
pub type Problem32 = experiment::Problem<f32>;
pub type Schedule = propagate::AnnealSchedule<f64>;
/// Schedule profile in exact rational arithmetic.
pub type ExactProfile = experiment::ScheduleProfile<BigRational>;
pub type Profile = experiment::ScheduleProfile<f64>;
