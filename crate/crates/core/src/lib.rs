//! Forecasting engine for U.S. House midterm elections.
//!
//! Four published academic models are reproduced on top of a small OLS
//! engine:
//!
//! - [`models::generic_ballot_forecast`]: September generic-ballot margin,
//!   president's party and Republican seat exposure.
//! - [`simulation::run_simulations`]: national House vote from early generic
//!   polls, then a uniform-swing Monte Carlo over all 435 districts.
//! - [`models::structure_x_forecast`]: income growth, presidential approval
//!   and a midterm penalty, blended with an expert seats-in-play count.
//! - [`models::seats_in_trouble_forecast`]: expert ratings reduced to net
//!   seats in play.
//!
//! Fixtures are loaded through [`dataset::Dataset`]; [`forecast::run_forecast`]
//! turns a request into the [`forecast::OutputDocument`] that both the CLI and
//! the HTTP service emit.

pub mod dataset;
pub mod distributions;
pub mod forecast;
pub mod ingest;
pub mod linalg;
pub mod models;
pub mod polls;
pub mod regression;
pub mod simulation;

pub use dataset::{Dataset, Manifest};
pub use forecast::{run_forecast, ForecastError, ForecastRequest, OutputDocument};
pub use ingest::{
    DistrictRecord, GenericBallotPoll, HistoricalElection, IngestError, Party, SeatRating,
};
pub use models::{ForecastInputs, InTroubleDefinition, ModelError, ModelId, SeatForecast};
pub use regression::{fit_ols, RegressionError, RegressionFit};
pub use simulation::{SimulationConfig, SimulationResult};
