//! Covert transmission with transmit antenna selection and an external
//! jammer.
//!
//! A multi-antenna transmitter (Alice) sends to a single-antenna receiver
//! (Bob) while a single-antenna jammer masks the transmission from a passive
//! warden (Eve) running an energy detector. The crate provides
//!
//! * [`channel`]: geometry, Rayleigh fading, MRT and antenna selection,
//! * [`detection`]: the warden's false-alarm / missed-detection statistics,
//!   optimal threshold and a Monte Carlo detector,
//! * [`feasibility`]: the covertness constraint as an interval on the power
//!   split,
//! * [`rate`]: covert rates and the difference-of-concave split,
//! * [`solver`]: DC iteration (GNJ), boundary solution (FJ) and a grid
//!   oracle,
//! * [`experiment`]: seeded, fading-averaged sweeps and the verification
//!   suite behind the `covert` CLI.

pub mod channel;
pub mod detection;
pub mod error;
pub mod experiment;
pub mod feasibility;
pub mod golden;
pub mod rate;
pub mod solver;

pub use error::{Error, Result};
