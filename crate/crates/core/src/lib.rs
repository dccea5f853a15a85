//! Progressive coordinate minimization (PCM) for stochastic convex
//! optimization over boxes.

pub mod config;
pub mod controller;
pub mod dataset_io;
pub mod error;
pub mod experiment;
pub mod metrics;
pub mod objectives;
pub mod oracle;
pub mod rng;
pub mod routines;
pub mod scd;

pub use error::{Error, Result};
