//! Discrete-time traffic simulator and DDoS defense engine.
//!
//! Traffic from legal and attacking sources feeds a two-tier FIFO buffer at
//! the server's interface module. Three detectors watch the buffer and the
//! sliding traffic averages; once one fires, per-source rates are measured,
//! suspects are filtered and purged from the buffer, and the buffer is
//! watched until it drains back to its normal tier.
//!
//! ```no_run
//! use ddos_sim::{config::ScenarioConfig, harness::run_simulation};
//!
//! let out = run_simulation(&ScenarioConfig::simulation_two()).unwrap();
//! println!("{:?}", out.metrics);
//! ```

pub mod config;
pub mod defense;
pub mod error;
pub mod harness;
pub mod interface;
pub mod stats;
pub mod traffic;

pub use config::ScenarioConfig;
pub use error::{Error, Result};
