//! Frequency-based design of intelligent PD (model-free) controllers.
//!
//! The crate covers the whole chain: discrete transfer-function algebra
//! ([`tf`]), the iPD law and its loop transfer functions ([`mfc`]), the
//! alpha bound and Kp–Kd stability-set construction ([`design`]),
//! closed-loop simulation with performance metrics ([`sim`]) and the two
//! reference plants ([`plants`]).

pub mod design;
pub mod error;
pub mod mfc;
pub mod plants;
pub mod registry;
pub mod sim;
pub mod tf;

pub use error::{Error, Result};
pub use mfc::{IpdConfig, Order};
pub use tf::{DiscreteTransferFunction, FrequencyGrid};
