//! Intelligent PD controller built on an ultra-local model
//! y⁽ⁿ⁾ = F + α·u.
//!
//! [`IpdConfig`] holds the design parameters, [`ControllerState`] runs the
//! sampled control law, and the functions in [`loops`] give the equivalent
//! transfer functions used by the frequency-domain design.

mod config;
mod controller;
pub mod loops;

pub use config::{IpdConfig, Order};
pub use controller::{ControllerState, IpdController};
pub use loops::{
    closed_loop_tf, compensator_tf, filtered_derivative_tf, inner_loop_tf, ipd_open_loop_tf,
    pd_tf,
};
