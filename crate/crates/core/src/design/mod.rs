//! Frequency-domain design of iPD controllers.
//!
//! The procedure runs in three stages:
//!
//! 1. **α bound** ([`alpha`]): α is chosen an order of magnitude above the
//!    peak of the inner open loop (1/α)·G/(1 − z⁻¹)·Dⁿ, so that the inner
//!    closed loop collapses to (1/α)·G/(1 − z⁻¹). Four rules are available,
//!    the exact supremum and its plant-magnitude upper bound for n = 1 and
//!    n = 2.
//! 2. **Stability set** ([`module`], [`phase`], [`region`]): with α fixed,
//!    the module condition |iPD·G| < 1 becomes an ellipse in the
//!    (Kp·Ts, Kd) plane evaluated at the phase crossover ω₀ of
//!    G/(C + (1 − C)z⁻¹), and the phase condition ∠(iPD·G) > −π becomes a
//!    straight line evaluated at ω₀/2. Simplified variants replace |G(ω₀)|
//!    by max|G| (conservative) or |G(ω₁)| (permissive), and replace the
//!    line by the plant-free half-plane 2(Kd + 1) > −Kp·Ts·(2C − 1).
//! 3. **Verification and selection** ([`region`], [`search`]): every grid
//!    point is checked against the true closed-loop poles, and the stable
//!    ones are ranked by a simulated performance criterion.

pub mod alpha;
pub mod export;
pub mod module;
pub mod phase;
pub mod region;
pub mod search;

pub use alpha::{alpha_bound, alpha_bound_sweep, alpha_rules, AlphaBound, AlphaRule};
pub use module::{
    module_bounds, module_ellipse, simplified_module_bound, Ellipse, ModuleBound, ModuleContext,
    ModuleConditionTerms,
};
pub use phase::{
    phase_crossover, phase_line, phase_line_terms, simplified_phase_line, unwrapped_phase,
    LineSide, PhaseLine, PhaseLineTerms, SimplifiedPhaseLine,
};
pub use region::{build_region, verify_stable, GridPoint, PhaseConditionKind, RegionSpec, StabilityRegion};
pub use search::{best_config_search, criteria, search_configs, Criterion, SearchResult, SimSpec};
