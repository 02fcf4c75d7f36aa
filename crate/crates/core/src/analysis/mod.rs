//! Channel simulation and quantitative analysis of the scheme.

pub mod audit;
pub mod capacity;
pub mod channel;
pub mod cost;
pub mod montecarlo;

pub use audit::{audit_substitutions, AuditReport};
pub use capacity::{solve_capacity, solve_capacity_as_printed, CapacityParams, CapacityResult};
pub use channel::{derive_seed, inject_in_place, inject_substitutions, ChannelMode, ChannelRng, ChannelSpec};
pub use cost::{code_rate, cost_curve, synthesis_cost, CostRow};
pub use montecarlo::{monte_carlo_decode, McRow, SimulationOptions};
