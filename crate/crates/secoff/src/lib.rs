//! Energy-optimal secure computation offloading over a multicarrier uplink.
//!
//! A set of mobile users must each finish a computation task within one time
//! block, either on their own CPU or by offloading bits to an edge server,
//! while an eavesdropper listens on every subcarrier. Offloaded traffic only
//! counts if it is delivered at a positive secrecy rate against the worst-case
//! eavesdropper channel, so the planner trades cubic local CPU energy against
//! transmit energy on the subcarriers it wins.
//!
//! The crate is organized as:
//!
//! * [`model`]: problem data (system, users, channels), allocations, energy
//!   and rate bookkeeping, feasibility checks.
//! * [`solver`]: Lagrangian dual solver. Closed-form per-user and
//!   per-subcarrier minimizers, a cutting-plane (ellipsoid) outer loop on the
//!   multipliers, and a primal repair pass that restores feasibility.
//! * [`oracle`]: slow reference solvers (exhaustive subcarrier assignment,
//!   golden-section search) used to validate the fast path.
//! * [`benchmarks`]: restricted schemes (full offloading, local computing
//!   only, no eavesdropper) solved through the same machinery.
//! * [`simkit`]: seeded Rayleigh-fading instance generation, Monte-Carlo
//!   sweeps, CSV output, and the command-line interface.

pub mod benchmarks;
pub mod model;
pub mod oracle;
pub mod simkit;
pub mod solver;

pub use benchmarks::SchemeId;
pub use model::{
    Allocation, ChannelSet, ConstraintReport, SolveReport, SolveStatus, SystemConfig, UserProfile,
};
pub use solver::{DualState, SolverOptions};
