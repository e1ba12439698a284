//! Comparisons across regimes and parameters: Blackwell order, the welfare
//! table over the four transparency regimes, and parameter sweeps.

pub mod blackwell;
pub mod emit;
pub mod figure;
pub mod sweep;

pub use blackwell::{blackwell_compare, compare_by_posterior, BlackwellVerdict, Relation};
pub use figure::{transparency_table, Effect, Sign, TransparencyTable};
pub use sweep::{linspace, sweep, Axis, PointSummary, SweepPoint, SweepResult, Trend};
