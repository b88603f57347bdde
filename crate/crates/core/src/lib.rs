//! Generalized Chebyshev centers, ball-intersection certificates, the
//! equal-radius ball relocation construction, and best n-nets for finite
//! point sets in finite-dimensional normed spaces.

pub mod centers;
pub mod equalizer;
pub mod error;
pub mod experiments;
pub mod feasibility;
pub mod io;
pub mod nnets;
pub mod space;

mod direct_search;
mod ellipsoid;
mod lp;
mod minimax;
mod projection;

pub use centers::{
    chebyshev_center, chebyshev_center_capped, eval_radius, pairwise_lower_bound, Aggregator,
    CenterMethod, CenterResult, PointSet,
};
pub use equalizer::{equalize, separate, EqualizeResult, EqualizeStep, Separation, StepCase};
pub use error::{Error, Result};
pub use experiments::{build_truncation, radius_sweep, SweepRecord, SweepResult, Truncation};
pub use feasibility::{
    duality_check, intersect, linear_extent, linear_extent_bounds, Ball, Direction, ExtentBounds,
    FeasibilityCertificate, FeasibilityStatus,
};
pub use nnets::{best_nnet_exact, best_nnet_heuristic, covering_radius, NNetResult};
pub use space::{Functional, NormKind, NormSpec};
