//! Monte-Carlo estimation of the fraction of local measurement settings for
//! which a pure qubit state produces a nonlocal behavior.

pub mod behavior;
pub mod error;
pub mod inequality;
pub mod lab;
pub mod par;
pub mod polytope;
pub mod sampling;
pub mod scenario;
pub mod simplex;
pub mod states;
pub mod volume;

pub use behavior::{Behavior, CorrelatorTable};
pub use error::{Error, Result};
pub use inequality::BellInequality;
pub use scenario::Scenario;
pub use states::StateVector;
pub use volume::{estimate_correlation_volume, estimate_curve, estimate_nonlocal_volume, VolumeEstimate};
