//! Commensurated subsets of `ℤ`-type spaces, the length functions they
//! induce, the pairs-space commensurating action, half-restricted wreath
//! products, and uniform-commensuration diagnostics for partitioned powers.

mod half;
mod partition;
mod pw;
mod subset;

pub use half::{FreeDirection, HalfRestrictedElement, HalfRestrictedModel, SheetSpec};
pub use partition::{
    dyadic_partition, reports_show_window_growth, uniform_commensuration_check,
    CommensurationReport, GeneratorReport, WindowedPartition,
};
pub use pw::{CommAction, PwContext, PwPair, YPoint};
pub use subset::{DiffPoints, Tail, ZSubset};

use thiserror::Error;

use crate::wreath::WreathError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CommError {
    #[error("tail behaviour is undetermined: {0}")]
    TailUndetermined(String),
    #[error("symmetric difference is infinite; the subset is not commensurated by this element")]
    InfiniteDifference,
    #[error("uniform commensuration violated: {0}")]
    CommensurationViolated(String),
    #[error(transparent)]
    Wreath(#[from] WreathError),
}
