pub mod chebyshev;
pub mod convexity1d;
pub mod error;
pub mod extrema1d;
pub mod io;
pub mod lebesgue1d;
pub mod lebesgue2d;
pub mod maxima2d;
pub mod nodes1d;
pub mod nodes2d;
pub mod precision;
pub mod tables;

pub use error::{Error, Result};
pub use extrema1d::{IntervalMax, MaxSet, MaxSetOutcome};
pub use lebesgue1d::Lebesgue1D;
pub use lebesgue2d::CardinalEvaluator;
pub use maxima2d::{Boundary, CountReport, Counts, MaximaOptions, Method};
pub use nodes1d::{Family1D, NodeSet1D};
pub use nodes2d::{Family2D, NodeSet2D};
pub use precision::PrecisionContext;
