//! Coefficient functions, polynomial curves, and truncated series germs.

pub mod curve;
pub mod function;
pub mod poly;
pub mod series;

pub use curve::{shift_signed, Mode, MonicCurve};
pub use function::{Evaluation, Orientation, Piece, PiecewiseGermFunction};
pub use poly::{GenPoly, PowerTerm};
pub use series::{SeriesGerm, Side};
