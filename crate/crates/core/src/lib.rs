//! Computational kernel for finitely presented marked strict ∞-categories.
//!
//! Cells of a free ∞-category are kept in Steiner canonical form: a directed
//! chain complex with a distinguished basis carries the presentation, and an
//! arrow is a double table of non-negative chains. Equality of arrows is then
//! table comparison, composition is chain arithmetic, and the Gray tensor
//! product, join and suspension are boundary-formula constructions on the
//! basis. On top of that live markings with their closure operator, the lax
//! and pseudo tensor products of marked categories, the named cofibration /
//! equation / saturation gadgets, finite-model homotopy checks (inverses,
//! prefibrancy, coinductive invertibility, 2-out-of-6, equivalences), the
//! truncation functors, and the orientals / stratified nerve bridge.

pub mod cell;
pub mod chain;
pub mod complex;
pub mod join;
pub mod marking;
pub mod monoidal;
pub mod polygraph;
pub mod tensor;

mod error;

pub use cell::CellTable;
pub use chain::{Chain, Coeff};
pub use complex::{DirComplex, GenId, ValidityReport};
pub use error::{Error, Result};
pub use marking::{MarkLevel, MarkResult, Marked, MarkedCat, Marking, MarkingCmp};
pub use polygraph::{PolyMorphism, Polygraph};
