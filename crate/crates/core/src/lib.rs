//! Finite-model-theory workbench for partial orders.
//!
//! * [`poset`]: finite posets, lexicographic sums and the other
//!   constructions, canonical forms and automorphisms.
//! * [`logic`]: first-order formulas over one binary relation, evaluation,
//!   relativization and definable substructures.
//! * [`fld`]: lexicographic decompositions with rooted blocks and the
//!   formulas that define them.
//! * [`ef`]: Ehrenfeucht–Fraïssé games.
//! * [`classes`]: structure classes and bounded closures under sums,
//!   rooted sums, disjoint unions and products.
//! * [`verify`]: exhaustive and sampled property suites.

pub mod poset;

pub use poset::{CanonicalForm, FinitePoset, PartialMap, PosetError};
pub mod logic;
pub mod fld;
pub mod ef;
pub mod classes;
pub mod verify;

pub use logic::{Formula, FormulaError};
