//! First-order formulas with partitioned free variables over finite
//! relational structures.

mod definable;
mod eval;
mod structure;
mod syntax;

pub use definable::{definable_family, formula_vc_dimension, DefinableFamily, FormulaDimension};
pub use eval::{evaluate, Evaluator};
pub use structure::{FiniteStructure, Relation};
pub use syntax::{parse_formula, parse_partition, Formula, PartitionedFormula};
