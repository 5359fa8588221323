//! Quantifier-free finite model theory: formulas, types, the order
//! property, bounded coheir independence, indiscernible extraction and
//! axiomatization by forbidden substructures.

mod forking;
mod formula;
mod indiscernibles;
mod order;
mod structure;
mod tarski;
mod types;

pub use forking::{check_forking_properties, is_independent, ForkingConfig, ForkingReport, PropertyResult};
pub use indiscernibles::{extract_indiscernibles, EXHAUSTIVE_CAP, RAMSEY_CAP};
pub use formula::{eval, Node, QFFormula, Term};
pub use order::{order_property_any, order_property_witness, Pattern, SequenceWitness, TUPLE_CAP};
pub use structure::{FinStructure, Relation};
pub use tarski::{canonical_form, satisfies, universal_class_axiomatize, Axiomatization, Family, StructureSpace, SIZE_CAP};
pub use types::{count_types, cut_types_demo, qf_type, QFType, Slot};
