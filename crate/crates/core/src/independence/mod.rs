//! Independence predicates on commuting squares, effective squares, and a
//! bounded test harness for the axioms of a stable independence notion.

mod harness;
mod predicates;

pub use harness::{
    canonicity_compare, check_existence, check_invariance, check_symmetry, check_transitivity,
    check_uniqueness, check_witness_property, run_axiom_suite, Axiom, AxiomReport, Fragment,
    SpanEntry, SquareCatalog,
};
pub use predicates::{
    builtin_predicates, effective_square, negative_controls, predicate_by_name, IndependencePredicate,
};
