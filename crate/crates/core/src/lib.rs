//! A finite-scale workbench for categorical model theory.
//!
//! The crate is organised bottom-up:
//!
//! * [`cat`]: the abstract finite-category kernel and the hom-structure embedding.
//! * [`concrete`]: finite sets, graphs and `F_p`-spaces with explicit pushouts.
//! * [`amalgams`]: amalgams, joint connectedness, Galois types and universality.
//! * [`independence`]: independence predicates on squares and the axiom harness.
//! * [`exhaustion`]: construction categories and full diagrams.
//! * [`fo`]: quantifier-free finite model theory.
//!
//! Every search takes an explicit size bound, and every report says whether
//! the bound made the search exhaustive.

pub mod amalgams;
pub mod cat;
pub mod concrete;
pub mod error;
pub mod exhaustion;
pub mod fo;
pub mod independence;
pub mod report;

pub use error::{CatError, ExhaustError, FoError};
pub use report::{Check, OpReport, ReportDocument, Verdict};
