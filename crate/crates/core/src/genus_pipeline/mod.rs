//! Orders over semilocal localizations of ℤ: genus size, structural shortcuts and finite-level suites.

pub mod genus;
pub mod spec;
pub mod structure;
pub mod suites;

pub use genus::{
    genus_size, genus_size_with_budget, recheck, residue_genus_equal, DeltaImageCertificate, GenusReport, GenusVerdict,
    LocalComponent,
};
pub use spec::{OrderKind, OrderSpec};
pub use structure::{
    hereditary_tiled_check, idempotent_condition_check, pattern_is_hereditary, second_kind_check, IdempotentReport,
    SecondKindInput,
};
pub use suites::{cancellation_suite, springer_suite, CancellationReport, SpringerReport};
