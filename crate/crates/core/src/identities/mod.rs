//! The relation catalog and its verifier.
//!
//! Relations are data: `catalog.json` holds each identity as two
//! expressions in the shared grammar plus the domain it is checked on.
//! Where a literal transcription does not hold, the catalog keeps it next
//! to the corrected record (`superseded_by` / `corrects`), and only the
//! corrected one is required to pass.

mod basis;
mod catalog;
mod verify;

pub use basis::{basis_cumulative, basis_list, completeness, BasisFunction, Completeness};
pub use catalog::{catalog, Catalog, Domain, Group, Relation, RelationSummary, Section};
pub use verify::{check_weight, Outcome, Point, PointResult, Summary, VerificationReport, Verifier};
