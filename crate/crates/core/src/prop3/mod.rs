//! Cut-dependent contraction certificates on a single link model.
//!
//! The loops are split into cells by their trit-strings across the LHS
//! min-cuts, an indicator table records which cell tuples minimally cover a
//! bridge, and a map from LHS to RHS trit-strings is checked against it.

mod certificate;
mod indicator;
mod partition;

pub use certificate::{
    check_inequality_direct, check_prop3_certificate, derive_rhs_assignment, CertificateReport, Prop3Map,
    RhsCutReport, TupleCoverage, TupleViolation, MAX_EXHAUSTIVE_LOOPS, MAX_EXHAUSTIVE_TERMS,
};
pub use indicator::{compute_oracular_indicator, CellTuple, Credit, IndicatorEntry, LemmaViolation, OracularIndicatorTable};
pub use partition::{build_trit_partition, TritPartition};
