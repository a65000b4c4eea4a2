//! The full verification of the five-letter construction.

mod checks;
pub mod construction;
mod report;

pub use checks::{
    c1_classes, c_members_up_to, coded_class_records, fact_record, family_record, forbidden_records, full_report,
    letter_gap_bound, literal_record, marker_record, table_records, threshold_record, underlying_class_records,
    verify_family, FamilyWitness, VerifyConfig,
};
pub use construction::{build_t, build_t01203, build_t01240323, build_t0324, build_t23, Construction, Family, TWord};
pub use report::{CheckRecord, Clock, NoClock, Status, VerificationReport};
