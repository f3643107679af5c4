//! Instance generators: random experiment instances, the one-in-three 3SAT
//! reduction, the clustering gap family and the non-tree cycle scheme.

mod cycle;
mod gap;
mod random;
mod reduction;
mod sat;

pub use cycle::{cycle_instance, cycle_scheme};
pub use gap::{clustering_revenue, gap_clustering_schedule, gap_instance};
pub use random::{random_instance, random_instance_stream, trial_rng};
pub use reduction::{
    gadget_instance, reduction_instance, verify_reduction, verify_reduction_with, Family, HelpfulBundle, ReductionInstance,
    ReductionLayout, ReductionParams, VerifyMode, VerifyReport, Violation,
};
pub use sat::{all_formulas, OneInThreeSat};
