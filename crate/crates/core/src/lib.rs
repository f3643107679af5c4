//! Revenue-maximizing attribute hiding for single-item second-price auctions
//! whose item is drawn from a known distribution over attribute
//! instantiations.
//!
//! The seller may hide attributes before bidding. Each hiding scheme is a set
//! of disjoint natural bundles; this crate evaluates schemes, finds the best
//! tree-structured scheme, bounds the optimum with a linear relaxation,
//! searches for the exact optimum on small instances and generates the
//! instances used to study all of these.

pub mod attribute;
pub mod error;
pub mod exact;
pub mod experiment;
pub mod gadgets;
pub mod instance;
pub mod matching;
pub mod relax;
pub mod scheme;
pub mod table;
pub mod tree;

pub use attribute::{AttributeSpec, Instantiation, NaturalBundle, Slot};
pub use error::{Error, Result};
pub use exact::{brute_force_optimum, exact_optimum, ExactSolution, SearchStatus, DEFAULT_NODE_BUDGET};
pub use experiment::{run_experiment, ExperimentRow, ExperimentSetup};
pub use instance::{approx_eq, approx_ge, ProblemInstance, REL_TOL};
pub use matching::matching_gain;
pub use relax::{build_program, prune_variables, solve_relaxation, upper_bound_revenue, LinearProgram};
pub use scheme::{scheme_gain, scheme_revenue, validate_scheme, HidingScheme, SchemeViolation};
pub use table::GainTable;
pub use tree::{hm_count, tree_dp, TreeSolution};
