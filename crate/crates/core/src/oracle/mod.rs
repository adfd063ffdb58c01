//! Ground truth and analysis tools: exact covers, matchings, the hypothetical
//! peeling process and the sandwich audit.

pub mod exact;
pub mod hypothetical;
pub mod matching;
pub mod sandwich;

pub use exact::{exact_min_vc, exact_min_vc_with_limit, DEFAULT_EXACT_LIMIT};
pub use hypothetical::{
    bipartite_base, hypothetical_process, hypothetical_size_bound, per_iteration_bound_holds,
    HypotheticalPhase, HypotheticalTrace,
};
pub use matching::{greedy_maximal_matching, matching_endpoints, two_approx_cover};
pub use sandwich::{sandwich_audit, PhaseVerdict, SandwichReport, Side, Violation};
