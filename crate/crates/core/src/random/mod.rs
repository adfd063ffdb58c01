//! Random structures: balls into bins, induced matchings of random bipartite
//! graphs, and empirical checks of the two tail inequalities.

pub mod balls;
pub mod concentration;
pub mod induced_matching;

pub use balls::{assign_balls, expected_singletons, singletons_in, throw_balls, BallsBinsResult};
pub use concentration::{
    bounded_differences_bound, chernoff_bound, deviation_band, empirical_tail, StatReport,
    TailEstimate,
};
pub use induced_matching::{extract_induced_matching, verify_induced_matching, InducedMatchingResult};
