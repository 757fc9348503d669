//! List-coloring reconfiguration on caterpillars and shortest-path
//! rerouting.
//!
//! [`caterpillar_dp`] decides reachability between two list colorings of a
//! caterpillar in polynomial time. [`oracle`] decides it on any small graph by
//! exhaustive search and serves as ground truth. [`reduction`] compiles
//! shortest-path rerouting ([`spr`]) into list-coloring reconfiguration on
//! bipartite graphs of pathwidth two.

pub mod caterpillar_dp;
pub mod driver;
pub mod encoding;
pub mod experiments;
pub mod generate;
pub mod graph;
pub mod instance;
pub mod io;
pub mod normalize;
pub mod oracle;
pub mod reduction;
pub mod spr;
