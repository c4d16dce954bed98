//! Reference engines for tests: a dense statevector, an independent
//! boolean-row stabilizer tableau, and exhaustive Pauli searches.
//! Nothing on a production path calls into this module.

pub mod brute;
pub mod chp;
pub mod dense;

pub use brute::{brute_force_distance, brute_force_logical_pairs, brute_force_summary, BruteSummary};
pub use chp::ChpTableau;
pub use dense::{stabilizer_to_dense, DenseState};
