//! Error-rate analysis of OFDM with index modulation (OFDM-IM).
//!
//! The crate builds the full set of legitimate OFDM-IM blocks for one
//! subcarrier group, evaluates union-bound average BLER/BER from exact
//! Craig-form pairwise error probabilities (and the two-exponential
//! approximation for comparison), and checks both against a seeded Monte
//! Carlo simulator with exhaustive ML detection.
//!
//! ```
//! use ofdmim::{build_codebook, union_bound, AnalyticMethod, PepConvention, SnrPoint, SystemConfig};
//!
//! let config = SystemConfig::new(4, 2, 2, 1.0, PepConvention::Standard).unwrap();
//! let codebook = build_codebook(config).unwrap();
//! assert_eq!(codebook.len(), 16);
//!
//! let bound = union_bound(&codebook, SnrPoint::from_db(20.0), AnalyticMethod::Craig).unwrap();
//! assert!(bound.ber <= bound.bler);
//! ```

pub mod analysis;
pub mod cli;
pub mod codebook;
pub mod error;
pub mod numerics;
pub mod simulator;

pub use analysis::{
    bit_errors, pair_deltas, pep_craig, pep_exponential, pep_quadrature, taus_of_pair, union_ber,
    union_bler, union_bound, AnalyticMethod, PairProfile, PepRoute, PepValue, SnrPoint, UnionBound,
};
pub use codebook::{build_codebook, Block, Codebook, PepConvention, Sap, SystemConfig};
pub use error::{Error, Result};
pub use numerics::QuadratureSpec;
pub use simulator::{monte_carlo, ErrorEstimate};
