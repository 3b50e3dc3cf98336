//! Frequency-hopping sequence sets over `Z_pq` built from Whiteman's
//! generalized cyclotomy, with exact Hamming correlation analysis and
//! independent checks of the closed-form correlation distribution.
//!
//! ```
//! use fhseq::{build_params, build_tables, build_partition, build_sequence_set, correlation_profile};
//!
//! let tables = build_tables(build_params(5, 17, None)?)?;
//! let set = build_sequence_set(&build_partition(&tables)?);
//! let profile = correlation_profile(&set)?;
//! assert_eq!(profile.a_a.to_string(), "473/21");
//! # Ok::<(), fhseq::Error>(())
//! ```

#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod construction;
pub mod correlation;
pub mod cyclotomy;
pub mod error;
pub mod export;
pub mod fraction;
pub mod modmath;
pub mod reference;
pub mod theory;

pub use construction::{
    build_partition, build_sequence_set, FHSequenceSet, LazySequenceSet, Partition,
};
pub use correlation::{
    average_bound_check, bounds_report, correlation_profile, hamming_correlation,
    lempel_greenberger_bound, peng_fan_check, BoundsReport, CorrelationProfile,
};
pub use cyclotomy::{
    build_params, build_tables, verify_structure_lemmas, CellId, CellLookup, CyclotomicTables,
    DlogCells, LemmaReport, Params,
};
pub use error::{Error, Result};
pub use fraction::Fraction;
pub use theory::{
    optimality_report, predict_auto, predict_averages, predict_cross, verify_theorem1,
    verify_theorem2, LabelMapping, OptimalityReport, TheoremPrediction, VerificationReport,
};
