//! Symmetric association schemes and their equitable partitions.
//!
//! The crate builds schemes (from relation matrices, distance-regular graphs
//! or named families), computes the spectral data of their Bose-Mesner
//! algebra, tests partitions for equitability and evaluates the classical
//! feasibility conditions: Lloyd's divisibility theorem, the projector
//! integrality condition `⟨F, E_j⟩ ∈ ℕ`, the identity `⟨F, E_j⟩ = dim(W_j H)`
//! for equitable partitions, and Higman's automorphism test.

pub mod codes;
pub mod error;
pub mod feasibility;
pub mod io;
pub mod matrix;
pub mod partition;
pub mod scheme;
pub mod spectra;

pub use codes::{is_completely_regular, search_completely_regular, CodeRecord, SearchOptions, SearchOutcome};
pub use error::{Error, Result};
pub use feasibility::{
    feasibility_report, godsil_condition, higman_condition, lloyd_check, subduced_multiplicities, trace_profile,
    verify_theorem2, FeasibilityReport, GodsilOutcome, HigmanOutcome, LloydOutcome, SchemeAutomorphism,
    Theorem2Outcome, Value, Verdict,
};
pub use matrix::{FloatMatrix, IntMatrix, Matrix, Polynomial, Rational, RationalMatrix, Scalar};
pub use partition::{
    commutes_with_scheme, distance_partition, is_equitable, make_partition, partition_projector, CountViolation,
    DistancePartition, EquitabilityResult, Partition,
};
pub use scheme::{named_scheme, verify_axioms, AssociationScheme, AxiomViolation, Family, LabeledGraph};
pub use spectra::{Mode, SpectralData, Spectrum, Tolerances};
