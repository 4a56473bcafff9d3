//! Exact multiway Cheeger constants on small weighted graphs.

pub mod analysis;
pub mod cheeger;
pub mod combinatorics;
pub mod error;
pub mod generate;
pub mod graph;
pub mod io;
pub mod rational;
pub mod report;
pub mod spectra;
pub mod verify;

pub use cheeger::{
    beta_chain, cheeger_k, dirichlet_cheeger, dirichlet_k, forest_certificate, maxmin_cheeger, BetaChain,
    CertificateMethod, CheegerOptions, CheegerSolver, CheegerValue, ForestCertificate, Witness, WitnessKind,
};
pub use combinatorics::{
    common_union, enumerate_connected_subsets, enumerate_subpartitions, union_family, Subpartition, SubpartitionIter,
    UnionFamily, DEFAULT_BUDGET,
};
pub use error::{Error, Result};
pub use graph::{default_mu, CutProfile, Edge, VertexSet, WeightedGraph, MAX_VERTICES};
pub use rational::{parse_rational, Rational};
pub use spectra::{
    cheeger_inequality_audit, indicator_span_sup_check, laplacian_spectrum, one_lap_bracket, p_monotonicity_audit,
    rayleigh, rayleigh_l1_exact, subspace_intersection_check, sweep_round, sweep_round_exact, CheegerAudit,
    InequalityCheck, MonotonicityAudit, OneLapBracket, SpectrumReport, SweepResult,
};
