//! Clustering in scale-free hidden-variable random graphs.
//!
//! Vertices carry power-law hidden variables `h`; two vertices are joined with
//! probability `r(h h' / h_s^2)` where `r(u) = u f(u)` and `f` is a connection
//! kernel. The crate evaluates the average and local clustering of these graphs
//! analytically ([`analytic`], [`lerch`]) and by simulation ([`graphgen`],
//! [`clustering`], [`simulate`]).

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod clustering;
pub mod error;
pub mod graph;
pub mod graphgen;
pub mod grid;
pub mod kernels;
pub mod lerch;
pub mod powerlaw;
pub mod quadrature;
pub mod seeding;
pub mod simulate;
pub mod stats;

pub use analytic::{
    a_factor, c_ab_h, c_average, c_bounds, c_max_closed, envelope_c, expected_degree, g_factor,
    local_clustering_analytic, local_clustering_finite_size, persistence_approx, persistence_threshold_n,
    AnalyticResult, Bounds,
};
pub use clustering::{count_triangles, local_clustering, report, ClusteringReport, HBinSpec};
pub use error::{Error, Result};
pub use graph::Graph;
pub use graphgen::{generate_fast, generate_naive, GeneratorKind};
pub use kernels::{validate_fclass, FClassReport, Kernel, KernelId};
pub use lerch::{c_maxrandom_closed, lerch_phi, table2_terms, LerchParams, Table2Row};
pub use powerlaw::{CutoffScheme, PowerLawModel};
pub use quadrature::{AnalyticConfig, Estimate};
pub use stats::RunningStats;
