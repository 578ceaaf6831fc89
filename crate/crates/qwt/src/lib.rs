//! Coherent transport of a continuous-time quantum walk with a trapping
//! vertex, on complete, complete-bipartite, and star graphs.
//!
//! The walk Hamiltonian is the graph Laplacian plus a rank-1 anti-Hermitian
//! sink term `-iκ|w⟩⟨w|` at the trap vertex `w`. The transport efficiency η
//! (total probability ever absorbed at the trap) is computed two independent
//! ways:
//!
//! * **overlap**: build the Krylov subspace `span{H^k|w⟩}` by iterated
//!   application and re-orthogonalization, then η is the squared overlap of
//!   the initial state with that subspace ([`krylov`]);
//! * **dynamics**: evolve the full state under `exp(-iHt)` and integrate the
//!   trapped flux `2κ|⟨w|ψ(t)⟩|²` to convergence ([`dynamics`]).
//!
//! On top of that sit a catalog of closed-form efficiencies and explicit
//! Krylov bases for the three graph families ([`analytic`]), engineered edge
//! perturbations `λe^{iθ}` that raise η up to 1 ([`optimize`]), and the
//! complementary zero-efficiency (dark state) conditions ([`nulleff`]).

pub mod analytic;
pub mod cli;
pub mod dynamics;
pub mod graph;
pub mod hamiltonian;
pub mod krylov;
pub mod linalg;
pub mod nulleff;
pub mod optimize;

pub use graph::{FamilySpec, Graph, StarTrap, Vertex};
pub use hamiltonian::{InitialStateSpec, TransportProblem};
pub use krylov::KrylovBasis;
pub use linalg::{CVector, OperatorMatrix, C64};

/// Errors produced anywhere in the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid size: {0}")]
    Size(String),

    #[error("not an edge of the graph: ({0}, {1})")]
    Topology(Vertex, Vertex),

    #[error("vertex index {index} out of range for {n} vertices")]
    Index { index: Vertex, n: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid value: {0}")]
    Value(String),

    #[error("non-finite entry encountered in {0}")]
    NonFinite(&'static str),

    #[error("state norm {norm} outside tolerance of 1")]
    NormViolation { norm: f64 },

    #[error("horizon {horizon} reached without convergence (best estimate η = {best_eta})")]
    Horizon { best_eta: f64, horizon: f64, flux_tail: f64 },

    #[error("flux/survival bookkeeping disagree by {0} (integration fault)")]
    Bookkeeping(f64),

    #[error("scenario not in the closed-form catalog: {0}")]
    Uncataloged(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
