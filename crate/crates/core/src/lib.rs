//! Real-space renormalization group for the spin-1/2 XXZ chain.
//!
//! Three-site blocks are projected onto their degenerate ground doublet,
//! mapping the chain onto itself with renormalized couplings
//! J′ = J(2q/(2+q²))² and Δ′ = Δq²/4, where q = −(Δ+√(Δ²+8))/2. The crate
//! provides:
//!
//! - the coupling flow, its fixed points, and the correlation-length
//!   exponent ν = ln 3 / ln(5/3) ([`flow`]);
//! - block Hamiltonians, ground doublets, and the embedding/projection
//!   machinery behind the effective-Hamiltonian identity ([`hamiltonian`]);
//! - block entanglement: end-site concurrence, entanglement of formation,
//!   and middle-site von Neumann entropy, in closed form and via general
//!   Wootters/spectral routines ([`measures`]);
//! - finite-size scaling of the measure derivatives, whose minima deepen as
//!   N^θ with θ ≈ 1/ν ([`scaling`]);
//! - a quantum-group variant with boundary fields that pin the anisotropy,
//!   so only the energy scale flows on the critical line ([`qg`]);
//! - dense exact diagonalization as an independent oracle for all of the
//!   above ([`ed`]), on top of a small Jacobi-based linear-algebra kernel
//!   ([`linalg`]).
//!
//! Everything numeric is generic over the floating-point [`Scalar`]
//! (`f64`/`f32`); the crate root exposes `f64` aliases for the common
//! types, which is what the CLI and most callers want.

pub mod ed;
pub mod error;
pub mod flow;
pub mod hamiltonian;
pub mod linalg;
pub mod measures;
pub mod qg;
pub mod scalar;
pub mod scaling;

pub use error::{Error, Result};
pub use flow::{FixedPoint, HaltReason};
pub use hamiltonian::{Axis, Boundary, GroundPartner};
pub use measures::Measure;
pub use qg::QgRegion;
pub use scalar::Scalar;
pub use scaling::FitMode;

/// `f64` dense symmetric matrix.
pub type Matrix = linalg::DenseMatrix<f64>;
/// `f64` eigendecomposition.
pub type Eigen = linalg::EigenDecomposition<f64>;
/// `f64` coupling pair (J, Δ).
pub type Coupling = flow::CouplingState<f64>;
/// `f64` recorded RG flow.
pub type Trajectory = flow::RgTrajectory<f64>;
/// `f64` fixed-point classification entry.
pub type FixedPointSummary = flow::FixedPointReport<f64>;
/// `f64` analytic block ground state.
pub type GroundState = hamiltonian::BlockGroundState<f64>;
/// `f64` block-doublet projector.
pub type BlockProjector = hamiltonian::Projector<f64>;
/// `f64` per-step entanglement report.
pub type Report = measures::EntanglementReport<f64>;
/// `f64` sampled derivative curve.
pub type Curve = scaling::DerivativeCurve<f64>;
/// `f64` power-law fit result.
pub type Fit = scaling::ScalingFit<f64>;
/// `f64` fitted-vs-analytic ν comparison.
pub type NuCheck = scaling::NuCrossCheck<f64>;
/// `f64` quantum-group coupling (J, q, Δ).
pub type QgParams = qg::QgCoupling<f64>;
/// `f64` quantum-group block Hamiltonian.
pub type QgBlock = qg::QgBlockHamiltonian<f64>;
/// `f64` quantum-group ground state.
pub type QgState = qg::QgGroundState<f64>;
/// `f64` ED ground-space summary.
pub type GroundSpace = ed::EdResult<f64>;
/// `f64` brute-force chain measures.
pub type ExactMeasures = ed::ChainMeasures<f64>;
