//! Entanglement measures of the block ground state and their flow.
//!
//! From `|φ₀⟩` the reduced state of the two edge sites is
//!
//! ```text
//! ρ₁₃ = 1/(2+q²) · [[q², 0, 0, 0],
//!                   [0,  1, 1, 0],
//!                   [0,  1, 1, 0],
//!                   [0,  0, 0, 0]]
//! ```
//!
//! giving edge-pair concurrence C₁₃ = 2/(2+q²), and the middle site carries
//! ρ₂ = diag(2, q²)/(2+q²) with entropy H₂(2/(2+q²)). Replacing Δ by its
//! n-fold RG image turns these closed forms into finite-size curves.

use crate::error::{Error, Result};
use crate::flow::{effective_sites, flow_to_step, q_of_delta};
use crate::hamiltonian::{block_ground_state, pauli_y_real, GroundPartner};
use crate::linalg::{eigh_symmetric, kron, reduced_density_from_state, DenseMatrix};
use crate::scalar::{ln_2, Scalar};

/// Pure-state density matrix |φ₀⟩⟨φ₀| of the three-site block (8×8).
pub fn density_matrix<F: Scalar>(delta: F) -> Result<DenseMatrix<F>> {
    let state = block_ground_state(delta, GroundPartner::SzPlus)?;
    let a = state.amplitudes();
    let mut rho = DenseMatrix::zeros(8, 8);
    for i in 0..8 {
        for j in 0..8 {
            rho.set(i, j, a[i] * a[j]);
        }
    }
    Ok(rho)
}

/// Closed-form reduced density matrix of the edge pair (sites 1 and 3).
pub fn rho13_closed_form<F: Scalar>(delta: F) -> Result<DenseMatrix<F>> {
    let q = q_of_delta(delta)?;
    let w = (F::of(2.0) + q * q).recip();
    let mut rho = DenseMatrix::zeros(4, 4);
    rho.set(0, 0, q * q * w);
    rho.set(1, 1, w);
    rho.set(1, 2, w);
    rho.set(2, 1, w);
    rho.set(2, 2, w);
    Ok(rho)
}

/// Closed-form reduced density matrix of the middle site: diag(2, q²)/(2+q²).
pub fn site2_closed_form<F: Scalar>(delta: F) -> Result<DenseMatrix<F>> {
    let q = q_of_delta(delta)?;
    let w = (F::of(2.0) + q * q).recip();
    let mut rho = DenseMatrix::zeros(2, 2);
    rho.set(0, 0, F::of(2.0) * w);
    rho.set(1, 1, q * q * w);
    Ok(rho)
}

/// Edge-pair concurrence C₁₃(Δ) = 2/(2+q²), in (0, 1/2] and decreasing.
pub fn concurrence_closed_form<F: Scalar>(delta: F) -> Result<F> {
    let q = q_of_delta(delta)?;
    Ok(F::of(2.0) / (F::of(2.0) + q * q))
}

fn density_tolerance<F: Scalar>() -> F {
    F::of(1e-12).max(F::epsilon() * F::of(32.0))
}

/// Wootters concurrence of a real two-qubit density matrix.
///
/// Validates shape, symmetry, unit trace, and positive semidefiniteness,
/// then takes C = max(0, √μ₄−√μ₃−√μ₂−√μ₁) with μᵢ the eigenvalues of the
/// symmetric matrix √ρ·ρ̃·√ρ, where ρ̃ = (σʸ⊗σʸ)ρ(σʸ⊗σʸ) is the spin-flip.
pub fn wootters_concurrence<F: Scalar>(rho: &DenseMatrix<F>) -> Result<F> {
    if rho.rows() != 4 || rho.cols() != 4 {
        return Err(Error::DimensionMismatch {
            rows: rho.rows(),
            cols: rho.cols(),
            expected: "4x4 two-qubit density matrix".into(),
        });
    }
    rho.require_symmetric()?;
    let tol = density_tolerance::<F>();
    let trace_dev = (rho.trace() - F::one()).abs();
    if trace_dev > tol {
        return Err(Error::InvalidDensityMatrix(format!(
            "trace deviates from 1 by {:e}",
            trace_dev.to_f64().unwrap_or(f64::NAN)
        )));
    }

    let decomp = eigh_symmetric(rho)?;
    let min_eig = decomp.eigenvalues[0];
    if min_eig < -tol {
        return Err(Error::NotPositiveSemidefinite(
            min_eig.to_f64().unwrap_or(f64::NAN),
        ));
    }
    // √ρ from the decomposition already at hand, with tiny negatives clamped.
    let n = 4;
    let mut sqrt_rho = DenseMatrix::zeros(n, n);
    for (k, lambda) in decomp.eigenvalues.iter().enumerate() {
        let root = lambda.max(F::zero()).sqrt();
        for i in 0..n {
            for j in 0..n {
                sqrt_rho.add_at(
                    i,
                    j,
                    root * decomp.eigenvectors.at(i, k) * decomp.eigenvectors.at(j, k),
                );
            }
        }
    }

    // σʸ⊗σʸ up to an overall sign that cancels in ρ̃ = YρY.
    let iy = pauli_y_real::<F>();
    let yy = kron(&iy, &iy)?;
    let rho_tilde = yy.matmul(rho).matmul(&yy);
    let m = sqrt_rho.matmul(&rho_tilde).matmul(&sqrt_rho);
    let mu = eigh_symmetric(&m)?.eigenvalues;

    // Eigenvalues at roundoff scale relative to the largest are exact zeros
    // of the rank-deficient product; taking their square root would inflate
    // ~1e-17 noise into ~1e-9 error in C.
    let floor = F::of(64.0) * F::epsilon() * mu[3].max(F::zero());
    let root = |x: F| if x <= floor { F::zero() } else { x.sqrt() };
    let c = root(mu[3]) - root(mu[2]) - root(mu[1]) - root(mu[0]);
    Ok(c.max(F::zero()))
}

/// Binary (base-2) entropy H₂(p) with the 0·log 0 ≡ 0 convention; NaN
/// outside [0, 1].
pub fn binary_entropy<F: Scalar>(p: F) -> F {
    if p < F::zero() || p > F::one() || p.is_nan() {
        return F::nan();
    }
    if p == F::zero() || p == F::one() {
        return F::zero();
    }
    // ln(1-p) via ln_1p keeps the p → 0 tail accurate.
    -(p * p.ln() + (F::one() - p) * (-p).ln_1p()) / ln_2::<F>()
}

/// Entanglement of formation as a function of concurrence:
/// E₁ = H₂(y) with y = (1 − √(1−C²))/2, evaluated as C²/(2(1+√(1−C²)))
/// to avoid cancellation at small C.
pub fn entanglement_of_formation<F: Scalar>(concurrence: F) -> Result<F> {
    if concurrence.is_nan() || concurrence < F::zero() || concurrence > F::one() {
        return Err(Error::ConcurrenceOutOfRange(
            concurrence.to_f64().unwrap_or(f64::NAN),
        ));
    }
    if concurrence == F::zero() {
        return Ok(F::zero());
    }
    let s = ((F::one() - concurrence) * (F::one() + concurrence)).sqrt();
    let y = concurrence * concurrence / (F::of(2.0) * (F::one() + s));
    Ok(binary_entropy(y))
}

/// Middle-site von Neumann entropy E(Δ) = H₂(2/(2+q²)), in (0, 1].
pub fn entropy_site2<F: Scalar>(delta: F) -> Result<F> {
    Ok(binary_entropy(concurrence_closed_form(delta)?))
}

/// Von Neumann entropy (bits) of a density matrix, by full diagonalization.
pub fn entropy_of_density<F: Scalar>(rho: &DenseMatrix<F>) -> Result<F> {
    rho.require_symmetric()?;
    let tol = density_tolerance::<F>();
    let eig = eigh_symmetric(rho)?.eigenvalues;
    let mut sum = F::zero();
    for lambda in eig {
        if lambda < -tol {
            return Err(Error::NotPositiveSemidefinite(
                lambda.to_f64().unwrap_or(f64::NAN),
            ));
        }
        if lambda > F::zero() {
            sum = sum - lambda * lambda.ln();
        }
    }
    Ok(sum / ln_2::<F>())
}

/// Which entanglement measure a sweep or scaling run tracks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Measure {
    Concurrence,
    Entropy,
    Formation,
}

impl Measure {
    pub const ALL: [Measure; 3] = [Measure::Concurrence, Measure::Entropy, Measure::Formation];

    pub fn label(self) -> &'static str {
        match self {
            Measure::Concurrence => "concurrence",
            Measure::Entropy => "entropy",
            Measure::Formation => "eof",
        }
    }
}

/// Closed-form value of one measure at bare anisotropy `delta`.
pub fn measure_value<F: Scalar>(measure: Measure, delta: F) -> Result<F> {
    let c = concurrence_closed_form(delta)?;
    Ok(match measure {
        Measure::Concurrence => c,
        Measure::Entropy => binary_entropy(c),
        Measure::Formation => entanglement_of_formation(c)?,
    })
}

/// Analytic dC₁₃/dΔ: with p = 2/(2+q²), p' = -4 q q̇ /(2+q²)².
pub fn concurrence_derivative<F: Scalar>(delta: F) -> Result<F> {
    let q = q_of_delta(delta)?;
    let root = (delta * delta + F::of(8.0)).sqrt();
    let q_dot = -(F::one() + delta / root) / F::of(2.0);
    let norm2 = F::of(2.0) + q * q;
    Ok(-F::of(4.0) * q * q_dot / (norm2 * norm2))
}

/// Analytic dE/dΔ for the middle-site entropy: H₂'(p)·p' = log₂(q²/2)·p'.
pub fn entropy_derivative<F: Scalar>(delta: F) -> Result<F> {
    let q = q_of_delta(delta)?;
    let h2_prime = (q * q / F::of(2.0)).ln() / ln_2::<F>();
    Ok(h2_prime * concurrence_derivative(delta)?)
}

/// Analytic dE₁/dC = -(C/√(1−C²))·log₂(C/(1+√(1−C²))); zero at C = 0.
pub fn formation_derivative_in_c<F: Scalar>(concurrence: F) -> Result<F> {
    if concurrence.is_nan() || concurrence < F::zero() || concurrence > F::one() {
        return Err(Error::ConcurrenceOutOfRange(
            concurrence.to_f64().unwrap_or(f64::NAN),
        ));
    }
    if concurrence == F::zero() {
        return Ok(F::zero());
    }
    let s = ((F::one() - concurrence) * (F::one() + concurrence)).sqrt();
    let log_ratio = (concurrence / (F::one() + s)).ln() / ln_2::<F>();
    Ok(-(concurrence / s) * log_ratio)
}

/// Analytic derivative of one measure with respect to the local Δ.
pub fn measure_derivative<F: Scalar>(measure: Measure, delta: F) -> Result<F> {
    match measure {
        Measure::Concurrence => concurrence_derivative(delta),
        Measure::Entropy => entropy_derivative(delta),
        Measure::Formation => {
            let c = concurrence_closed_form(delta)?;
            Ok(formation_derivative_in_c(c)? * concurrence_derivative(delta)?)
        }
    }
}

/// Entanglement measures of a block after `rg_step` RG iterations.
#[derive(Clone, Copy, Debug)]
pub struct EntanglementReport<F> {
    /// Bare anisotropy the flow started from.
    pub delta: F,
    /// Number of RG iterations applied.
    pub rg_step: usize,
    /// Chain length the step-n block describes: 3^(n+1) sites.
    pub effective_sites: u128,
    /// The flowed anisotropy Δₙ the measures are evaluated at.
    pub delta_flowed: F,
    pub concurrence: F,
    pub formation: F,
    pub entropy: F,
}

/// Evaluates all measures at the n-fold RG image of `delta0`.
///
/// Saturated flows degrade gracefully: past the Ising overflow Δₙ = +∞ and
/// every measure is exactly zero.
pub fn renormalized_measures<F: Scalar>(delta0: F, n: usize) -> Result<EntanglementReport<F>> {
    q_of_delta(delta0)?;
    let flowed = flow_to_step(delta0, n);
    let concurrence = concurrence_closed_form(flowed)?;
    Ok(EntanglementReport {
        delta: delta0,
        rg_step: n,
        effective_sites: effective_sites(n),
        delta_flowed: flowed,
        concurrence,
        formation: entanglement_of_formation(concurrence)?,
        entropy: binary_entropy(concurrence),
    })
}

/// Brute-force reduced density matrix of the block ground state on a 1-based
/// site subset, for oracle comparisons against the closed forms.
pub fn reduced_block_density<F: Scalar>(delta: F, keep: &[usize]) -> Result<DenseMatrix<F>> {
    let state = block_ground_state(delta, GroundPartner::SzPlus)?;
    reduced_density_from_state(&state.amplitudes()[..], 3, keep)
}
