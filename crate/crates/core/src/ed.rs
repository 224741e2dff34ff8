//! Brute-force exact diagonalization used to cross-check every closed form.
//!
//! Everything here is numeric and independent of the analytic RG results:
//! ground spaces come from dense eigensolves, reduced density matrices from
//! explicit partial traces, and measures from the general-purpose routines.
//! Degenerate ground spaces are compared through projector overlaps, never
//! vector-by-vector, since the eigensolver's basis within a degenerate
//! eigenspace is arbitrary.

use crate::error::{Error, Result};
use crate::flow::CouplingState;
use crate::hamiltonian::{
    block_ground_state, build_block_hamiltonian, build_chain_hamiltonian, total_sz_diagonal,
    Boundary, GroundPartner,
};
use crate::linalg::{eigh_symmetric, reduced_density_from_state, DenseMatrix};
use crate::measures::{entanglement_of_formation, entropy_of_density, wootters_concurrence};
use crate::scalar::Scalar;

/// Relative width of the eigenvalue cluster treated as one ground space.
const CLUSTER_THRESHOLD: f64 = 1e-9;

/// Ground-space summary of a dense symmetric eigensolve.
#[derive(Clone, Debug)]
pub struct EdResult<F> {
    energy: F,
    vectors: Vec<Vec<F>>,
    residual: F,
}

impl<F: Scalar> EdResult<F> {
    /// Lowest eigenvalue.
    pub fn energy(&self) -> F {
        self.energy
    }

    /// Number of eigenvalues within the clustering threshold of the lowest.
    pub fn degeneracy(&self) -> usize {
        self.vectors.len()
    }

    /// Orthonormal basis of the ground space.
    pub fn vectors(&self) -> &[Vec<F>] {
        &self.vectors
    }

    /// Largest ‖Hv − λv‖₂ over the ground-space basis.
    pub fn residual(&self) -> F {
        self.residual
    }

    /// ‖Π|ψ⟩‖² for the projector Π onto the ground space.
    pub fn overlap_weight(&self, state: &[F]) -> F {
        let mut weight = F::zero();
        for v in &self.vectors {
            let dot = v
                .iter()
                .zip(state.iter())
                .fold(F::zero(), |acc, (a, b)| acc + *a * *b);
            weight = weight + dot * dot;
        }
        weight
    }
}

/// Diagonalizes a real symmetric matrix and clusters the bottom of the
/// spectrum into a ground space with residual bookkeeping.
pub fn ed_ground<F: Scalar>(h: &DenseMatrix<F>) -> Result<EdResult<F>> {
    let eig = eigh_symmetric(h)?;
    let energy = eig.eigenvalues[0];
    let width = F::of(CLUSTER_THRESHOLD).max(F::epsilon() * F::of(64.0))
        * F::one().max(energy.abs());
    let degeneracy = eig
        .eigenvalues
        .iter()
        .take_while(|lambda| **lambda <= energy + width)
        .count();

    let mut vectors = Vec::with_capacity(degeneracy);
    let mut residual = F::zero();
    for k in 0..degeneracy {
        let v = eig.eigenvectors.column(k);
        let hv = h.apply(&v);
        let lambda = eig.eigenvalues[k];
        let r = hv
            .iter()
            .zip(v.iter())
            .map(|(hv_i, v_i)| {
                let d = *hv_i - lambda * *v_i;
                d * d
            })
            .sum::<F>()
            .sqrt();
        residual = residual.max(r);
        vectors.push(v);
    }
    Ok(EdResult {
        energy,
        vectors,
        residual,
    })
}

/// Confirms the analytic block ground doublet against ED: returns the worst
/// overlap deficit 1 − ‖Π|φ₀⟩‖² over both doublet partners.
pub fn verify_block_ground_state<F: Scalar>(delta: F) -> Result<F> {
    let coupling = CouplingState::new(F::one(), delta)?;
    let ed = ed_ground(&build_block_hamiltonian(coupling))?;
    if ed.degeneracy() != 2 {
        return Err(Error::UnexpectedDegeneracy {
            got: ed.degeneracy(),
            expected: 2,
        });
    }
    let mut deficit = F::zero();
    for partner in [GroundPartner::SzPlus, GroundPartner::SzMinus] {
        let state = block_ground_state(delta, partner)?;
        let d = F::one() - ed.overlap_weight(state.amplitudes());
        deficit = deficit.max(d);
    }
    Ok(deficit)
}

/// Brute-force entanglement measures of a short chain's ground state.
#[derive(Clone, Debug)]
pub struct ChainMeasures<F> {
    pub n_sites: usize,
    pub boundary: Boundary,
    pub delta: F,
    pub energy: F,
    pub degeneracy: usize,
    /// Von Neumann entropy of the kept-site reduced density matrix.
    pub entropy: F,
    /// Wootters concurrence; present only for two kept sites.
    pub concurrence: Option<F>,
    /// Entanglement of formation; present only for two kept sites.
    pub formation: Option<F>,
}

const SUPPORTED_CHAINS: [usize; 3] = [3, 6, 9];

/// Diagonalizes an N ∈ {3, 6, 9} chain at J = 1, picks the ground vector
/// (for degenerate ground spaces, the one in the total-Sᶻ = +1/2 sector),
/// reduces onto `keep` (1-based, strictly increasing), and evaluates the
/// entanglement measures numerically.
pub fn chain_measures_exact<F: Scalar>(
    n_sites: usize,
    delta: F,
    boundary: Boundary,
    keep: &[usize],
) -> Result<ChainMeasures<F>> {
    if !SUPPORTED_CHAINS.contains(&n_sites) {
        return Err(Error::SiteCountOutOfRange(n_sites, 3, 9));
    }
    let coupling = CouplingState::new(F::one(), delta)?;
    let h = build_chain_hamiltonian(n_sites, coupling, boundary)?;
    let ed = ed_ground(&h)?;
    let state = ground_sector_vector(&ed, n_sites)?;

    let rho = reduced_density_from_state(&state, n_sites, keep)?;
    let entropy = entropy_of_density(&rho)?;
    let (concurrence, formation) = if keep.len() == 2 {
        let c = wootters_concurrence(&rho)?;
        (Some(c), Some(entanglement_of_formation(c)?))
    } else {
        (None, None)
    };
    Ok(ChainMeasures {
        n_sites,
        boundary,
        delta,
        energy: ed.energy(),
        degeneracy: ed.degeneracy(),
        entropy,
        concurrence,
        formation,
    })
}

/// For a unique ground state, that vector; otherwise the normalized
/// projection of the ground space onto the total-Sᶻ = +1/2 sector.
fn ground_sector_vector<F: Scalar>(ed: &EdResult<F>, n_sites: usize) -> Result<Vec<F>> {
    if ed.degeneracy() == 1 {
        return Ok(ed.vectors()[0].clone());
    }
    let sz = total_sz_diagonal::<F>(n_sites);
    let target = F::of(0.5);
    let tol = F::of(1e-9);
    let mut best: Option<(F, Vec<F>)> = None;
    for v in ed.vectors() {
        let projected: Vec<F> = v
            .iter()
            .zip(sz.iter())
            .map(|(a, s)| if (*s - target).abs() < tol { *a } else { F::zero() })
            .collect();
        let norm_sq = projected.iter().map(|x| *x * *x).sum::<F>();
        if best.as_ref().map_or(true, |(w, _)| norm_sq > *w) {
            best = Some((norm_sq, projected));
        }
    }
    let (weight, mut vector) = best.expect("degenerate space is non-empty");
    if weight < F::of(1e-12) {
        return Err(Error::MissingSzSector(1));
    }
    let norm = weight.sqrt();
    for x in &mut vector {
        *x = *x / norm;
    }
    Ok(vector)
}
