//! XXZ chain and three-site block Hamiltonians, the degenerate block ground
//! pair, the two-column RG projector, and renormalized single-site operators.
//!
//! Basis convention used everywhere: site 1 is the most significant bit of
//! the basis index and spin-up is bit value 0, so for three sites the index
//! `0b010 = 2` is the state `|↑↓↑⟩`.

use crate::error::{Error, Result};
use crate::flow::{q_of_delta, CouplingState};
use crate::linalg::{kron, DenseMatrix};
use crate::scalar::Scalar;

pub const MIN_CHAIN_SITES: usize = 2;
pub const MAX_CHAIN_SITES: usize = 12;

/// Chain closure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Boundary {
    Open,
    Periodic,
}

/// Pauli axis of a single-site operator. The `Y` axis is represented by the
/// real matrix iσʸ (see [`pauli_y_real`]); renormalization factors are
/// unaffected because both sides of ξ·σ' carry the same factor of i.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

/// Position of a site inside the three-site block.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockSite {
    First,
    Middle,
    Last,
}

impl BlockSite {
    fn index(self) -> usize {
        match self {
            BlockSite::First => 0,
            BlockSite::Middle => 1,
            BlockSite::Last => 2,
        }
    }

    pub const ALL: [BlockSite; 3] = [BlockSite::First, BlockSite::Middle, BlockSite::Last];
}

pub fn pauli_x<F: Scalar>() -> DenseMatrix<F> {
    DenseMatrix::from_rows(&[&[F::zero(), F::one()], &[F::one(), F::zero()]])
}

/// The real matrix iσʸ = [[0, 1], [-1, 0]]. σʸ itself is imaginary; every
/// use in this crate pairs two factors of it (σʸσʸ bonds, the spin-flip in
/// the concurrence), so the i's cancel and real arithmetic suffices.
pub fn pauli_y_real<F: Scalar>() -> DenseMatrix<F> {
    DenseMatrix::from_rows(&[&[F::zero(), F::one()], &[-F::one(), F::zero()]])
}

pub fn pauli_z<F: Scalar>() -> DenseMatrix<F> {
    DenseMatrix::from_rows(&[&[F::one(), F::zero()], &[F::zero(), -F::one()]])
}

/// σᶻ eigenvalue (+1 for ↑) of `site` (1-based) in basis state `index`.
fn spin_sign(index: usize, site: usize, n_sites: usize) -> i32 {
    if (index >> (n_sites - site)) & 1 == 0 {
        1
    } else {
        -1
    }
}

/// XXZ Hamiltonian on `n_sites` spins:
///
/// ```text
/// H = (J/4) Σ_bonds [ σˣᵢσˣⱼ + σʸᵢσʸⱼ + Δ σᶻᵢσᶻⱼ ]
/// ```
///
/// Bonds are (i, i+1) for i < N, plus (N, 1) when periodic. The periodic
/// closure is literal, so N = 2 periodic carries the single bond twice.
pub fn build_chain_hamiltonian<F: Scalar>(
    n_sites: usize,
    coupling: CouplingState<F>,
    boundary: Boundary,
) -> Result<DenseMatrix<F>> {
    if !(MIN_CHAIN_SITES..=MAX_CHAIN_SITES).contains(&n_sites) {
        return Err(Error::SiteCountOutOfRange(
            n_sites,
            MIN_CHAIN_SITES,
            MAX_CHAIN_SITES,
        ));
    }
    let dim = 1usize << n_sites;
    let j4 = coupling.j() / F::of(4.0);
    let zz = j4 * coupling.delta();
    let flip = coupling.j() / F::of(2.0);

    let mut bonds: Vec<(usize, usize)> = (1..n_sites).map(|i| (i, i + 1)).collect();
    if boundary == Boundary::Periodic {
        bonds.push((n_sites, 1));
    }

    let mut h = DenseMatrix::zeros(dim, dim);
    for b in 0..dim {
        for &(i, j) in &bonds {
            let si = spin_sign(b, i, n_sites);
            let sj = spin_sign(b, j, n_sites);
            h.add_at(b, b, zz * F::of((si * sj) as f64));
            if si != sj {
                // (σˣσˣ + σʸσʸ)/2 exchanges anti-aligned spins.
                let flipped = b ^ (1 << (n_sites - i)) ^ (1 << (n_sites - j));
                h.add_at(b, flipped, flip);
            }
        }
    }
    Ok(h)
}

/// The 8×8 three-site block Hamiltonian: the N = 3 open chain.
pub fn build_block_hamiltonian<F: Scalar>(coupling: CouplingState<F>) -> DenseMatrix<F> {
    build_chain_hamiltonian(3, coupling, Boundary::Open)
        .expect("three sites is always a valid chain")
}

/// Ground energy of the block: e₀ = -(J/4)(Δ + √(Δ²+8)) = (J/2)·q(Δ).
pub fn block_ground_energy<F: Scalar>(coupling: CouplingState<F>) -> F {
    let delta = coupling.delta();
    -(coupling.j() / F::of(4.0)) * (delta + (delta * delta + F::of(8.0)).sqrt())
}

/// Which of the two degenerate block ground states: the Sᶻ = +1/2 sector
/// state |φ₀⟩ or its spin-flip partner |φ₀'⟩ in the Sᶻ = -1/2 sector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroundPartner {
    SzPlus,
    SzMinus,
}

/// One of the two degenerate three-site ground states,
///
/// ```text
/// |φ₀⟩  = (|↑↑↓⟩ + q|↑↓↑⟩ + |↓↑↑⟩) / √(2+q²)
/// |φ₀'⟩ = (|↑↓↓⟩ + q|↓↑↓⟩ + |↓↓↑⟩) / √(2+q²)
/// ```
///
/// stored as amplitudes over the full 8-state basis.
#[derive(Clone, Debug)]
pub struct BlockGroundState<F> {
    amplitudes: [F; 8],
    partner: GroundPartner,
    q: F,
}

impl<F: Scalar> BlockGroundState<F> {
    pub fn amplitudes(&self) -> &[F; 8] {
        &self.amplitudes
    }

    pub fn partner(&self) -> GroundPartner {
        self.partner
    }

    /// The ground-state parameter q(Δ) the amplitudes were built from.
    pub fn q(&self) -> F {
        self.q
    }
}

/// Builds the analytic block ground state for anisotropy `delta`.
pub fn block_ground_state<F: Scalar>(
    delta: F,
    partner: GroundPartner,
) -> Result<BlockGroundState<F>> {
    let q = q_of_delta(delta)?;
    let norm = (F::of(2.0) + q * q).sqrt();
    let outer = norm.recip();
    let middle = q / norm;
    let mut amplitudes = [F::zero(); 8];
    match partner {
        GroundPartner::SzPlus => {
            amplitudes[0b001] = outer; // |↑↑↓⟩
            amplitudes[0b010] = middle; // |↑↓↑⟩
            amplitudes[0b100] = outer; // |↓↑↑⟩
        }
        GroundPartner::SzMinus => {
            amplitudes[0b011] = outer; // |↑↓↓⟩
            amplitudes[0b101] = middle; // |↓↑↓⟩
            amplitudes[0b110] = outer; // |↓↓↑⟩
        }
    }
    Ok(BlockGroundState {
        amplitudes,
        partner,
        q,
    })
}

/// The 8×2 projector onto the two kept block states: column 0 is |φ₀⟩
/// (renamed |⇑⟩), column 1 is |φ₀'⟩ (renamed |⇓⟩).
#[derive(Clone, Debug)]
pub struct Projector<F> {
    matrix: DenseMatrix<F>,
    q: F,
}

impl<F: Scalar> Projector<F> {
    pub fn matrix(&self) -> &DenseMatrix<F> {
        &self.matrix
    }

    pub fn q(&self) -> F {
        self.q
    }
}

pub fn build_projector<F: Scalar>(delta: F) -> Result<Projector<F>> {
    let up = block_ground_state(delta, GroundPartner::SzPlus)?;
    let down = block_ground_state(delta, GroundPartner::SzMinus)?;
    let mut matrix = DenseMatrix::zeros(8, 2);
    for i in 0..8 {
        matrix.set(i, 0, up.amplitudes()[i]);
        matrix.set(i, 1, down.amplitudes()[i]);
    }
    Ok(Projector {
        matrix,
        q: up.q(),
    })
}

/// Embeds a single-site 2×2 operator at `site` of the three-site block.
pub fn embed_block_operator<F: Scalar>(op: &DenseMatrix<F>, site: BlockSite) -> DenseMatrix<F> {
    let id = DenseMatrix::identity(2);
    let factor = |k: usize| if k == site.index() { op } else { &id };
    let left = kron(factor(0), factor(1)).expect("8x8 is within the dimension cap");
    kron(&left, factor(2)).expect("8x8 is within the dimension cap")
}

/// Projects a single-site Pauli operator into the kept block basis:
/// Pᵀ σᵅᵢ P = ξᵢᵅ σ'ᵅ, returned as the full 2×2 (Y in the iσʸ convention).
pub fn renormalize_operator<F: Scalar>(
    projector: &Projector<F>,
    site: BlockSite,
    axis: Axis,
) -> DenseMatrix<F> {
    let op = match axis {
        Axis::X => pauli_x(),
        Axis::Y => pauli_y_real(),
        Axis::Z => pauli_z(),
    };
    let embedded = embed_block_operator(&op, site);
    let p = projector.matrix();
    p.transpose().matmul(&embedded).matmul(p)
}

/// Extracts the scalar ξ from a renormalized operator: the (0,1) entry for
/// X and Y (whose images are ξ·σ'ˣ and ξ·iσ'ʸ), the (0,0) entry for Z.
pub fn renormalization_factor<F: Scalar>(renormalized: &DenseMatrix<F>, axis: Axis) -> F {
    match axis {
        Axis::X | Axis::Y => renormalized.at(0, 1),
        Axis::Z => renormalized.at(0, 0),
    }
}

/// Closed forms of the renormalization factors:
///
/// ```text
/// ξ₁ˣʸ = ξ₃ˣʸ = 2q/(2+q²)     ξ₂ˣʸ = 2/(2+q²)
/// ξ₁ᶻ  = ξ₃ᶻ  = q²/(2+q²)     ξ₂ᶻ  = (2-q²)/(2+q²)
/// ```
pub fn xi_closed_form<F: Scalar>(delta: F, site: BlockSite, axis: Axis) -> Result<F> {
    let q = q_of_delta(delta)?;
    let norm2 = F::of(2.0) + q * q;
    Ok(match (site, axis) {
        (BlockSite::First | BlockSite::Last, Axis::X | Axis::Y) => F::of(2.0) * q / norm2,
        (BlockSite::First | BlockSite::Last, Axis::Z) => q * q / norm2,
        (BlockSite::Middle, Axis::X | Axis::Y) => F::of(2.0) / norm2,
        (BlockSite::Middle, Axis::Z) => (F::of(2.0) - q * q) / norm2,
    })
}

/// Numerically projects the six-site (two-block) open chain into the kept
/// 4-dimensional basis: (P⊗P)ᵀ H₆ (P⊗P).
///
/// Equals 2e₀·I plus the two-site XXZ Hamiltonian at the renormalized
/// couplings of one RG step — the statement that the coarse-grained chain is
/// again an XXZ chain.
pub fn two_block_effective_hamiltonian<F: Scalar>(
    coupling: CouplingState<F>,
) -> Result<DenseMatrix<F>> {
    let h6 = build_chain_hamiltonian(6, coupling, Boundary::Open)?;
    let p = build_projector(coupling.delta())?;
    let pp = kron(p.matrix(), p.matrix())?;
    Ok(pp.transpose().matmul(&h6).matmul(&pp))
}

/// Diagonal of the total spin-z operator Σᵢ σᶻᵢ/2 in the chain basis.
pub fn total_sz_diagonal<F: Scalar>(n_sites: usize) -> Vec<F> {
    let dim = 1usize << n_sites;
    (0..dim)
        .map(|b| {
            let ups = (0..n_sites).filter(|s| (b >> s) & 1 == 0).count() as f64;
            F::of((ups - (n_sites as f64 - ups)) / 2.0)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::rg_step;
    use crate::linalg::eigh_symmetric;

    fn coupling(j: f64, delta: f64) -> CouplingState<f64> {
        CouplingState::new(j, delta).unwrap()
    }

    #[test]
    fn two_site_singlet_energy() {
        let h = build_chain_hamiltonian(2, coupling(1.0, 1.0), Boundary::Open).unwrap();
        let eig = eigh_symmetric(&h).unwrap();
        assert!((eig.eigenvalues[0] + 0.75).abs() < 1e-12);
    }

    #[test]
    fn block_equals_three_site_open_chain() {
        let c = coupling(1.3, 0.7);
        let block = build_block_hamiltonian(c);
        let chain = build_chain_hamiltonian(3, c, Boundary::Open).unwrap();
        assert_eq!(block, chain);
    }

    #[test]
    fn block_ground_energy_examples() {
        let eig = eigh_symmetric(&build_block_hamiltonian(coupling(1.0, 1.0))).unwrap();
        assert!((eig.eigenvalues[0] + 1.0).abs() < 1e-12);
        assert!((eig.eigenvalues[1] + 1.0).abs() < 1e-12, "degeneracy 2");

        let eig0 = eigh_symmetric(&build_block_hamiltonian(coupling(1.0, 0.0))).unwrap();
        assert!((eig0.eigenvalues[0] + 8f64.sqrt() / 4.0).abs() < 1e-12);

        let eig2 = eigh_symmetric(&build_block_hamiltonian(coupling(2.0, 1.0))).unwrap();
        assert!((eig2.eigenvalues[0] + 2.0).abs() < 1e-12);

        assert_eq!(block_ground_energy(coupling(1.0, 1.0)), -1.0);
        assert!((block_ground_energy(coupling(2.0, 1.0)) + 2.0).abs() < 1e-15);
    }

    #[test]
    fn chain_commutes_with_total_sz() {
        for boundary in [Boundary::Open, Boundary::Periodic] {
            let h = build_chain_hamiltonian(4, coupling(0.9, 0.7), boundary).unwrap();
            let sz = total_sz_diagonal::<f64>(4);
            let mut worst = 0.0f64;
            for i in 0..16 {
                for j in 0..16 {
                    // [H, Sz]_ij = H_ij (sz_j - sz_i) for diagonal Sz.
                    worst = worst.max((h.at(i, j) * (sz[j] - sz[i])).abs());
                }
            }
            assert!(worst <= 1e-12, "{boundary:?}: {worst}");
        }
    }

    #[test]
    fn periodic_adds_closing_bond() {
        let c = coupling(1.0, 0.5);
        let open = build_chain_hamiltonian(4, c, Boundary::Open).unwrap();
        let periodic = build_chain_hamiltonian(4, c, Boundary::Periodic).unwrap();
        assert!(periodic.max_abs_diff(&open) > 0.1);
        // All-up diagonal: open has 3 aligned bonds, periodic 4.
        assert!((open.at(0, 0) - 3.0 * 0.5 / 4.0).abs() < 1e-15);
        assert!((periodic.at(0, 0) - 4.0 * 0.5 / 4.0).abs() < 1e-15);
    }

    #[test]
    fn site_count_validated() {
        assert!(matches!(
            build_chain_hamiltonian(1, coupling(1.0, 1.0), Boundary::Open),
            Err(Error::SiteCountOutOfRange(1, 2, 12))
        ));
        assert!(matches!(
            build_chain_hamiltonian(13, coupling(1.0, 1.0), Boundary::Open),
            Err(Error::SiteCountOutOfRange(13, 2, 12))
        ));
    }

    #[test]
    fn ground_state_amplitudes_at_isotropy() {
        let up = block_ground_state(1.0, GroundPartner::SzPlus).unwrap();
        let a = up.amplitudes();
        let r6 = 6f64.sqrt();
        assert!((a[0b001] - 1.0 / r6).abs() < 1e-15);
        assert!((a[0b010] + 2.0 / r6).abs() < 1e-15);
        assert!((a[0b100] - 1.0 / r6).abs() < 1e-15);
        assert_eq!(a.iter().filter(|x| **x != 0.0).count(), 3);

        let norm2: f64 = a.iter().map(|x| x * x).sum();
        assert!((norm2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn partner_lives_in_opposite_sector() {
        let down = block_ground_state(0.3, GroundPartner::SzMinus).unwrap();
        let sz = total_sz_diagonal::<f64>(3);
        for (i, amp) in down.amplitudes().iter().enumerate() {
            if *amp != 0.0 {
                assert_eq!(sz[i], -0.5);
            }
        }
    }

    #[test]
    fn projector_columns_orthonormal() {
        for delta in [0.0, 0.4, 1.0, 2.3, 7.0] {
            let p = build_projector(delta).unwrap();
            let gram = p.matrix().transpose().matmul(p.matrix());
            assert!(gram.max_abs_diff(&DenseMatrix::identity(2)) < 1e-12, "{delta}");
        }
    }

    #[test]
    fn projector_columns_are_ground_eigenvectors() {
        for delta in [0.0, 0.5, 1.0, 2.5] {
            let c = coupling(1.0, delta);
            let h = build_block_hamiltonian(c);
            let e0 = block_ground_energy(c);
            let p = build_projector(delta).unwrap();
            for col in 0..2 {
                let v = p.matrix().column(col);
                let hv = h.apply(&v);
                let residual: f64 = hv
                    .iter()
                    .zip(&v)
                    .map(|(a, b)| (a - e0 * b) * (a - e0 * b))
                    .sum::<f64>()
                    .sqrt();
                assert!(residual <= 1e-10, "delta={delta} col={col}: {residual}");
            }
        }
    }

    #[test]
    fn renormalization_factors_match_closed_forms() {
        for delta in [0.0f64, 0.3, 1.0, 1.9, 4.2] {
            let p = build_projector(delta).unwrap();
            for site in BlockSite::ALL {
                for axis in [Axis::X, Axis::Y, Axis::Z] {
                    let m = renormalize_operator(&p, site, axis);
                    let xi = renormalization_factor(&m, axis);
                    let closed = xi_closed_form(delta, site, axis).unwrap();
                    assert!(
                        (xi - closed).abs() < 1e-12,
                        "delta={delta} {site:?} {axis:?}: {xi} vs {closed}"
                    );
                    // The remaining entries follow the Pauli pattern.
                    let expect = match axis {
                        Axis::X => DenseMatrix::from_rows(&[&[0.0, xi], &[xi, 0.0]]),
                        Axis::Y => DenseMatrix::from_rows(&[&[0.0, xi], &[-xi, 0.0]]),
                        Axis::Z => DenseMatrix::from_rows(&[&[xi, 0.0], &[0.0, -xi]]),
                    };
                    assert!(m.max_abs_diff(&expect) < 1e-12);
                }
            }
        }
    }

    #[test]
    fn isotropic_factors_hand_values() {
        let p = build_projector(1.0).unwrap();
        let x1 = renormalization_factor(&renormalize_operator(&p, BlockSite::First, Axis::X), Axis::X);
        assert!((x1 + 2.0f64 / 3.0).abs() < 1e-12);
        let z2 = renormalization_factor(&renormalize_operator(&p, BlockSite::Middle, Axis::Z), Axis::Z);
        assert!((z2 + 1.0f64 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn edge_factors_equal() {
        for delta in [0.0, 0.8, 1.0, 3.1] {
            for axis in [Axis::X, Axis::Y, Axis::Z] {
                let a = xi_closed_form(delta, BlockSite::First, axis).unwrap();
                let b = xi_closed_form(delta, BlockSite::Last, axis).unwrap();
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn projected_two_block_chain_is_xxz_again() {
        let c = coupling(1.0, 1.0);
        let effective = two_block_effective_hamiltonian(c).unwrap();
        let renormalized = rg_step(c);
        assert!((renormalized.j() - 4.0 / 9.0).abs() < 1e-15);
        let target = build_chain_hamiltonian(2, renormalized, Boundary::Open).unwrap();
        let shift = 2.0 * block_ground_energy(c);
        let mut residual = effective.clone();
        for i in 0..4 {
            residual.add_at(i, i, -shift);
        }
        assert!(residual.max_abs_diff(&target) < 1e-10);
    }
}
