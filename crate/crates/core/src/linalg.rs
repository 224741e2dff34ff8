//! Dense real matrices and the small set of kernels the physics needs:
//! symmetric eigendecomposition (cyclic Jacobi), Kronecker products, PSD
//! square roots, and partial traces over qubit registers.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Largest operator dimension the crate will build (12 sites = 4096).
pub const DIMENSION_CAP: usize = 1 << 12;

/// Jacobi sweep limit before reporting non-convergence.
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Row-major dense real matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Scalar> DenseMatrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows >= 1 && cols >= 1, "matrix dimensions must be >= 1");
        Self {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    pub fn from_rows(rows: &[&[F]]) -> Self {
        let r = rows.len();
        let c = rows[0].len();
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            data.extend_from_slice(row);
        }
        Self { rows: r, cols: c, data }
    }

    /// Column vector from a slice.
    pub fn column_vector(v: &[F]) -> Self {
        Self {
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> F {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn add_at(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.cols + j] = self.data[i * self.cols + j] + v;
    }

    pub fn data(&self) -> &[F] {
        &self.data
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.at(i, j));
            }
        }
        out
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(
            self.cols, other.rows,
            "matmul shape mismatch: {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a == F::zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out.add_at(i, j, a * other.at(k, j));
                }
            }
        }
        out
    }

    pub fn scaled(&self, s: F) -> Self {
        let mut out = self.clone();
        for v in &mut out.data {
            *v = *v * s;
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (v, w) in out.data.iter_mut().zip(&other.data) {
            *v = *v + *w;
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scaled(-F::one()))
    }

    pub fn trace(&self) -> F {
        (0..self.rows.min(self.cols)).map(|i| self.at(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> F {
        self.data.iter().map(|v| *v * *v).sum::<F>().sqrt()
    }

    pub fn max_abs(&self) -> F {
        self.data
            .iter()
            .fold(F::zero(), |acc, v| acc.max(v.abs()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> F {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .fold(F::zero(), |acc, (a, b)| acc.max((*a - *b).abs()))
    }

    /// Largest symmetry violation |A[i,j] - A[j,i]|.
    pub fn asymmetry(&self) -> F {
        let mut worst = F::zero();
        for i in 0..self.rows {
            for j in (i + 1)..self.cols.min(self.rows) {
                worst = worst.max((self.at(i, j) - self.at(j, i)).abs());
            }
        }
        worst
    }

    pub fn require_symmetric(&self) -> Result<()> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                rows: self.rows,
                cols: self.cols,
                expected: "square".into(),
            });
        }
        let tol = symmetry_tolerance::<F>() * F::one().max(self.max_abs());
        for i in 0..self.rows {
            for j in (i + 1)..self.rows {
                let dev = (self.at(i, j) - self.at(j, i)).abs();
                if dev > tol {
                    return Err(Error::NotSymmetric {
                        i,
                        j,
                        deviation: dev.to_f64().unwrap_or(f64::NAN),
                    });
                }
            }
        }
        Ok(())
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len());
        let mut out = vec![F::zero(); self.rows];
        for i in 0..self.rows {
            let mut acc = F::zero();
            for j in 0..self.cols {
                acc = acc + self.at(i, j) * v[j];
            }
            out[i] = acc;
        }
        out
    }

    pub fn column(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self.at(i, j)).collect()
    }
}

/// Symmetry tolerance: 1e-12 at f64 precision, scaled up for coarser scalars.
fn symmetry_tolerance<F: Scalar>() -> F {
    F::of(1e-12).max(F::epsilon() * F::of(32.0))
}

/// Eigendecomposition of a real symmetric matrix.
#[derive(Debug, Clone)]
pub struct EigenDecomposition<F> {
    /// Ascending eigenvalues.
    pub eigenvalues: Vec<F>,
    /// Orthonormal eigenvectors, column i pairing with eigenvalue i.
    pub eigenvectors: DenseMatrix<F>,
}

/// Full eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Convergence: the off-diagonal Frobenius norm must drop below
/// `~1e-14 * ||A||_F` (epsilon-scaled for non-f64 scalars) within
/// [`JACOBI_MAX_SWEEPS`] sweeps. Annihilated entries are set to exact zeros.
pub fn eigh_symmetric<F: Scalar>(matrix: &DenseMatrix<F>) -> Result<EigenDecomposition<F>> {
    matrix.require_symmetric()?;
    let n = matrix.rows();
    if n > DIMENSION_CAP {
        return Err(Error::DimensionTooLarge(n, DIMENSION_CAP));
    }

    let mut a = matrix.data.clone();
    // Eigenvectors accumulated as rows (V^T) so rotations touch contiguous
    // memory; transposed once at the end.
    let mut vt = vec![F::zero(); n * n];
    for i in 0..n {
        vt[i * n + i] = F::one();
    }
    let norm = matrix.frobenius_norm();
    let threshold = jacobi_threshold::<F>() * norm;

    if n == 1 || norm == F::zero() {
        return Ok(sorted_decomposition(n, &a, &vt));
    }

    let mut converged = false;
    for sweep in 0..JACOBI_MAX_SWEEPS {
        let off = off_diagonal_norm(n, &a);
        if off <= threshold {
            converged = true;
            break;
        }
        // Early sweeps skip rotations on entries far below the mean
        // off-diagonal magnitude; avoids wasting O(n) work on negligible
        // elements while the big ones dominate.
        let gate = if sweep < 3 {
            F::of(0.2) * off / F::of((n * n) as f64)
        } else {
            F::zero()
        };
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(n, &mut a, &mut vt, p, q, gate);
            }
        }
    }

    if !converged {
        let off = off_diagonal_norm(n, &a);
        if off > threshold {
            return Err(Error::EigNotConverged {
                sweeps: JACOBI_MAX_SWEEPS,
                off_norm: off.to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    Ok(sorted_decomposition(n, &a, &vt))
}

fn jacobi_threshold<F: Scalar>() -> F {
    F::of(1e-14).max(F::epsilon() * F::of(64.0))
}

fn off_diagonal_norm<F: Scalar>(n: usize, a: &[F]) -> F {
    let mut sum = F::zero();
    for i in 0..n {
        for j in (i + 1)..n {
            let x = a[i * n + j];
            sum = sum + (x * x + x * x);
        }
    }
    sum.sqrt()
}

/// One cyclic-Jacobi visit to (p, q): annihilates A[p,q] unless it is already
/// negligible, updating A (symmetric) and the accumulated V^T rows in place.
fn rotate<F: Scalar>(n: usize, a: &mut [F], vt: &mut [F], p: usize, q: usize, gate: F) {
    let apq = a[p * n + q];
    if apq == F::zero() {
        return;
    }
    let app = a[p * n + p];
    let aqq = a[q * n + q];

    // Entries that can no longer affect the diagonal at working precision are
    // flushed to zero without a rotation.
    let negligible = F::epsilon() * (app.abs() + aqq.abs());
    if apq.abs() <= negligible || apq.abs() < gate {
        if apq.abs() <= negligible {
            a[p * n + q] = F::zero();
            a[q * n + p] = F::zero();
        }
        return;
    }

    let theta = (aqq - app) / (F::of(2.0) * apq);
    // t = sgn(theta) / (|theta| + sqrt(theta^2 + 1)), guarding theta^2 overflow.
    let t = if theta.abs() > F::of(1e20) {
        (F::of(2.0) * theta).recip()
    } else {
        let sign = if theta >= F::zero() { F::one() } else { -F::one() };
        sign / (theta.abs() + (theta * theta + F::one()).sqrt())
    };
    let c = (t * t + F::one()).sqrt().recip();
    let s = t * c;
    let tau = s / (F::one() + c);

    a[p * n + p] = app - t * apq;
    a[q * n + q] = aqq + t * apq;
    a[p * n + q] = F::zero();
    a[q * n + p] = F::zero();

    // Update rows p and q of A contiguously, then mirror into the columns.
    let (head, tail) = a.split_at_mut(q * n);
    let row_p = &mut head[p * n..p * n + n];
    let row_q = &mut tail[..n];
    for (k, (ap, aq)) in row_p.iter_mut().zip(row_q.iter_mut()).enumerate() {
        if k == p || k == q {
            continue;
        }
        let akp = *ap;
        let akq = *aq;
        *ap = akp - s * (akq + tau * akp);
        *aq = akq + s * (akp - tau * akq);
    }
    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        a[k * n + p] = a[p * n + k];
        a[k * n + q] = a[q * n + k];
    }

    let (head, tail) = vt.split_at_mut(q * n);
    let vp = &mut head[p * n..p * n + n];
    let vq = &mut tail[..n];
    for (x, y) in vp.iter_mut().zip(vq.iter_mut()) {
        let xp = *x;
        let xq = *y;
        *x = xp - s * (xq + tau * xp);
        *y = xq + s * (xp - tau * xq);
    }
}

fn sorted_decomposition<F: Scalar>(n: usize, a: &[F], vt: &[F]) -> EigenDecomposition<F> {
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[i * n + i]
            .partial_cmp(&a[j * n + j])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let eigenvalues = order.iter().map(|&i| a[i * n + i]).collect();
    let mut eigenvectors = DenseMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        for k in 0..n {
            eigenvectors.set(k, dst, vt[src * n + k]);
        }
    }
    EigenDecomposition {
        eigenvalues,
        eigenvectors,
    }
}

/// Kronecker product, ordering the first factor as the most significant
/// (leftmost) subsystem.
pub fn kron<F: Scalar>(a: &DenseMatrix<F>, b: &DenseMatrix<F>) -> Result<DenseMatrix<F>> {
    let rows = a.rows() * b.rows();
    let cols = a.cols() * b.cols();
    if rows > DIMENSION_CAP || cols > DIMENSION_CAP {
        return Err(Error::DimensionTooLarge(rows.max(cols), DIMENSION_CAP));
    }
    let mut out = DenseMatrix::zeros(rows, cols);
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let aij = a.at(i, j);
            if aij == F::zero() {
                continue;
            }
            for k in 0..b.rows() {
                for l in 0..b.cols() {
                    out.set(i * b.rows() + k, j * b.cols() + l, aij * b.at(k, l));
                }
            }
        }
    }
    Ok(out)
}

/// Symmetric positive-semidefinite square root.
///
/// Eigenvalues in `[-1e-10, 0)` are clamped to zero; anything more negative is
/// rejected.
pub fn sqrt_psd<F: Scalar>(matrix: &DenseMatrix<F>) -> Result<DenseMatrix<F>> {
    let decomp = eigh_symmetric(matrix)?;
    let n = matrix.rows();
    let floor = -psd_tolerance::<F>() * F::one().max(matrix.max_abs());
    let mut roots = Vec::with_capacity(n);
    for &lambda in &decomp.eigenvalues {
        if lambda < floor {
            return Err(Error::NotPositiveSemidefinite(
                lambda.to_f64().unwrap_or(f64::NAN),
            ));
        }
        roots.push(lambda.max(F::zero()).sqrt());
    }
    // V * sqrt(D) * V^T
    let mut out = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let mut acc = F::zero();
            for k in 0..n {
                acc = acc + decomp.eigenvectors.at(i, k) * roots[k] * decomp.eigenvectors.at(j, k);
            }
            out.set(i, j, acc);
            out.set(j, i, acc);
        }
    }
    Ok(out)
}

fn psd_tolerance<F: Scalar>() -> F {
    F::of(1e-10).max(F::epsilon() * F::of(4096.0))
}

/// Partial trace of a density matrix over a register of qubits (sites).
///
/// `keep` lists 1-based site indices to retain, site 1 being the most
/// significant qubit; the reduced matrix orders the kept sites as in `keep`,
/// which must be strictly increasing.
pub fn partial_trace<F: Scalar>(
    rho: &DenseMatrix<F>,
    n_sites: usize,
    keep: &[usize],
) -> Result<DenseMatrix<F>> {
    let dim = 1usize << n_sites;
    if rho.rows() != dim || rho.cols() != dim {
        return Err(Error::DimensionMismatch {
            rows: rho.rows(),
            cols: rho.cols(),
            expected: format!("{dim}x{dim} for {n_sites} sites"),
        });
    }
    if keep.is_empty() || keep.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidSiteSubset(
            "keep must be non-empty and strictly increasing".into(),
        ));
    }
    if keep.iter().any(|&s| s == 0 || s > n_sites) {
        return Err(Error::InvalidSiteSubset(format!(
            "site indices must lie in 1..={n_sites}"
        )));
    }

    // Bit position of each site (site 1 is the most significant bit).
    let keep_bits: Vec<usize> = keep.iter().map(|&s| n_sites - s).collect();
    let env_bits: Vec<usize> = (0..n_sites)
        .rev()
        .filter(|b| !keep_bits.contains(b))
        .collect();

    let k = keep.len();
    let kd = 1usize << k;
    let ed = 1usize << env_bits.len();
    let scatter = |compact: usize, bits: &[usize]| -> usize {
        let mut full = 0usize;
        for (pos, &bit) in bits.iter().enumerate() {
            if compact & (1 << (bits.len() - 1 - pos)) != 0 {
                full |= 1 << bit;
            }
        }
        full
    };

    let mut out = DenseMatrix::zeros(kd, kd);
    for a in 0..kd {
        let fa = scatter(a, &keep_bits);
        for b in 0..kd {
            let fb = scatter(b, &keep_bits);
            let mut acc = F::zero();
            for e in 0..ed {
                let fe = scatter(e, &env_bits);
                acc = acc + rho.at(fa | fe, fb | fe);
            }
            out.set(a, b, acc);
        }
    }
    Ok(out)
}

/// Reduced density matrix of a pure state over the kept sites, without
/// materializing the full 2^N x 2^N projector.
pub fn reduced_density_from_state<F: Scalar>(
    state: &[F],
    n_sites: usize,
    keep: &[usize],
) -> Result<DenseMatrix<F>> {
    let dim = 1usize << n_sites;
    if state.len() != dim {
        return Err(Error::DimensionMismatch {
            rows: state.len(),
            cols: 1,
            expected: format!("{dim}-component state for {n_sites} sites"),
        });
    }
    if keep.is_empty() || keep.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidSiteSubset(
            "keep must be non-empty and strictly increasing".into(),
        ));
    }
    if keep.iter().any(|&s| s == 0 || s > n_sites) {
        return Err(Error::InvalidSiteSubset(format!(
            "site indices must lie in 1..={n_sites}"
        )));
    }

    let keep_bits: Vec<usize> = keep.iter().map(|&s| n_sites - s).collect();
    let env_bits: Vec<usize> = (0..n_sites)
        .rev()
        .filter(|b| !keep_bits.contains(b))
        .collect();
    let scatter = |compact: usize, bits: &[usize]| -> usize {
        let mut full = 0usize;
        for (pos, &bit) in bits.iter().enumerate() {
            if compact & (1 << (bits.len() - 1 - pos)) != 0 {
                full |= 1 << bit;
            }
        }
        full
    };

    let kd = 1usize << keep.len();
    let ed = 1usize << env_bits.len();
    let mut out = DenseMatrix::zeros(kd, kd);
    for e in 0..ed {
        let fe = scatter(e, &env_bits);
        for a in 0..kd {
            let sa = state[scatter(a, &keep_bits) | fe];
            if sa == F::zero() {
                continue;
            }
            for b in 0..kd {
                out.add_at(a, b, sa * state[scatter(b, &keep_bits) | fe]);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn eigh_diagonal_input() {
        let m = DenseMatrix::from_rows(&[
            &[3.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0],
            &[0.0, 0.0, 2.0],
        ]);
        let d = eigh_symmetric(&m).unwrap();
        assert_eq!(d.eigenvalues, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn eigh_pauli_x_spectrum() {
        let m = DenseMatrix::from_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let d = eigh_symmetric(&m).unwrap();
        close(d.eigenvalues[0], -1.0, 1e-14);
        close(d.eigenvalues[1], 1.0, 1e-14);
    }

    #[test]
    fn eigh_two_site_flip_block() {
        // (J/4) [[-delta, 2], [2, -delta]] at J = 1, delta = 1: ground -3/4.
        let m = DenseMatrix::from_rows(&[&[-0.25, 0.5], &[0.5, -0.25]]);
        let d = eigh_symmetric(&m).unwrap();
        close(d.eigenvalues[0], -0.75, 1e-14);
    }

    #[test]
    fn eigh_reconstructs_random_symmetric() {
        // Deterministic pseudo-random symmetric matrix.
        let n = 16;
        let mut m = DenseMatrix::zeros(n, n);
        let mut x = 0.5f64;
        for i in 0..n {
            for j in i..n {
                x = (x * 997.0 + 0.123).fract();
                let v = 2.0 * x - 1.0;
                m.set(i, j, v);
                m.set(j, i, v);
            }
        }
        let d = eigh_symmetric(&m).unwrap();
        // Residual ||A v - lambda v||_inf per pair.
        for (k, &lambda) in d.eigenvalues.iter().enumerate() {
            let v = d.eigenvectors.column(k);
            let av = m.apply(&v);
            for i in 0..n {
                close(av[i], lambda * v[i], 1e-10 * m.max_abs().max(1.0));
            }
        }
        // Orthogonality.
        let vt_v = d.eigenvectors.transpose().matmul(&d.eigenvectors);
        assert!(vt_v.max_abs_diff(&DenseMatrix::identity(n)) < 1e-10);
        // Ascending order.
        assert!(d.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn eigh_rejects_asymmetric() {
        let m = DenseMatrix::from_rows(&[&[0.0, 1.0], [0.5, 0.0].as_slice()]);
        assert!(matches!(
            eigh_symmetric(&m),
            Err(Error::NotSymmetric { .. })
        ));
    }

    #[test]
    fn kron_identities() {
        let i2 = DenseMatrix::<f64>::identity(2);
        let i4 = kron(&i2, &i2).unwrap();
        assert_eq!(i4, DenseMatrix::identity(4));

        let sz = DenseMatrix::from_rows(&[&[1.0, 0.0], &[0.0, -1.0]]);
        let zz = kron(&sz, &sz).unwrap();
        for (i, expect) in [1.0, -1.0, -1.0, 1.0].into_iter().enumerate() {
            assert_eq!(zz.at(i, i), expect);
        }
    }

    #[test]
    fn kron_sigma_y_pair_is_antidiagonal() {
        // sigma_y x sigma_y as a real matrix: -(i sigma_y) x (i sigma_y).
        let iy = DenseMatrix::from_rows(&[&[0.0, 1.0], &[-1.0, 0.0]]);
        let yy = kron(&iy, &iy).unwrap().scaled(-1.0);
        let expect = DenseMatrix::from_rows(&[
            &[0.0, 0.0, 0.0, -1.0],
            &[0.0, 0.0, 1.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[-1.0, 0.0, 0.0, 0.0],
        ]);
        assert_eq!(yy, expect);
    }

    #[test]
    fn kron_respects_dimension_cap() {
        let half = DenseMatrix::<f64>::identity(1 << 6);
        let double = DenseMatrix::<f64>::identity(1 << 7);
        assert!(kron(&half, &half).is_ok());
        let too_big = kron(&half, &double);
        assert!(matches!(too_big, Err(Error::DimensionTooLarge(..))));
    }

    #[test]
    fn sqrt_psd_diagonal() {
        let m = DenseMatrix::from_rows(&[
            &[4.0, 0.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 0.0],
        ]);
        let r = sqrt_psd(&m).unwrap();
        let expect = DenseMatrix::from_rows(&[
            &[2.0, 0.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 0.0],
        ]);
        assert!(r.max_abs_diff(&expect) < 1e-12);
    }

    #[test]
    fn sqrt_psd_squares_back() {
        // A = M^T M is PSD by construction.
        let m = DenseMatrix::from_rows(&[
            &[0.7, -0.2, 0.1],
            &[0.4, 0.9, -0.5],
            &[-0.3, 0.2, 0.8],
        ]);
        let a = m.transpose().matmul(&m);
        let r = sqrt_psd(&a).unwrap();
        assert!(r.matmul(&r).max_abs_diff(&a) < 1e-9);
    }

    #[test]
    fn sqrt_psd_rejects_indefinite() {
        let m = DenseMatrix::from_rows(&[&[1.0, 0.0], &[0.0, -0.5]]);
        assert!(matches!(
            sqrt_psd(&m),
            Err(Error::NotPositiveSemidefinite(_))
        ));
    }

    #[test]
    fn partial_trace_product_state() {
        // |up up up><up up up| reduced to any single site is diag(1, 0).
        let mut rho = DenseMatrix::<f64>::zeros(8, 8);
        rho.set(0, 0, 1.0);
        for site in 1..=3 {
            let r = partial_trace(&rho, 3, &[site]).unwrap();
            assert_eq!(r.at(0, 0), 1.0);
            assert_eq!(r.at(1, 1), 0.0);
        }
    }

    #[test]
    fn partial_trace_validates_subset() {
        let rho = DenseMatrix::<f64>::identity(8).scaled(1.0 / 8.0);
        assert!(partial_trace(&rho, 3, &[]).is_err());
        assert!(partial_trace(&rho, 3, &[2, 1]).is_err());
        assert!(partial_trace(&rho, 3, &[4]).is_err());
        assert!(partial_trace(&rho, 3, &[1, 3]).is_ok());
    }

    #[test]
    fn reduced_density_matches_partial_trace() {
        // Random-ish normalized 3-site state.
        let mut state = [0.31, -0.12, 0.45, 0.08, -0.27, 0.52, -0.19, 0.33];
        let norm: f64 = state.iter().map(|x| x * x).sum::<f64>().sqrt();
        for x in &mut state {
            *x /= norm;
        }
        let mut rho = DenseMatrix::zeros(8, 8);
        for i in 0..8 {
            for j in 0..8 {
                rho.set(i, j, state[i] * state[j]);
            }
        }
        for keep in [vec![1usize], vec![2], vec![1, 3], vec![2, 3]] {
            let a = partial_trace(&rho, 3, &keep).unwrap();
            let b = reduced_density_from_state(&state, 3, &keep).unwrap();
            assert!(a.max_abs_diff(&b) < 1e-14);
            close(b.trace(), 1.0, 1e-12);
        }
    }

    #[test]
    fn f32_instantiation_works() {
        let m = DenseMatrix::<f32>::from_rows(&[&[2.0, 1.0], &[1.0, 2.0]]);
        let d = eigh_symmetric(&m).unwrap();
        assert!((d.eigenvalues[0] - 1.0).abs() < 1e-5);
        assert!((d.eigenvalues[1] - 3.0).abs() < 1e-5);
    }
}
